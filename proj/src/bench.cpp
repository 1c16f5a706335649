#include "sfhad/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "sfhad/dense_oracle.hpp"
#include "sfhad/errors.hpp"
#include "sfhad/mul_counter.hpp"
#include "sfhad/operators_1d.hpp"
#include "sfhad/tensor_index.hpp"

namespace sfhad::bench {

namespace {

using Clock = std::chrono::steady_clock;

// Above this n the dense comparison is replaced by row-sum identities.
constexpr std::size_t kDenseCheckMaxN = 6;
constexpr double kOracleTolerance = 1e-13;
constexpr double kRowSumTolerance = 1e-12;

std::int64_t now_micros() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

double max_relative_gap(std::span<const double> got, std::span<const double> want) {
  double gap = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    gap = std::max(gap, std::abs(got[i] - want[i]));
    ref = std::max(ref, std::abs(want[i]));
  }
  return ref == 0.0 ? gap : gap / ref;
}

// r-th entry: c_r * sum_j [(I (x) .. D .. (x) I) c]_r, the row sums of sum_j (D_j o c c^T).
std::vector<double> expected_row_sums(const DenseMatrix& diff, std::span<const double> c,
                                      std::size_t d) {
  const std::size_t n = diff.rows();
  std::vector<double> total(c.size(), 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<KronFactor> factors;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == j)
        factors.emplace_back(diff);
      else
        factors.emplace_back(Diagonal{std::vector<double>(n, 1.0)});
    }
    const auto dc = kronecker_apply(factors, c);
    for (std::size_t r = 0; r < c.size(); ++r) total[r] += c[r] * dc[r];
  }
  return total;
}

std::vector<double> summed_sparse_row_sums(const SparseFactorSet& product,
                                           const SparsityPattern& pattern) {
  const auto sums = hadamard_row_sum(product, pattern);
  std::vector<double> total(pattern.compressed_rows(), 0.0);
  for (const auto& s : sums)
    for (std::size_t r = 0; r < s.size(); ++r) total[r] += s[r];
  return total;
}

DenseMatrix scatter_sum(const SparseFactorSet& product, const SparsityPattern& pattern) {
  DenseMatrix total = oracle::scatter(product, pattern, 0);
  for (std::size_t j = 1; j < product.dim(); ++j) {
    const DenseMatrix s = oracle::scatter(product, pattern, j);
    auto t = total.data();
    const auto sv = s.data();
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += sv[i];
  }
  return total;
}

void gate(bool ok, Method method, std::size_t n, const std::string& what, double gap) {
  if (!ok) {
    std::ostringstream msg;
    msg << "correctness gate failed for " << to_string(method) << " at n=" << n << ": " << what
        << " (relative gap " << gap << ")";
    throw CorrectnessGateError(msg.str());
  }
}

template <class Fn>
double time_per_call(Fn&& fn, double min_seconds) {
  std::size_t iterations = 0;
  const auto start = Clock::now();
  double elapsed = 0.0;
  do {
    fn();
    ++iterations;
    elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  } while (elapsed < min_seconds);
  return elapsed / static_cast<double>(iterations);
}

} // namespace

std::string to_string(Method m) { return m == Method::Dense ? "dense" : "sumfac"; }

Method parse_method(const std::string& name) {
  if (name == "dense") return Method::Dense;
  if (name == "sumfac") return Method::SumFactorized;
  throw InvalidInputError("unknown method '" + name + "' (expected dense or sumfac)");
}

void validate(const BenchConfig& config) {
  if (config.d < 1) throw InvalidInputError("dimension must be >= 1");
  if (config.n_min < 1) throw InvalidInputError("n_min must be >= 1");
  if (config.n_max < config.n_min) throw InvalidInputError("n_max must be >= n_min");
  if (config.repetitions < 1) throw InvalidInputError("repetitions must be >= 1");
  if (!(config.low > 0.0)) throw InvalidInputError("operand range low must be > 0");
  if (!(config.low < config.high)) throw InvalidInputError("operand range needs low < high");
  if (config.methods.empty()) throw InvalidInputError("no methods selected");
  if (!(config.min_repetition_seconds >= 0.0))
    throw InvalidInputError("minimum repetition time must be >= 0");
}

std::vector<double> make_operand_vector(const BenchConfig& config, std::size_t n) {
  std::seed_seq seq{config.seed, static_cast<std::uint64_t>(config.d), static_cast<std::uint64_t>(n)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> dist(config.low, config.high);
  std::vector<double> c(checked_pow(n, config.d, "operand vector"));
  for (double& x : c) x = dist(rng);
  return c;
}

std::uint64_t theoretical_mul_count(Method method, std::size_t d, std::size_t n) {
  const std::size_t exponent = method == Method::Dense ? 2 * d : d + 1;
  return static_cast<std::uint64_t>(d) * checked_pow(n, exponent, "multiplication count");
}

DenseMatrix dense_directional_hadamard(const DenseMatrix& diff, std::span<const double> c,
                                       std::size_t d, std::size_t capacity) {
  const std::size_t n = diff.rows();
  const std::vector<double> ones(n, 1.0);
  const DenseMatrix cmat =
      oracle::dense_operand(TwoPointOperand::rank_one({c.begin(), c.end()}), c.size(), c.size(),
                            capacity);
  std::vector<DenseMatrix> kron;
  kron.reserve(d);
  for (std::size_t j = 0; j < d; ++j)
    kron.push_back(oracle::dense_kronecker(oracle::direction_factors(diff, ones, d, j), capacity));
  return oracle::dense_hadamard_sum(kron, cmat);
}

SparseFactorSet sumfac_directional_hadamard(const SparsityPattern& pattern, const DenseMatrix& diff,
                                            std::span<const double> c) {
  const std::vector<double> ones(diff.cols(), 1.0);
  const SparseFactorSet basis = assemble_basis_factors(pattern, diff, ones);
  const SparseFactorSet operand =
      assemble_operand_factors(pattern, TwoPointOperand::rank_one({c.begin(), c.end()}));
  return hadamard_evaluate(basis, operand);
}

BenchResult run_benchmark(const BenchConfig& config) {
  validate(config);
#if defined(__GLIBC__)
  // Keep large freed blocks in the heap; otherwise every dense evaluation maps
  // fresh pages and the timings measure kernel page zeroing.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
  BenchResult result;
  const std::size_t d = config.d;
  volatile double sink = 0.0;

  for (std::size_t n = config.n_min; n <= config.n_max; ++n) {
    const std::vector<double> c = make_operand_vector(config, n);
    const DenseMatrix diff = lagrange_diff_matrix(gauss_legendre(n));
    const std::size_t tensor_size = c.size();

    std::size_t dense_entries = 0;
    bool dense_fits = true;
    try {
      dense_entries = checked_mul(tensor_size, tensor_size, "dense benchmark");
      dense_fits = dense_entries <= config.dense_capacity;
    } catch (const CapacityError&) {
      dense_fits = false;
    }

    const SparsityPattern pattern = build_sparsity_pattern(n, n, d);

    // Correctness gate, run once per n before anything is timed.
    const bool wants_dense =
        std::find(config.methods.begin(), config.methods.end(), Method::Dense) != config.methods.end();
    if (n <= kDenseCheckMaxN && dense_fits) {
      const DenseMatrix dense = dense_directional_hadamard(diff, c, d, config.dense_capacity);
      const DenseMatrix sparse = scatter_sum(sumfac_directional_hadamard(pattern, diff, c), pattern);
      const double gap = max_relative_difference(sparse, dense);
      gate(gap <= kOracleTolerance, Method::SumFactorized, n, "dense oracle comparison", gap);
    } else {
      const auto expected = expected_row_sums(diff, c, d);
      const auto sparse = summed_sparse_row_sums(sumfac_directional_hadamard(pattern, diff, c), pattern);
      const double gap = max_relative_gap(sparse, expected);
      gate(gap <= kRowSumTolerance, Method::SumFactorized, n, "row-sum identity", gap);
      if (wants_dense && dense_fits) {
        const auto dense = oracle::dense_row_sums(dense_directional_hadamard(diff, c, d, config.dense_capacity));
        const double dgap = max_relative_gap(dense, expected);
        gate(dgap <= kRowSumTolerance, Method::Dense, n, "row-sum identity", dgap);
      }
    }

    for (Method method : config.methods) {
      if (method == Method::Dense && !dense_fits) {
        result.skipped.push_back({n, method,
                                  "n^(2d) entries exceed the dense capacity of " +
                                      std::to_string(config.dense_capacity)});
        continue;
      }

      auto evaluate = [&] {
        if (method == Method::Dense) {
          const DenseMatrix out = dense_directional_hadamard(diff, c, d, config.dense_capacity);
          sink = sink + out(0, 0);
        } else if (config.include_pattern) {
          const SparsityPattern p = build_sparsity_pattern(n, n, d);
          const SparseFactorSet out = sumfac_directional_hadamard(p, diff, c);
          sink = sink + out[0](0, 0);
        } else {
          const SparseFactorSet out = sumfac_directional_hadamard(pattern, diff, c);
          sink = sink + out[0](0, 0);
        }
      };

      // Warm-up, discarded; it also measures the multiplication count.
      const std::uint64_t before = mul_counter::value();
      evaluate();
      const std::uint64_t mul_count = mul_counter::value() - before;
      if (mul_count != theoretical_mul_count(method, d, n))
        throw CorrectnessGateError("multiplication count " + std::to_string(mul_count) + " for " +
                                   to_string(method) + " at n=" + std::to_string(n) +
                                   " differs from the theoretical count");

      for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        const double elapsed = time_per_call(evaluate, config.min_repetition_seconds);
        result.records.push_back({d, n, method, rep, elapsed, mul_count, now_micros()});
      }
    }
  }
  return result;
}

std::vector<std::pair<std::size_t, double>> median_elapsed(const std::vector<BenchRecord>& records,
                                                           Method method) {
  std::map<std::size_t, std::vector<double>> by_n;
  for (const auto& r : records)
    if (r.method == method && r.elapsed_s > 0.0) by_n[r.n].push_back(r.elapsed_s);
  std::vector<std::pair<std::size_t, double>> out;
  for (auto& [n, times] : by_n) {
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    const double median = times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
    out.emplace_back(n, median);
  }
  return out;
}

double fit_slope(const std::vector<BenchRecord>& records, Method method) {
  const auto points = median_elapsed(records, method);
  if (points.size() < 3)
    throw InsufficientDataError("fit_slope: need at least 3 distinct n for " + to_string(method) +
                                ", have " + std::to_string(points.size()));
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, t] : points) {
    sx += std::log(static_cast<double>(n));
    sy += std::log(t);
  }
  const double count = static_cast<double>(points.size());
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, t] : points) {
    const double dx = std::log(static_cast<double>(n)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(t) - my);
  }
  return sxy / sxx;
}

void emit_csv(std::vector<BenchRecord> records, const std::filesystem::path& path) {
  std::sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    return std::tie(a.d, a.n, a.method, a.rep) < std::tie(b.d, b.n, b.method, b.rep);
  });
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << kCsvHeader << '\n';
  char elapsed[64];
  for (const auto& r : records) {
    std::snprintf(elapsed, sizeof elapsed, "%.17g", r.elapsed_s);
    out << r.d << ',' << r.n << ',' << to_string(r.method) << ',' << r.rep << ',' << elapsed << ','
        << r.mul_count << ',' << r.timestamp << '\n';
  }
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

std::vector<BenchRecord> parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw IoError(path.string(), "missing or unexpected CSV header");
  std::vector<BenchRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw IoError(path.string(), "line " + std::to_string(line_no) + " has " +
                                       std::to_string(fields.size()) + " fields");
    try {
      BenchRecord r;
      r.d = std::stoull(fields[0]);
      r.n = std::stoull(fields[1]);
      r.method = parse_method(fields[2]);
      r.rep = std::stoull(fields[3]);
      r.elapsed_s = std::stod(fields[4]);
      r.mul_count = std::stoull(fields[5]);
      r.timestamp = std::stoll(fields[6]);
      records.push_back(r);
    } catch (const std::exception& e) {
      throw IoError(path.string(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

} // namespace sfhad::bench
