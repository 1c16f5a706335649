#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfhad/dense_matrix.hpp"
#include "sfhad/hadamard_kernel.hpp"

namespace sfhad::bench {

enum class Method { Dense, SumFactorized };

/// "dense" / "sumfac".
std::string to_string(Method m);
/// Throws InvalidInputError for an unknown name.
Method parse_method(const std::string& name);

struct BenchConfig {
  std::size_t d = 3;
  std::size_t n_min = 3;
  std::size_t n_max = 15;
  std::size_t repetitions = 5;
  std::uint64_t seed = 20230101;
  std::vector<Method> methods{Method::Dense, Method::SumFactorized};
  std::filesystem::path output = "results.csv";
  bool include_pattern = false;
  double low = 1e-8;
  double high = 30.0;
  /// Each repetition repeats the kernel until at least this much time has
  /// passed and records the per-evaluation average.
  double min_repetition_seconds = 0.02;
  /// Largest dense matrix, in entries, the dense method may materialize.
  std::size_t dense_capacity = 100'000'000;
};

/// Throws InvalidInputError describing the first violated constraint.
void validate(const BenchConfig& config);

struct BenchRecord {
  std::size_t d = 0;
  std::size_t n = 0;
  Method method = Method::SumFactorized;
  std::size_t rep = 0;
  double elapsed_s = 0.0;
  std::uint64_t mul_count = 0;
  /// Microseconds since the Unix epoch when the repetition finished.
  std::int64_t timestamp = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

/// A (method, n) point that was skipped rather than timed.
struct SkippedPoint {
  std::size_t n = 0;
  Method method = Method::Dense;
  std::string reason;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<SkippedPoint> skipped;
};

/// c uniform in [low, high], reproducible from (seed, d, n).
std::vector<double> make_operand_vector(const BenchConfig& config, std::size_t n);

/// Theoretical multiplication count of the timed Hadamard stage:
/// d n^(d+1) for the sum-factorized path, d n^(2d) for the dense path.
std::uint64_t theoretical_mul_count(Method method, std::size_t d, std::size_t n);

/// Dense route: sum_j (I (x) .. D .. (x) I) o C with every matrix materialized.
DenseMatrix dense_directional_hadamard(const DenseMatrix& diff, std::span<const double> c,
                                       std::size_t d, std::size_t capacity);

/// Sum-factorized route: pattern-compressed (I (x) .. D .. (x) I) o C for each direction.
SparseFactorSet sumfac_directional_hadamard(const SparsityPattern& pattern, const DenseMatrix& diff,
                                            std::span<const double> c);

/// Sweeps n over [n_min, n_max] for each requested method. Points too large
/// for the dense capacity are skipped. Throws CorrectnessGateError if a point
/// fails its pre-timing correctness check.
BenchResult run_benchmark(const BenchConfig& config);

/// Median elapsed time per n for one method, ascending in n.
std::vector<std::pair<std::size_t, double>> median_elapsed(const std::vector<BenchRecord>& records,
                                                           Method method);

/// Least-squares slope of log(median elapsed) against log(n).
/// Throws InsufficientDataError with fewer than 3 distinct n.
double fit_slope(const std::vector<BenchRecord>& records, Method method);

inline constexpr const char* kCsvHeader = "d,n,method,rep,elapsed_s,mul_count,timestamp";

/// Writes the header and one row per record sorted by (d, n, method, rep).
/// Throws IoError naming the path.
void emit_csv(std::vector<BenchRecord> records, const std::filesystem::path& path);

/// Reads a file written by emit_csv. Throws IoError on unreadable or malformed input.
std::vector<BenchRecord> parse_csv(const std::filesystem::path& path);

} // namespace sfhad::bench
