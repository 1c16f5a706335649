#include "sfhad/dense_oracle.hpp"

#include <string>
#include <vector>

#include "sfhad/errors.hpp"
#include "sfhad/mul_counter.hpp"
#include "sfhad/tensor_index.hpp"

namespace sfhad::oracle {

namespace {

void check_capacity(std::size_t rows, std::size_t cols, std::size_t capacity, const char* what) {
  const std::size_t total = checked_mul(rows, cols, what);
  if (total > capacity)
    throw CapacityError(std::string(what) + ": " + std::to_string(total) +
                        " entries exceed the cap of " + std::to_string(capacity));
}

} // namespace

DenseMatrix dense_kronecker(std::span<const DenseMatrix> factors, std::size_t capacity) {
  if (factors.empty()) throw InvalidInputError("dense_kronecker: no factors");
  std::size_t rows = 1;
  std::size_t cols = 1;
  for (const auto& f : factors) {
    rows = checked_mul(rows, f.rows(), "dense_kronecker");
    cols = checked_mul(cols, f.cols(), "dense_kronecker");
  }
  check_capacity(rows, cols, capacity, "dense_kronecker");

  DenseMatrix k = factors[0];
  for (std::size_t d = 1; d < factors.size(); ++d) {
    const DenseMatrix& f = factors[d];
    auto next = DenseMatrix::uninitialized(f.rows() * k.rows(), f.cols() * k.cols());
    for (std::size_t fr = 0; fr < f.rows(); ++fr)
      for (std::size_t kr = 0; kr < k.rows(); ++kr) {
        auto dst = next.row(fr * k.rows() + kr);
        const auto src = k.row(kr);
        for (std::size_t fc = 0; fc < f.cols(); ++fc) {
          const double a = f(fr, fc);
          for (std::size_t kc = 0; kc < k.cols(); ++kc) dst[fc * k.cols() + kc] = src[kc] * a;
        }
      }
    k = std::move(next);
  }
  return k;
}

std::vector<DenseMatrix> direction_factors(const DenseMatrix& basis,
                                           std::span<const double> weights, std::size_t d,
                                           std::size_t direction) {
  if (direction >= d) throw IndexBoundsError("direction_factors: direction out of range");
  std::vector<DenseMatrix> factors;
  factors.reserve(d);
  for (std::size_t i = 0; i < d; ++i)
    factors.push_back(i == direction ? basis : DenseMatrix::diagonal(weights));
  return factors;
}

DenseMatrix dense_hadamard(const DenseMatrix& a, const DenseMatrix& c) {
  if (a.rows() != c.rows() || a.cols() != c.cols())
    throw InvalidInputError("dense_hadamard: shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " and " + std::to_string(c.rows()) + "x" +
                            std::to_string(c.cols()) + " differ");
  DenseMatrix out(a.rows(), a.cols());
  const auto av = a.data();
  const auto cv = c.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] * cv[i];
  mul_counter::add(ov.size());
  return out;
}

DenseMatrix dense_hadamard_sum(std::span<const DenseMatrix> a, const DenseMatrix& c) {
  if (a.empty()) throw InvalidInputError("dense_hadamard_sum: no terms");
  for (const auto& m : a)
    if (m.rows() != c.rows() || m.cols() != c.cols())
      throw InvalidInputError("dense_hadamard_sum: shape mismatch");
  auto out = DenseMatrix::uninitialized(c.rows(), c.cols());
  const auto cv = c.data();
  auto ov = out.data();
  // One sweep over all terms keeps memory traffic at a single pass per matrix.
  std::vector<const double*> terms;
  for (const auto& m : a) terms.push_back(m.data().data());
  for (std::size_t i = 0; i < ov.size(); ++i) {
    double s = 0.0;
    for (const double* t : terms) s += t[i] * cv[i];
    ov[i] = s;
  }
  mul_counter::add(a.size() * ov.size());
  return out;
}

std::vector<double> dense_row_sums(const DenseMatrix& a) {
  std::vector<double> sums(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (double v : a.row(r)) s += v;
    sums[r] = s;
  }
  return sums;
}

DenseMatrix dense_operand(const TwoPointOperand& operand, std::size_t rows, std::size_t cols,
                          std::size_t capacity) {
  if (rows > operand.row_size() || cols > operand.column_size())
    throw IndexBoundsError("dense_operand: operand does not cover the requested shape");
  check_capacity(rows, cols, capacity, "dense_operand");
  auto c = DenseMatrix::uninitialized(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) c(i, j) = operand(i, j);
  return c;
}

DenseMatrix scatter(const SparseFactorSet& sparse, const SparsityPattern& pattern,
                    std::size_t direction) {
  if (direction >= pattern.dim() || direction >= sparse.dim())
    throw IndexBoundsError("scatter: direction out of range");
  const DenseMatrix& f = sparse[direction];
  const std::size_t n = pattern.columns_size_1d();
  if (f.rows() != pattern.compressed_rows() || f.cols() != n)
    throw InvalidInputError("scatter: factor shape does not match pattern");
  DenseMatrix dense(pattern.compressed_rows(), pattern.column_layout().size());
  std::vector<bool> filled(dense.size(), false);
  for (std::size_t k = 0; k < pattern.entries(); ++k) {
    const std::size_t r = pattern.row(k, direction);
    const std::size_t c = pattern.column(k, direction);
    const std::size_t pos = r * dense.cols() + c;
    if (filled[pos])
      throw InternalConsistencyError("scatter: pattern repeats position (" + std::to_string(r) +
                                     ", " + std::to_string(c) + ")");
    filled[pos] = true;
    dense(r, c) = f(r, k % n);
  }
  return dense;
}

DenseMatrix gather(const DenseMatrix& dense, const SparsityPattern& pattern,
                   std::size_t direction) {
  if (direction >= pattern.dim()) throw IndexBoundsError("gather: direction out of range");
  if (dense.rows() != pattern.compressed_rows() || dense.cols() != pattern.column_layout().size())
    throw InvalidInputError("gather: dense shape does not match pattern");
  const std::size_t n = pattern.columns_size_1d();
  DenseMatrix f(pattern.compressed_rows(), n);
  for (std::size_t k = 0; k < pattern.entries(); ++k) {
    const std::size_t r = pattern.row(k, direction);
    f(r, k % n) = dense(r, pattern.column(k, direction));
  }
  return f;
}

} // namespace sfhad::oracle
