#include "sfhad/hadamard_kernel.hpp"

#include <string>
#include <utility>

#include "sfhad/errors.hpp"
#include "sfhad/mul_counter.hpp"

namespace sfhad {

namespace {

std::vector<TensorLayout> make_row_layouts(std::size_t m, std::size_t n, std::size_t d) {
  std::vector<TensorLayout> layouts;
  layouts.reserve(d);
  for (std::size_t j = 0; j < d; ++j) layouts.push_back(TensorLayout::with_direction(d, n, j, m));
  return layouts;
}

std::size_t validated_entries(std::size_t m, std::size_t n, std::size_t d) {
  if (m == 0 || n == 0 || d == 0)
    throw InvalidInputError("build_sparsity_pattern: sizes and dimension must be >= 1");
  const std::size_t entries = checked_mul(m, checked_pow(n, d, "sparsity pattern"), "sparsity pattern");
  checked_mul(entries, d, "sparsity pattern");
  return entries;
}

} // namespace

SparsityPattern::SparsityPattern(std::size_t rows_size_1d, std::size_t columns_size_1d,
                                 std::size_t d)
    : d_(d),
      m_(rows_size_1d),
      n_(columns_size_1d),
      entries_(validated_entries(rows_size_1d, columns_size_1d, d)),
      row_layouts_(make_row_layouts(rows_size_1d, columns_size_1d, d)),
      column_layout_(TensorLayout::uniform(d, columns_size_1d)),
      rows_(entries_ * d),
      columns_(entries_ * d),
      charge_(2 * entries_ * d) {}

SparsityPattern build_sparsity_pattern(std::size_t rows_size_1d, std::size_t columns_size_1d,
                                       std::size_t d) {
  SparsityPattern p(rows_size_1d, columns_size_1d, d);
  const std::size_t n = columns_size_1d;
  const std::size_t row_count = p.compressed_rows();
  std::vector<std::size_t> multi(d);
  for (std::size_t j = 0; j < d; ++j) {
    const TensorLayout& rows = p.row_layouts_[j];
    const std::size_t col_stride = p.column_layout_.stride(j);
    for (std::size_t r = 0; r < row_count; ++r) {
      rows.unflatten_into(r, multi);
      // Column of the l = 0 nonzero: same 1D indices, slot j zeroed.
      multi[j] = 0;
      const std::size_t base_col = p.column_layout_.flatten(multi);
      for (std::size_t l = 0; l < n; ++l) {
        const std::size_t k = r * n + l;
        p.rows_[k * d + j] = r;
        p.columns_[k * d + j] = base_col + l * col_stride;
      }
    }
  }
  return p;
}

std::size_t SparseFactorSet::stored_numbers() const noexcept {
  std::size_t total = 0;
  for (const auto& f : factors) total += f.size();
  return total;
}

SparseFactorSet assemble_basis_factors(const SparsityPattern& pattern, const DenseMatrix& basis,
                                       std::span<const double> weights) {
  const std::size_t d = pattern.dim();
  const std::size_t m = pattern.rows_size_1d();
  const std::size_t n = pattern.columns_size_1d();
  if (basis.rows() != m || basis.cols() != n)
    throw InvalidInputError("assemble_basis_factors: basis is " + std::to_string(basis.rows()) +
                            "x" + std::to_string(basis.cols()) + ", pattern expects " +
                            std::to_string(m) + "x" + std::to_string(n));
  if (weights.size() != n)
    throw InvalidInputError("assemble_basis_factors: expected " + std::to_string(n) +
                            " weights, got " + std::to_string(weights.size()));

  SparseFactorSet out;
  out.factors.reserve(d);
  std::vector<std::size_t> multi(d);
  for (std::size_t j = 0; j < d; ++j) {
    DenseMatrix& f = out.factors.emplace_back(pattern.compressed_rows(), n);
    auto values = f.data();
    const TensorLayout& row_layout = pattern.row_layout(j);
    const TensorLayout& col_layout = pattern.column_layout();
    double prefix = 1.0;
    for (std::size_t k = 0; k < pattern.entries(); ++k) {
      const std::size_t row = pattern.row(k, j);
      if (k % n == 0) {
        row_layout.unflatten_into(row, multi);
        prefix = 1.0;
        for (std::size_t i = 0; i < j; ++i) prefix *= weights[multi[i]];
      }
      const double b = basis(multi[j], col_layout.component(pattern.column(k, j), j));
      double v = j == 0 ? b : prefix * b;
      for (std::size_t i = j + 1; i < d; ++i) v *= weights[multi[i]];
      values[row * n + k % n] = v;
    }
  }
  return out;
}

TwoPointOperand TwoPointOperand::rank_one(std::vector<double> c) {
  TwoPointOperand op;
  op.rows_ = std::move(c);
  return op;
}

TwoPointOperand TwoPointOperand::rank_one(std::vector<double> row_values,
                                          std::vector<double> column_values) {
  TwoPointOperand op;
  op.rows_ = std::move(row_values);
  op.columns_ = std::move(column_values);
  op.same_sides_ = false;
  return op;
}

TwoPointOperand TwoPointOperand::two_point(Function f, std::vector<double> u) {
  if (!f) throw InvalidInputError("TwoPointOperand: empty two-point function");
  TwoPointOperand op;
  op.function_ = std::move(f);
  op.rows_ = std::move(u);
  return op;
}

TwoPointOperand TwoPointOperand::two_point(Function f, std::vector<double> row_state,
                                           std::vector<double> column_state) {
  TwoPointOperand op = two_point(std::move(f), std::move(row_state));
  op.columns_ = std::move(column_state);
  op.same_sides_ = false;
  return op;
}

SparseFactorSet assemble_operand_factors(const SparsityPattern& pattern,
                                         const TwoPointOperand& operand) {
  const std::size_t d = pattern.dim();
  const std::size_t n = pattern.columns_size_1d();
  if (operand.row_size() < pattern.compressed_rows())
    throw IndexBoundsError("assemble_operand_factors: operand covers " +
                           std::to_string(operand.row_size()) + " rows, pattern needs " +
                           std::to_string(pattern.compressed_rows()));
  if (operand.column_size() < pattern.column_layout().size())
    throw IndexBoundsError("assemble_operand_factors: operand covers " +
                           std::to_string(operand.column_size()) + " columns, pattern needs " +
                           std::to_string(pattern.column_layout().size()));

  SparseFactorSet out;
  out.factors.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    DenseMatrix& f = out.factors.emplace_back(pattern.compressed_rows(), n);
    auto values = f.data();
    if (operand.is_rank_one()) {
      const auto a = operand.row_values();
      const auto b = operand.column_values();
      for (std::size_t k = 0; k < pattern.entries(); ++k)
        values[k] = a[pattern.row(k, j)] * b[pattern.column(k, j)];
    } else {
      for (std::size_t k = 0; k < pattern.entries(); ++k)
        values[k] = operand(pattern.row(k, j), pattern.column(k, j));
    }
  }
  return out;
}

SparseFactorSet hadamard_evaluate(const SparseFactorSet& basis, const SparseFactorSet& operand) {
  if (basis.dim() != operand.dim())
    throw InvalidInputError("hadamard_evaluate: factor sets have different dimension counts");
  SparseFactorSet out;
  out.factors.reserve(basis.dim());
  std::uint64_t multiplications = 0;
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const DenseMatrix& a = basis[j];
    const DenseMatrix& c = operand[j];
    if (a.rows() != c.rows() || a.cols() != c.cols())
      throw InvalidInputError("hadamard_evaluate: shape mismatch in direction " + std::to_string(j));
    DenseMatrix& p = out.factors.emplace_back(a.rows(), a.cols());
    const auto av = a.data();
    const auto cv = c.data();
    auto pv = p.data();
    for (std::size_t k = 0; k < pv.size(); ++k) pv[k] = av[k] * cv[k];
    multiplications += pv.size();
  }
  mul_counter::add(multiplications);
  return out;
}

std::vector<std::vector<double>> hadamard_row_sum(const SparseFactorSet& product,
                                                  const SparsityPattern& pattern) {
  if (product.dim() != pattern.dim())
    throw InvalidInputError("hadamard_row_sum: factor set and pattern dimension counts differ");
  std::vector<std::vector<double>> sums(product.dim());
  for (std::size_t j = 0; j < product.dim(); ++j) {
    const DenseMatrix& p = product[j];
    if (p.rows() != pattern.compressed_rows() || p.cols() != pattern.columns_size_1d())
      throw InvalidInputError("hadamard_row_sum: factor shape does not match pattern");
    sums[j].assign(p.rows(), 0.0);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      double s = 0.0;
      for (double v : p.row(r)) s += v;
      sums[j][r] = s;
    }
  }
  return sums;
}

} // namespace sfhad
