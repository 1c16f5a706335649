#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sfhad/allocation_ledger.hpp"
#include "sfhad/dense_matrix.hpp"
#include "sfhad/tensor_index.hpp"

namespace sfhad {

/// Nonzero positions of the d Kronecker factors
///   I (x) ... (x) A (x) ... (x) I,   A in slot j, j = 0..d-1,
/// where A is a dense m x n 1D matrix and the other slots are n x n diagonal.
/// Direction j's factor maps the n^d column space onto a row space with extent
/// m in direction j and n elsewhere (both x-fastest).
///
/// Entry k = R * n + l is the l-th nonzero (ascending column) of row R, for
/// every direction; R ranges over m * n^(d-1) rows and l over n columns.
class SparsityPattern {
public:
  std::size_t dim() const noexcept { return d_; }
  std::size_t rows_size_1d() const noexcept { return m_; }
  std::size_t columns_size_1d() const noexcept { return n_; }
  /// m * n^d.
  std::size_t entries() const noexcept { return entries_; }
  /// m * n^(d-1): rows of each direction's compressed factor.
  std::size_t compressed_rows() const noexcept { return entries_ / n_; }

  std::size_t row(std::size_t k, std::size_t direction) const noexcept {
    return rows_[k * d_ + direction];
  }
  std::size_t column(std::size_t k, std::size_t direction) const noexcept {
    return columns_[k * d_ + direction];
  }

  /// Layout of direction j's row space (extent m in slot j).
  const TensorLayout& row_layout(std::size_t direction) const { return row_layouts_.at(direction); }
  const TensorLayout& column_layout() const noexcept { return column_layout_; }

  /// Scalars held by the index arrays (both rows and columns).
  std::size_t stored_numbers() const noexcept { return rows_.size() + columns_.size(); }

private:
  SparsityPattern(std::size_t rows_size_1d, std::size_t columns_size_1d, std::size_t d);
  friend SparsityPattern build_sparsity_pattern(std::size_t, std::size_t, std::size_t);

  std::size_t d_;
  std::size_t m_;
  std::size_t n_;
  std::size_t entries_;
  std::vector<TensorLayout> row_layouts_;
  TensorLayout column_layout_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> columns_;
  LedgerCharge charge_;
};

/// Enumerates the pattern. For d = 3 and m = n the entry order and indices are
///   row = i n^2 + j n + k,  x col = i n^2 + j n + l,
///   y col = i n^2 + l n + k,  z col = l n^2 + j n + k
/// over nested loops (i, j, k, l).
/// Throws InvalidInputError for zero sizes, CapacityError on index overflow.
SparsityPattern build_sparsity_pattern(std::size_t rows_size_1d, std::size_t columns_size_1d,
                                       std::size_t d);

/// d compressed factors of shape (m * n^(d-1)) x n; entry (R, l) of factor j is
/// the value at pattern entry R * n + l in direction j.
struct SparseFactorSet {
  std::vector<DenseMatrix> factors;

  std::size_t dim() const noexcept { return factors.size(); }
  DenseMatrix& operator[](std::size_t j) { return factors[j]; }
  const DenseMatrix& operator[](std::size_t j) const { return factors[j]; }
  std::size_t stored_numbers() const noexcept;
};

/// Direction j's factor holds basis(r_j, c_j) times the weights at every
/// other direction's row index; the product runs in direction order so it is
/// bitwise identical to the explicit Kronecker product.
/// Throws InvalidInputError unless basis is m x n and weights has n entries.
SparseFactorSet assemble_basis_factors(const SparsityPattern& pattern, const DenseMatrix& basis,
                                       std::span<const double> weights);

/// Matrix C given only through its generator, evaluated lazily at (row, column)
/// flat indices. Either rank one, C_ij = a_i b_j, or a two-point function
/// C_ij = f(u_i, v_j). Volume operands use the same vector on both sides.
class TwoPointOperand {
public:
  using Function = std::function<double(double, double)>;

  static TwoPointOperand rank_one(std::vector<double> c);
  static TwoPointOperand rank_one(std::vector<double> row_values, std::vector<double> column_values);
  static TwoPointOperand two_point(Function f, std::vector<double> u);
  static TwoPointOperand two_point(Function f, std::vector<double> row_state,
                                   std::vector<double> column_state);

  bool is_rank_one() const noexcept { return !function_; }
  std::size_t row_size() const noexcept { return rows_.size(); }
  std::size_t column_size() const noexcept { return columns().size(); }

  double operator()(std::size_t row, std::size_t column) const {
    const double a = rows_[row];
    const double b = columns()[column];
    return function_ ? function_(a, b) : a * b;
  }

  std::span<const double> row_values() const noexcept { return rows_; }
  std::span<const double> column_values() const noexcept { return columns(); }

private:
  TwoPointOperand() = default;
  const std::vector<double>& columns() const noexcept { return same_sides_ ? rows_ : columns_; }

  Function function_;
  std::vector<double> rows_;
  std::vector<double> columns_;
  bool same_sides_ = true;
};

/// Gathers C at the pattern positions: m * n^d evaluations per direction.
/// Throws IndexBoundsError if the operand does not cover the row or column space.
SparseFactorSet assemble_operand_factors(const SparsityPattern& pattern,
                                         const TwoPointOperand& operand);

/// Entrywise product per direction, m * n^d multiplications each, added to
/// mul_counter. Throws InvalidInputError on shape mismatch.
SparseFactorSet hadamard_evaluate(const SparseFactorSet& basis, const SparseFactorSet& operand);

/// Row sums of each direction's product: vector j has m * n^(d-1) entries and
/// equals the dense (A_j o C) * 1.
std::vector<std::vector<double>> hadamard_row_sum(const SparseFactorSet& product,
                                                  const SparsityPattern& pattern);

} // namespace sfhad
