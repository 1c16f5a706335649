#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sfhad/dense_matrix.hpp"
#include "sfhad/hadamard_kernel.hpp"

namespace sfhad::oracle {

/// Default limit on the entries of any matrix the oracle materializes.
inline constexpr std::size_t kDefaultCapacity = 100'000'000;

/// Explicit Kronecker product with factor k acting on direction k of the
/// x-fastest layout, so entry ((r_0..r_{d-1}), (c_0..c_{d-1})) is
/// f_0(r_0,c_0) * f_1(r_1,c_1) * ... multiplied left to right.
/// The textbook A (x) B (A on the slow index) is dense_kronecker({B, A}).
/// Throws CapacityError above `capacity` entries.
DenseMatrix dense_kronecker(std::span<const DenseMatrix> factors,
                            std::size_t capacity = kDefaultCapacity);

/// Factors for direction j: basis in slot j, diag(weights) elsewhere.
std::vector<DenseMatrix> direction_factors(const DenseMatrix& basis,
                                           std::span<const double> weights, std::size_t d,
                                           std::size_t direction);

/// Entrywise product; adds rows * cols to mul_counter.
/// Throws InvalidInputError on shape mismatch.
DenseMatrix dense_hadamard(const DenseMatrix& a, const DenseMatrix& c);

/// sum_k a[k] o c in one sweep; adds a.size() * rows * cols to mul_counter.
DenseMatrix dense_hadamard_sum(std::span<const DenseMatrix> a, const DenseMatrix& c);

std::vector<double> dense_row_sums(const DenseMatrix& a);

/// Materializes C(i, j) for i < rows, j < cols.
DenseMatrix dense_operand(const TwoPointOperand& operand, std::size_t rows, std::size_t cols,
                          std::size_t capacity = kDefaultCapacity);

/// Places direction j's compressed factor at its pattern positions in a dense
/// (m n^(d-1)) x n^d matrix. Throws InternalConsistencyError on a repeated position.
DenseMatrix scatter(const SparseFactorSet& sparse, const SparsityPattern& pattern,
                    std::size_t direction);

/// Inverse of scatter for one direction: reads the dense matrix at the pattern positions.
DenseMatrix gather(const DenseMatrix& dense, const SparsityPattern& pattern, std::size_t direction);

} // namespace sfhad::oracle
