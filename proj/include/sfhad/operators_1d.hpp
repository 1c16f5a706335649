#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "sfhad/dense_matrix.hpp"

namespace sfhad {

enum class QuadratureKind { GaussLegendre, GaussLobattoLegendre };

/// One-dimensional quadrature on [-1, 1] with strictly increasing nodes.
struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::GaussLegendre;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Roots of P_n by Newton iteration from Chebyshev guesses.
/// Throws InvalidInputError for n == 0, NumericalFailure if a root does not converge.
QuadratureRule gauss_legendre(std::size_t n);

/// Endpoints plus the roots of P'_{n-1}. Requires n >= 2.
QuadratureRule gauss_lobatto(std::size_t n);

QuadratureRule make_rule(QuadratureKind kind, std::size_t n);

/// Legendre polynomial P_k(x) and its derivative, by the three-term recurrence.
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(std::size_t k, double x) noexcept;

/// Barycentric weights 1 / prod_{j != i} (x_i - x_j).
/// Throws InvalidInputError if two nodes coincide.
std::vector<double> barycentric_weights(std::span<const double> nodes);

/// D(i, j) = l_j'(x_i) for the Lagrange basis collocated on `nodes`.
DenseMatrix lagrange_diff_matrix(std::span<const double> nodes);
DenseMatrix lagrange_diff_matrix(const QuadratureRule& rule);

/// L(i, j) = l_j(points_i): interpolation from `nodes` to `points` (rows = points).
DenseMatrix lagrange_interpolation_matrix(std::span<const double> nodes,
                                          std::span<const double> points);

/// V(i, k) = orthonormal Legendre sqrt((2k+1)/2) P_k evaluated at node i.
DenseMatrix legendre_vandermonde(const QuadratureRule& rule);

/// Derivative of the orthonormal Legendre modes at the nodes.
DenseMatrix legendre_vandermonde_derivative(const QuadratureRule& rule);

/// Pi = (V^T W V)^{-1} V^T W, so that Pi V = I.
DenseMatrix projection_operator(const QuadratureRule& rule, const DenseMatrix& vandermonde);

/// 1D building blocks on one quadrature rule.
struct Operator1D {
  QuadratureRule rule;
  DenseMatrix diff;
  DenseMatrix vandermonde;
  DenseMatrix vandermonde_derivative;
  DenseMatrix projection;
  std::vector<double> weights_diag;
};

Operator1D make_operator_1d(QuadratureKind kind, std::size_t n);

/// diag(w) * a.
DenseMatrix scale_rows(std::span<const double> w, const DenseMatrix& a);

/// A diagonal Kronecker factor stored by its diagonal.
struct Diagonal {
  std::vector<double> entries;
};

using KronFactor = std::variant<DenseMatrix, Diagonal>;

/// (A_0 (x) ... (x) A_{d-1}) v where factor k acts on direction k of v's
/// x-fastest layout, applied one direction at a time. Each dense r x c factor
/// costs r * c * (rest of the tensor) multiplications, a diagonal factor one
/// per entry; the total is added to mul_counter.
/// Throws InvalidInputError if v.size() is not the product of factor columns.
std::vector<double> kronecker_apply(std::span<const KronFactor> factors,
                                    std::span<const double> v);

} // namespace sfhad
