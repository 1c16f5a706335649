#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sfhad/operators_1d.hpp"

namespace sfhad::flux {

using TwoPointFlux = std::function<double(double, double)>;

/// Entropy-conservative Burgers flux (a^2 + ab + b^2) / 6 for the square entropy.
double ec_two_point_flux(double a, double b) noexcept;

/// Arithmetic mean of the physical fluxes, (a^2/2 + b^2/2) / 2. Consistent and
/// symmetric but not entropy conservative.
double naive_average_flux(double a, double b) noexcept;

/// Nodal Burgers solution on one periodic tensor-product element.
struct BurgersState {
  std::size_t d = 1;
  QuadratureRule rule;
  std::vector<double> u;

  std::size_t n() const noexcept { return rule.size(); }
};

/// Gauss-Lobatto state with n nodes per direction.
/// Throws InvalidInputError if u.size() != n^d.
BurgersState make_state(std::size_t d, std::size_t n, std::vector<double> u);

/// omega_r = prod_k w[r_k] over the x-fastest layout.
std::vector<double> tensor_weights(const QuadratureRule& rule, std::size_t d);

/// S(u) = sum_r omega_r u_r^2 / 2.
double entropy(const BurgersState& state);

/// Flux-differencing volume term
///   -(2 / omega_r) sum_j [(Q_j o F) 1]_r,  Q_j = W (x) .. (x) W D (x) .. (x) W,
/// with F_rk = flux(u_r, u_k), evaluated through the sparse Hadamard kernel.
/// Throws InvalidInputError unless the rule is Gauss-Lobatto (diagonal-norm SBP).
std::vector<double> volume_residual(const BurgersState& state,
                                    const TwoPointFlux& flux = ec_two_point_flux);

/// Periodic self-coupling on the 2d facets: on every line along direction j
/// the last node's outer state is the first node's and vice versa, with the
/// interface flux flux(u_last, u_first).
std::vector<double> surface_residual(const BurgersState& state,
                                     const TwoPointFlux& flux = ec_two_point_flux);

/// du/dt = volume_residual + surface_residual.
std::vector<double> time_derivative(const BurgersState& state,
                                    const TwoPointFlux& flux = ec_two_point_flux);

/// dS/dt = sum_r omega_r u_r du_r/dt.
double entropy_time_derivative(const BurgersState& state,
                               const TwoPointFlux& flux = ec_two_point_flux);

/// sum_r omega_r du_r/dt.
double conservation_rate(const BurgersState& state,
                         const TwoPointFlux& flux = ec_two_point_flux);

/// Worst-case outcome of the random-state entropy check for one (d, n).
struct EntropySummary {
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t states = 0;
  /// max |dS/dt| / (1 + |S|) with the entropy-conservative flux.
  double max_entropy_ratio = 0.0;
  /// max |sum omega du/dt| with the entropy-conservative flux.
  double max_conservation = 0.0;
  /// Fraction of states where the naive flux gives |dS/dt| > 1e-6.
  double naive_violation_fraction = 0.0;
};

/// Uniform random states in [-1, 1], reproducible from `seed`.
EntropySummary check_entropy(std::size_t d, std::size_t n, std::size_t states, std::uint64_t seed);

} // namespace sfhad::flux
