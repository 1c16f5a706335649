#include "sfhad/flux_differencing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "sfhad/errors.hpp"
#include "sfhad/hadamard_kernel.hpp"
#include "sfhad/tensor_index.hpp"

namespace sfhad::flux {

double ec_two_point_flux(double a, double b) noexcept { return ((a * a + b * b) + a * b) / 6.0; }

double naive_average_flux(double a, double b) noexcept {
  return (0.5 * a * a + 0.5 * b * b) / 2.0;
}

BurgersState make_state(std::size_t d, std::size_t n, std::vector<double> u) {
  const std::size_t size = checked_pow(n, d, "make_state");
  if (u.size() != size)
    throw InvalidInputError("make_state: expected " + std::to_string(size) + " nodal values, got " +
                            std::to_string(u.size()));
  return BurgersState{d, gauss_lobatto(n), std::move(u)};
}

std::vector<double> tensor_weights(const QuadratureRule& rule, std::size_t d) {
  const TensorLayout layout = TensorLayout::uniform(d, rule.size());
  std::vector<double> omega(layout.size(), 1.0);
  for (std::size_t r = 0; r < layout.size(); ++r)
    for (std::size_t k = 0; k < d; ++k) omega[r] *= rule.weights[layout.component(r, k)];
  return omega;
}

double entropy(const BurgersState& state) {
  const auto omega = tensor_weights(state.rule, state.d);
  double s = 0.0;
  for (std::size_t r = 0; r < omega.size(); ++r) s += omega[r] * 0.5 * state.u[r] * state.u[r];
  return s;
}

namespace {

void require_sbp(const BurgersState& state) {
  if (state.rule.kind != QuadratureKind::GaussLobattoLegendre)
    throw InvalidInputError("flux differencing requires Gauss-Lobatto (diagonal-norm SBP) nodes");
  if (state.u.size() != checked_pow(state.n(), state.d, "flux differencing"))
    throw InvalidInputError("flux differencing: state size does not match n^d");
}

} // namespace

std::vector<double> volume_residual(const BurgersState& state, const TwoPointFlux& flux) {
  require_sbp(state);
  const std::size_t n = state.n();
  const auto& w = state.rule.weights;
  const DenseMatrix q1d = scale_rows(w, lagrange_diff_matrix(state.rule));

  const SparsityPattern pattern = build_sparsity_pattern(n, n, state.d);
  const SparseFactorSet q = assemble_basis_factors(pattern, q1d, w);
  const SparseFactorSet f = assemble_operand_factors(pattern, TwoPointOperand::two_point(flux, state.u));
  const SparseFactorSet qf = hadamard_evaluate(q, f);
  const auto sums = hadamard_row_sum(qf, pattern);

  const auto omega = tensor_weights(state.rule, state.d);
  std::vector<double> residual(state.u.size(), 0.0);
  for (std::size_t r = 0; r < residual.size(); ++r) {
    double s = 0.0;
    for (const auto& direction : sums) s += direction[r];
    residual[r] = -2.0 * s / omega[r];
  }
  return residual;
}

std::vector<double> surface_residual(const BurgersState& state, const TwoPointFlux& flux) {
  require_sbp(state);
  const std::size_t n = state.n();
  const auto& w = state.rule.weights;
  const TensorLayout layout = TensorLayout::uniform(state.d, n);
  std::vector<double> residual(state.u.size(), 0.0);
  for (std::size_t j = 0; j < state.d; ++j) {
    const std::size_t stride = layout.stride(j);
    for (std::size_t r = 0; r < layout.size(); ++r) {
      if (layout.component(r, j) != 0) continue;
      const std::size_t first = r;
      const std::size_t last = r + (n - 1) * stride;
      const double u0 = state.u[first];
      const double un = state.u[last];
      const double interface = flux(un, u0);
      residual[last] += (flux(un, un) - interface) / w[n - 1];
      residual[first] -= (flux(u0, u0) - interface) / w[0];
    }
  }
  return residual;
}

std::vector<double> time_derivative(const BurgersState& state, const TwoPointFlux& flux) {
  auto dudt = volume_residual(state, flux);
  const auto surface = surface_residual(state, flux);
  for (std::size_t r = 0; r < dudt.size(); ++r) dudt[r] += surface[r];
  return dudt;
}

double entropy_time_derivative(const BurgersState& state, const TwoPointFlux& flux) {
  const auto dudt = time_derivative(state, flux);
  const auto omega = tensor_weights(state.rule, state.d);
  double s = 0.0;
  for (std::size_t r = 0; r < dudt.size(); ++r) s += omega[r] * state.u[r] * dudt[r];
  return s;
}

double conservation_rate(const BurgersState& state, const TwoPointFlux& flux) {
  const auto dudt = time_derivative(state, flux);
  const auto omega = tensor_weights(state.rule, state.d);
  double s = 0.0;
  for (std::size_t r = 0; r < dudt.size(); ++r) s += omega[r] * dudt[r];
  return s;
}

EntropySummary check_entropy(std::size_t d, std::size_t n, std::size_t states, std::uint64_t seed) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(n)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const std::size_t size = checked_pow(n, d, "check_entropy");

  EntropySummary summary{d, n, states, 0.0, 0.0, 0.0};
  std::size_t violations = 0;
  for (std::size_t s = 0; s < states; ++s) {
    std::vector<double> u(size);
    for (double& x : u) x = dist(rng);
    const BurgersState state = make_state(d, n, std::move(u));
    const double ratio = std::abs(entropy_time_derivative(state)) / (1.0 + std::abs(entropy(state)));
    summary.max_entropy_ratio = std::max(summary.max_entropy_ratio, ratio);
    summary.max_conservation = std::max(summary.max_conservation, std::abs(conservation_rate(state)));
    if (std::abs(entropy_time_derivative(state, naive_average_flux)) > 1e-6) ++violations;
  }
  if (states > 0)
    summary.naive_violation_fraction = static_cast<double>(violations) / static_cast<double>(states);
  return summary;
}

} // namespace sfhad::flux
