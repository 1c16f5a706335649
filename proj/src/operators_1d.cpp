#include "sfhad/operators_1d.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>
#include <string>

#include "sfhad/errors.hpp"
#include "sfhad/mul_counter.hpp"

namespace sfhad {

namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kResidualTolerance = 1e-15;

// P_n(x) and P_n'(x) with the Legendre ODE supplying P_n''.
struct LegendreSecond {
  double value;
  double first;
  double second;
};

LegendreSecond legendre_with_second(std::size_t k, double x) {
  const auto p = legendre(k, x);
  const double kk = static_cast<double>(k);
  const double second = (2.0 * x * p.derivative - kk * (kk + 1.0) * p.value) / (1.0 - x * x);
  return {p.value, p.derivative, second};
}

} // namespace

LegendreValue legendre(std::size_t k, double x) noexcept {
  if (k == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  double dp_prev = 0.0;
  double dp = 1.0;
  for (std::size_t j = 1; j < k; ++j) {
    const double jj = static_cast<double>(j);
    const double p_next = ((2.0 * jj + 1.0) * x * p - jj * p_prev) / (jj + 1.0);
    const double dp_next = dp_prev + (2.0 * jj + 1.0) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp};
}

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw InvalidInputError("gauss_legendre: node count must be >= 1");
  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussLegendre;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double nn = static_cast<double>(n);
  // Roots come in +/- pairs; solve for the positive half only.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    bool converged = false;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      const auto p = legendre(n, x);
      const double dx = p.value / p.derivative;
      x -= dx;
      if (std::abs(p.value) <= kResidualTolerance || std::abs(dx) <= kResidualTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericalFailure("gauss_legendre: Newton iteration did not converge for node " +
                             std::to_string(n - 1 - i));
    if (2 * i + 1 == n) x = 0.0;
    const double dp = legendre(n, x).derivative;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  return rule;
}

QuadratureRule gauss_lobatto(std::size_t n) {
  if (n < 2) throw InvalidInputError("gauss_lobatto: node count must be >= 2");
  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussLobattoLegendre;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const std::size_t order = n - 1;
  const double oo = static_cast<double>(order);
  const double end_weight = 2.0 / (oo * (oo + 1.0));
  rule.nodes.front() = -1.0;
  rule.nodes.back() = 1.0;
  rule.weights.front() = end_weight;
  rule.weights.back() = end_weight;
  for (std::size_t i = 1; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * static_cast<double>(i) / oo);
    bool converged = false;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      const auto p = legendre_with_second(order, x);
      const double dx = p.first / p.second;
      x -= dx;
      if (std::abs(p.first) <= kResidualTolerance || std::abs(dx) <= kResidualTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericalFailure("gauss_lobatto: Newton iteration did not converge for node " +
                             std::to_string(n - 1 - i));
    if (2 * i + 1 == n) x = 0.0;
    const double p = legendre(order, x).value;
    const double w = end_weight / (p * p);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  return rule;
}

QuadratureRule make_rule(QuadratureKind kind, std::size_t n) {
  return kind == QuadratureKind::GaussLegendre ? gauss_legendre(n) : gauss_lobatto(n);
}

std::vector<double> barycentric_weights(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double diff = nodes[i] - nodes[j];
      if (diff == 0.0)
        throw InvalidInputError("barycentric_weights: duplicate nodes at indices " +
                                std::to_string(j) + " and " + std::to_string(i));
      w[i] *= diff;
    }
    w[i] = 1.0 / w[i];
  }
  return w;
}

DenseMatrix lagrange_diff_matrix(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  const auto w = barycentric_weights(nodes);
  DenseMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (w[j] / w[i]) / (nodes[i] - nodes[j]);
      diag -= d(i, j);
    }
    // Negative-sum trick keeps rows summing to zero.
    d(i, i) = diag;
  }
  return d;
}

DenseMatrix lagrange_diff_matrix(const QuadratureRule& rule) {
  return lagrange_diff_matrix(rule.nodes);
}

DenseMatrix lagrange_interpolation_matrix(std::span<const double> nodes,
                                          std::span<const double> points) {
  const auto w = barycentric_weights(nodes);
  DenseMatrix l(points.size(), nodes.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i];
    std::size_t hit = nodes.size();
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (x == nodes[j]) hit = j;
    if (hit != nodes.size()) {
      l(i, hit) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      l(i, j) = w[j] / (x - nodes[j]);
      denom += l(i, j);
    }
    for (std::size_t j = 0; j < nodes.size(); ++j) l(i, j) /= denom;
  }
  return l;
}

DenseMatrix legendre_vandermonde(const QuadratureRule& rule) {
  const std::size_t n = rule.size();
  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      v(i, k) = std::sqrt((2.0 * static_cast<double>(k) + 1.0) / 2.0) *
                legendre(k, rule.nodes[i]).value;
  return v;
}

DenseMatrix legendre_vandermonde_derivative(const QuadratureRule& rule) {
  const std::size_t n = rule.size();
  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      v(i, k) = std::sqrt((2.0 * static_cast<double>(k) + 1.0) / 2.0) *
                legendre(k, rule.nodes[i]).derivative;
  return v;
}

DenseMatrix projection_operator(const QuadratureRule& rule, const DenseMatrix& vandermonde) {
  if (!vandermonde.square() || vandermonde.rows() != rule.size())
    throw InvalidInputError("projection_operator: Vandermonde must be square with one row per node");
  const DenseMatrix vt_w = scale_rows(rule.weights, vandermonde).transpose();
  const DenseMatrix mass = multiply(vt_w, vandermonde);
  DenseMatrix mass_inv;
  try {
    mass_inv = inverse(mass);
  } catch (const NumericalFailure&) {
    throw NumericalFailure("projection_operator: modal mass matrix is singular");
  }
  return multiply(mass_inv, vt_w);
}

Operator1D make_operator_1d(QuadratureKind kind, std::size_t n) {
  Operator1D op;
  op.rule = make_rule(kind, n);
  op.diff = lagrange_diff_matrix(op.rule);
  op.vandermonde = legendre_vandermonde(op.rule);
  op.vandermonde_derivative = legendre_vandermonde_derivative(op.rule);
  op.projection = projection_operator(op.rule, op.vandermonde);
  op.weights_diag = op.rule.weights;
  return op;
}

DenseMatrix scale_rows(std::span<const double> w, const DenseMatrix& a) {
  if (w.size() != a.rows()) throw InvalidInputError("scale_rows: weight count differs from rows");
  DenseMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (double& x : out.row(r)) x *= w[r];
  return out;
}

namespace {

std::size_t factor_rows(const KronFactor& f) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Diagonal>)
          return m.entries.size();
        else
          return m.rows();
      },
      f);
}

std::size_t factor_cols(const KronFactor& f) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Diagonal>)
          return m.entries.size();
        else
          return m.cols();
      },
      f);
}

} // namespace

std::vector<double> kronecker_apply(std::span<const KronFactor> factors,
                                    std::span<const double> v) {
  if (factors.empty()) throw InvalidInputError("kronecker_apply: no factors");
  std::size_t expected = 1;
  for (const auto& f : factors) expected *= factor_cols(f);
  if (expected != v.size())
    throw InvalidInputError("kronecker_apply: vector length " + std::to_string(v.size()) +
                            " does not match factor columns product " + std::to_string(expected));

  std::vector<double> current(v.begin(), v.end());
  std::vector<double> next;
  // Directions below k already carry their row extent.
  std::size_t inner = 1;
  std::uint64_t multiplications = 0;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const std::size_t rows = factor_rows(factors[k]);
    const std::size_t cols = factor_cols(factors[k]);
    const std::size_t outer = current.size() / (inner * cols);
    next.assign(outer * rows * inner, 0.0);
    if (const auto* diag = std::get_if<Diagonal>(&factors[k])) {
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t r = 0; r < rows; ++r) {
          const double a = diag->entries[r];
          const double* src = current.data() + (o * cols + r) * inner;
          double* dst = next.data() + (o * rows + r) * inner;
          for (std::size_t i = 0; i < inner; ++i) dst[i] = a * src[i];
        }
      multiplications += static_cast<std::uint64_t>(outer) * rows * inner;
    } else {
      const auto& a = std::get<DenseMatrix>(factors[k]);
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t r = 0; r < rows; ++r) {
          double* dst = next.data() + (o * rows + r) * inner;
          for (std::size_t c = 0; c < cols; ++c) {
            const double arc = a(r, c);
            const double* src = current.data() + (o * cols + c) * inner;
            for (std::size_t i = 0; i < inner; ++i) dst[i] += arc * src[i];
          }
        }
      multiplications += static_cast<std::uint64_t>(outer) * rows * cols * inner;
    }
    current.swap(next);
    inner *= rows;
  }
  mul_counter::add(multiplications);
  return current;
}

} // namespace sfhad
