#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "sfhad/allocation_ledger.hpp"
#include "sfhad/dense_oracle.hpp"
#include "sfhad/errors.hpp"
#include "sfhad/hadamard_kernel.hpp"
#include "sfhad/mul_counter.hpp"
#include "sfhad/operators_1d.hpp"

using namespace sfhad;

namespace {

using PairSet = std::set<std::pair<std::size_t, std::size_t>>;

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Nonzeros of I (x) .. ones(m, n) .. (x) I, read off the explicit product.
PairSet dense_nonzeros(std::size_t m, std::size_t n, std::size_t d, std::size_t direction) {
  const auto k = oracle::dense_kronecker(
      oracle::direction_factors(DenseMatrix(m, n, 1.0), std::vector<double>(n, 1.0), d, direction));
  PairSet s;
  for (std::size_t r = 0; r < k.rows(); ++r)
    for (std::size_t c = 0; c < k.cols(); ++c)
      if (k(r, c) != 0.0) s.emplace(r, c);
  return s;
}

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = -1.0,
                          double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  DenseMatrix m(r, c);
  for (double& x : m.data()) x = dist(rng);
  return m;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

} // namespace

TEST_CASE("build_sparsity_pattern: n=1, d=3 is a single entry") {
  const auto p = build_sparsity_pattern(1, 1, 3);
  REQUIRE(p.entries() == 1);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(p.row(0, j) == 0);
    CHECK(p.column(0, j) == 0);
  }
}

TEST_CASE("build_sparsity_pattern: d=2, n=2 direction x is I (x) dense") {
  const auto p = build_sparsity_pattern(2, 2, 2);
  std::vector<std::pair<std::size_t, std::size_t>> got;
  for (std::size_t k = 0; k < p.entries(); ++k) got.emplace_back(p.row(k, 0), p.column(k, 0));
  const std::vector<std::pair<std::size_t, std::size_t>> want{
      {0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}};
  CHECK(got == want);
  CHECK(PairSet(got.begin(), got.end()) == dense_nonzeros(2, 2, 2, 0));
}

TEST_CASE("build_sparsity_pattern matches the explicit d=3 index formulas") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto p = build_sparsity_pattern(n, n, 3);
    REQUIRE(p.entries() == n * n * n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) {
            const std::size_t index = i * n * n * n + j * n * n + k * n + l;
            const std::size_t row = i * n * n + j * n + k;
            CHECK(p.row(index, 0) == row);
            CHECK(p.row(index, 1) == row);
            CHECK(p.row(index, 2) == row);
            CHECK(p.column(index, 0) == i * n * n + j * n + l);
            CHECK(p.column(index, 1) == l * n + k + i * n * n);
            CHECK(p.column(index, 2) == l * n * n + k + j * n);
          }
  }
}

TEST_CASE("pattern exactness for d in 1..3, m, n in 1..5") {
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::size_t m = 1; m <= 5; ++m)
      for (std::size_t n = 1; n <= 5; ++n) {
        const auto p = build_sparsity_pattern(m, n, d);
        REQUIRE(p.entries() == m * ipow(n, d));
        for (std::size_t j = 0; j < d; ++j) {
          PairSet got;
          std::vector<std::size_t> per_row(p.compressed_rows(), 0);
          for (std::size_t k = 0; k < p.entries(); ++k) {
            got.emplace(p.row(k, j), p.column(k, j));
            ++per_row[p.row(k, j)];
            if (k > 0 && p.row(k, j) == p.row(k - 1, j)) CHECK(p.column(k, j) > p.column(k - 1, j));
          }
          CHECK(got.size() == p.entries());
          CHECK(got == dense_nonzeros(m, n, d, j));
          for (auto c : per_row) CHECK(c == n);
        }
      }
}

TEST_CASE("build_sparsity_pattern errors") {
  CHECK_THROWS_AS(build_sparsity_pattern(0, 3, 2), InvalidInputError);
  CHECK_THROWS_AS(build_sparsity_pattern(3, 3, 0), InvalidInputError);
  CHECK_THROWS_AS(build_sparsity_pattern(1 << 20, 1 << 20, 4), CapacityError);
}

TEST_CASE("assemble_basis_factors: identity basis with unit weights scatters to the identity") {
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto p = build_sparsity_pattern(3, 3, d);
    const auto f = assemble_basis_factors(p, DenseMatrix::identity(3), std::vector<double>(3, 1.0));
    for (std::size_t j = 0; j < d; ++j)
      CHECK(oracle::scatter(f, p, j) == DenseMatrix::identity(ipow(3, d)));
  }
}

TEST_CASE("assemble_basis_factors: d=3, n=2 Gauss-Legendre D with quadrature weights") {
  const auto rule = gauss_legendre(2);
  const auto diff = lagrange_diff_matrix(rule);
  const auto p = build_sparsity_pattern(2, 2, 3);
  const auto f = assemble_basis_factors(p, diff, rule.weights);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto want = oracle::dense_kronecker(oracle::direction_factors(diff, rule.weights, 3, j));
    CHECK(oracle::scatter(f, p, j) == want);
  }
}

TEST_CASE("assemble_basis_factors reproduces the Kronecker factors bitwise") {
  std::mt19937_64 rng(31);
  for (std::size_t d = 1; d <= 4; ++d)
    for (std::size_t n = 1; n <= (d == 4 ? 3u : 5u); ++n)
      for (std::size_t m = 1; m <= n; ++m) {
        const auto basis = random_matrix(m, n, rng);
        const auto w = random_vector(n, rng, 0.1, 2.0);
        const auto p = build_sparsity_pattern(m, n, d);
        const auto f = assemble_basis_factors(p, basis, w);
        for (std::size_t j = 0; j < d; ++j) {
          const auto want = oracle::dense_kronecker(oracle::direction_factors(basis, w, d, j));
          CHECK(oracle::scatter(f, p, j) == want);
        }
      }
}

TEST_CASE("assemble_basis_factors dimension errors") {
  const auto p = build_sparsity_pattern(3, 3, 2);
  CHECK_THROWS_AS(assemble_basis_factors(p, DenseMatrix(3, 2), std::vector<double>(3, 1.0)),
                  InvalidInputError);
  CHECK_THROWS_AS(assemble_basis_factors(p, DenseMatrix(3, 3), std::vector<double>(2, 1.0)),
                  InvalidInputError);
}

TEST_CASE("assemble_operand_factors: ones give ones") {
  const auto p = build_sparsity_pattern(3, 3, 3);
  const auto f = assemble_operand_factors(p, TwoPointOperand::rank_one(std::vector<double>(27, 1.0)));
  for (std::size_t j = 0; j < 3; ++j)
    for (double v : f[j].data()) CHECK(v == 1.0);
}

TEST_CASE("assemble_operand_factors: d=2, n=2 rank one gathers c_r c_col") {
  const auto p = build_sparsity_pattern(2, 2, 2);
  const std::vector<double> c{1, 2, 3, 4};
  const auto op = TwoPointOperand::rank_one(c);
  const auto f = assemble_operand_factors(p, op);
  const std::vector<double> x_entries{1, 2, 2, 4, 9, 12, 12, 16};
  for (std::size_t k = 0; k < 8; ++k) CHECK(f[0].data()[k] == x_entries[k]);
  const auto dense_c = oracle::dense_operand(op, 4, 4);
  for (std::size_t j = 0; j < 2; ++j) CHECK(f[j] == oracle::gather(dense_c, p, j));
}

TEST_CASE("assemble_operand_factors: two-point function at pattern pairs") {
  const auto rule = gauss_legendre(3);
  std::vector<double> u(9);
  for (std::size_t i = 0; i < 9; ++i) u[i] = rule.nodes[i % 3] + 0.5 * rule.nodes[i / 3];
  auto mean = [](double a, double b) { return (a + b) / 2.0; };
  const auto op = TwoPointOperand::two_point(mean, u);
  const auto p = build_sparsity_pattern(3, 3, 2);
  const auto f = assemble_operand_factors(p, op);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < p.entries(); ++k)
      CHECK(f[j].data()[k] == (u[p.row(k, j)] + u[p.column(k, j)]) / 2.0);
}

TEST_CASE("operand evaluation count is m n^d per direction") {
  std::size_t calls = 0;
  auto counting = [&calls](double a, double b) {
    ++calls;
    return a * b;
  };
  for (std::size_t d = 1; d <= 3; ++d) {
    calls = 0;
    const auto p = build_sparsity_pattern(4, 4, d);
    assemble_operand_factors(p, TwoPointOperand::two_point(counting, std::vector<double>(ipow(4, d), 1.5)));
    CHECK(calls == d * ipow(4, d + 1));
  }
}

TEST_CASE("rank-one operand is symmetric and pure") {
  std::mt19937_64 rng(3);
  const auto c = random_vector(27, rng, 1e-8, 30.0);
  const auto op = TwoPointOperand::rank_one(c);
  for (std::size_t i = 0; i < 27; ++i)
    for (std::size_t j = 0; j < 27; ++j) {
      CHECK(op(i, j) == op(j, i));
      CHECK(op(i, j) == op(i, j));
    }
}

TEST_CASE("operand that does not cover the index space is rejected") {
  const auto p = build_sparsity_pattern(3, 3, 2);
  CHECK_THROWS_AS(assemble_operand_factors(p, TwoPointOperand::rank_one(std::vector<double>(8, 1.0))),
                  IndexBoundsError);
}

TEST_CASE("hadamard_evaluate with unit operand returns the basis") {
  std::mt19937_64 rng(8);
  const auto p = build_sparsity_pattern(3, 3, 3);
  const auto basis = assemble_basis_factors(p, random_matrix(3, 3, rng), random_vector(3, rng, 0.5, 1.5));
  const auto ones = assemble_operand_factors(p, TwoPointOperand::rank_one(std::vector<double>(27, 1.0)));
  const auto out = hadamard_evaluate(basis, ones);
  for (std::size_t j = 0; j < 3; ++j) CHECK(out[j] == basis[j]);
}

TEST_CASE("hadamard_evaluate matches the dense Hadamard product, d=3") {
  std::mt19937_64 rng(2024);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto basis = random_matrix(n, n, rng);
      const auto w = random_vector(n, rng, 0.1, 2.0);
      const auto c = random_vector(n * n * n, rng, 1e-8, 30.0);
      const auto p = build_sparsity_pattern(n, n, 3);
      const auto op = TwoPointOperand::rank_one(c);
      const auto out = hadamard_evaluate(assemble_basis_factors(p, basis, w), assemble_operand_factors(p, op));
      const auto dense_c = oracle::dense_operand(op, n * n * n, n * n * n);
      for (std::size_t j = 0; j < 3; ++j) {
        const auto want = oracle::dense_hadamard(
            oracle::dense_kronecker(oracle::direction_factors(basis, w, 3, j)), dense_c);
        CHECK(max_relative_difference(oracle::scatter(out, p, j), want) <= 1e-13);
      }
    }
  }
}

TEST_CASE("hadamard_evaluate multiplication count") {
  const auto p = build_sparsity_pattern(4, 4, 3);
  const auto basis = assemble_basis_factors(p, DenseMatrix(4, 4, 0.5), std::vector<double>(4, 2.0));
  const auto c = assemble_operand_factors(p, TwoPointOperand::rank_one(std::vector<double>(64, 3.0)));
  mul_counter::reset();
  hadamard_evaluate(basis, c);
  CHECK(mul_counter::value() == 768);

  for (std::size_t d = 1; d <= 3; ++d)
    for (std::size_t m = 1; m <= 4; ++m) {
      const auto ps = build_sparsity_pattern(m, 4, d);
      const auto b = assemble_basis_factors(ps, DenseMatrix(m, 4, 1.0), std::vector<double>(4, 1.0));
      mul_counter::reset();
      hadamard_evaluate(b, b);
      CHECK(mul_counter::value() == d * m * ipow(4, d));
    }
}

TEST_CASE("hadamard_evaluate shape mismatch") {
  const auto p2 = build_sparsity_pattern(2, 2, 2);
  const auto p3 = build_sparsity_pattern(3, 3, 2);
  const auto a = assemble_basis_factors(p2, DenseMatrix::identity(2), std::vector<double>(2, 1.0));
  const auto b = assemble_basis_factors(p3, DenseMatrix::identity(3), std::vector<double>(3, 1.0));
  CHECK_THROWS_AS(hadamard_evaluate(a, b), InvalidInputError);
  const auto p23 = build_sparsity_pattern(2, 2, 3);
  const auto c = assemble_basis_factors(p23, DenseMatrix::identity(2), std::vector<double>(2, 1.0));
  CHECK_THROWS_AS(hadamard_evaluate(a, c), InvalidInputError);
}

TEST_CASE("hadamard_row_sum") {
  SUBCASE("identity basis, unit operand") {
    const auto p = build_sparsity_pattern(3, 3, 2);
    const auto b = assemble_basis_factors(p, DenseMatrix::identity(3), std::vector<double>(3, 1.0));
    const auto o = assemble_operand_factors(p, TwoPointOperand::rank_one(std::vector<double>(9, 1.0)));
    for (const auto& s : hadamard_row_sum(hadamard_evaluate(b, o), p))
      for (double v : s) CHECK(v == 1.0);
  }
  SUBCASE("random d=2, n=3 against dense row sums") {
    std::mt19937_64 rng(77);
    const auto basis = random_matrix(3, 3, rng);
    const auto w = random_vector(3, rng, 0.1, 2.0);
    const auto c = random_vector(9, rng, 1e-8, 30.0);
    const auto p = build_sparsity_pattern(3, 3, 2);
    const auto op = TwoPointOperand::rank_one(c);
    const auto sums = hadamard_row_sum(hadamard_evaluate(assemble_basis_factors(p, basis, w),
                                                         assemble_operand_factors(p, op)),
                                       p);
    const auto dense_c = oracle::dense_operand(op, 9, 9);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto want = oracle::dense_row_sums(oracle::dense_hadamard(
          oracle::dense_kronecker(oracle::direction_factors(basis, w, 2, j)), dense_c));
      double ref = 0.0;
      for (double v : want) ref = std::max(ref, std::abs(v));
      for (std::size_t r = 0; r < 9; ++r) CHECK(std::abs(sums[j][r] - want[r]) <= 1e-13 * ref);
    }
  }
  SUBCASE("differentiation matrix with unit operand annihilates") {
    const auto rule = gauss_legendre(5);
    const auto p = build_sparsity_pattern(5, 5, 3);
    const auto b = assemble_basis_factors(p, lagrange_diff_matrix(rule), rule.weights);
    const auto o = assemble_operand_factors(p, TwoPointOperand::rank_one(std::vector<double>(125, 1.0)));
    for (const auto& s : hadamard_row_sum(hadamard_evaluate(b, o), p))
      for (double v : s) CHECK(std::abs(v) <= 1e-13);
  }
}

TEST_CASE("surface variant: rectangular facet interpolation matches the oracle") {
  std::mt19937_64 rng(555);
  for (std::size_t d = 2; d <= 3; ++d)
    for (std::size_t n = 2; n <= 5; ++n)
      for (std::size_t m = 1; m < n; ++m) {
        const auto volume = gauss_legendre(n);
        const auto facet = gauss_legendre(m);
        const auto interp = lagrange_interpolation_matrix(volume.nodes, facet.nodes);
        const auto p = build_sparsity_pattern(m, n, d);
        const auto rows = random_vector(m * ipow(n, d - 1), rng, 1e-8, 30.0);
        const auto cols = random_vector(ipow(n, d), rng, 1e-8, 30.0);
        const auto op = TwoPointOperand::rank_one(rows, cols);
        const auto out = hadamard_evaluate(assemble_basis_factors(p, interp, volume.weights),
                                           assemble_operand_factors(p, op));
        const auto dense_c = oracle::dense_operand(op, rows.size(), cols.size());
        for (std::size_t j = 0; j < d; ++j) {
          const auto want = oracle::dense_hadamard(
              oracle::dense_kronecker(oracle::direction_factors(interp, volume.weights, d, j)), dense_c);
          CHECK(max_relative_difference(oracle::scatter(out, p, j), want) <= 1e-13);
        }
      }
}

TEST_CASE("storage stays within 6 d m n^d numbers") {
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::size_t n = 2; n <= 6; ++n)
      for (std::size_t m = 1; m <= n; ++m) {
        AllocationLedger ledger;
        {
          AllocationLedger::Scope scope(ledger);
          const auto p = build_sparsity_pattern(m, n, d);
          const auto b = assemble_basis_factors(p, DenseMatrix(m, n, 1.0), std::vector<double>(n, 1.0));
          const auto o = assemble_operand_factors(
              p, TwoPointOperand::rank_one(std::vector<double>(m * ipow(n, d - 1), 1.0),
                                           std::vector<double>(ipow(n, d), 1.0)));
          const auto h = hadamard_evaluate(b, o);
          CHECK(p.stored_numbers() + b.stored_numbers() + o.stored_numbers() + h.stored_numbers() ==
                5 * d * m * ipow(n, d));
        }
        CHECK(ledger.live() == 0);
        CHECK(ledger.peak() <= 6 * d * m * ipow(n, d));
      }
}

TEST_CASE("n = 1 and d = 1 degenerate cases collapse to the dense matrix") {
  std::mt19937_64 rng(10);
  const auto basis = random_matrix(4, 4, rng);
  const auto p = build_sparsity_pattern(4, 4, 1);
  const auto f = assemble_basis_factors(p, basis, std::vector<double>(4, 7.0));
  CHECK(oracle::scatter(f, p, 0) == basis);

  const auto p1 = build_sparsity_pattern(1, 1, 3);
  const auto f1 = assemble_basis_factors(p1, DenseMatrix{{2.0}}, std::vector<double>{3.0});
  CHECK(f1[0](0, 0) == 2.0 * 3.0 * 3.0);
  CHECK(f1[2](0, 0) == 3.0 * 3.0 * 2.0);
}
