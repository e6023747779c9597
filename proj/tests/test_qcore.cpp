#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qopt/errors.hpp"
#include "qopt/sat.hpp"
#include "qopt/state_vector.hpp"

using namespace qopt;
using cd = std::complex<double>;

namespace {

double max_diff(std::span<const cd> a, std::span<const cd> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<cd> to_vec(const StateVector& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

}  // namespace

TEST_CASE("uniform_state amplitudes") {
  const auto one = uniform_state(1);
  CHECK(one[0] == cd(0.7071067811865476, 0.0));
  CHECK(one[1] == cd(0.7071067811865476, 0.0));

  const auto two = uniform_state(2);
  for (std::size_t s = 0; s < 4; ++s) CHECK(two[s] == cd(0.5, 0.0));

  CHECK(std::abs(uniform_state(20).norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("state size limits") {
  CHECK_THROWS_AS(uniform_state(0), SizeError);
  CHECK_THROWS_AS(uniform_state(max_bits() + 1), SizeError);
  CHECK(max_bits() >= 24);
  CHECK_THROWS_AS(StateVector(2, std::vector<cd>(3)), ArgumentError);
}

TEST_CASE("walsh_transform values") {
  auto basis0 = StateVector::basis(1, 0);
  walsh_transform(basis0);
  CHECK(std::abs(basis0[0] - cd(std::sqrt(0.5))) < 1e-15);
  CHECK(std::abs(basis0[1] - cd(std::sqrt(0.5))) < 1e-15);

  // Column 1 of the 4x4 sign table.
  auto psi = StateVector::basis(2, 1);
  walsh_transform(psi);
  const std::vector<cd> expected{0.5, -0.5, 0.5, -0.5};
  CHECK(max_diff(psi.amplitudes(), std::span<const cd>(expected)) < 1e-15);
}

TEST_CASE("walsh_transform matches dense matrix and is an involution") {
  Rng rng(11);
  for (int n : {1, 3, 5, 7}) {
    const auto psi = oracle::random_state(n, rng);
    auto fast = psi;
    walsh_transform(fast);
    const auto dense = oracle::mat_vec(oracle::walsh_matrix(n), to_vec(psi));
    CHECK(max_diff(fast.amplitudes(), std::span<const cd>(dense)) < 1e-12);
  }
  for (int n : {2, 10, 16, 20}) {
    const auto psi = oracle::random_state(n, rng);
    auto twice = psi;
    walsh_transform(twice);
    walsh_transform(twice);
    CHECK(max_diff(twice.amplitudes(), psi.amplitudes()) < 1e-10);
    CHECK(std::abs(twice.norm_squared() - psi.norm_squared()) < 1e-10);
  }
}

TEST_CASE("apply_diagonal") {
  Rng rng(12);
  const auto psi = oracle::random_state(4, rng);
  std::vector<double> keys(16);
  for (std::size_t s = 0; s < 16; ++s) keys[s] = static_cast<double>(s % 5);

  SUBCASE("zero coefficient is the identity") {
    auto out = psi;
    apply_diagonal(out, DiagonalSpec::exp_linear(0.0, DiagonalBasis::cost), keys);
    CHECK(max_diff(out.amplitudes(), psi.amplitudes()) == 0.0);
  }

  SUBCASE("bit-count basis with tau = 1 negates odd-weight states") {
    StateVector one(1, {cd(0.6, 0.0), cd(0.0, 0.8)});
    apply_diagonal(one, DiagonalSpec::exp_linear(1.0, DiagonalBasis::bit_count));
    CHECK(std::abs(one[0] - cd(0.6, 0.0)) < 1e-15);
    CHECK(std::abs(one[1] - cd(0.0, -0.8)) < 1e-15);
  }

  SUBCASE("cost basis on the 3-variable 2-SAT example") {
    // (v1 OR NOT v2) AND (v2 OR v3)
    const sat::SatInstance inst(3, 2, {{{1, false}, {2, true}}, {{2, false}, {3, false}}});
    const auto costs = sat::sat_cost_vector(inst);
    // v1=F, v2=T, v3=F is index 0b010 and violates only the first clause.
    CHECK(oracle::naive_conflicts(inst, 0b010) == 1);
    CHECK(costs[0b010] == 1.0);
    auto state = uniform_state(3);
    apply_diagonal(state, DiagonalSpec::exp_linear(1.0, DiagonalBasis::cost), costs);
    CHECK(std::abs(state[0b010] - cd(-std::sqrt(0.125), 0.0)) < 1e-15);
    for (std::size_t s = 0; s < 8; ++s) {
      const double sign = costs[s] == 1.0 ? -1.0 : 1.0;
      CHECK(std::abs(state[s] - cd(sign * std::sqrt(0.125), 0.0)) < 1e-15);
    }
  }

  SUBCASE("explicit values") {
    auto out = psi;
    std::map<std::int64_t, cd> table;
    for (int k = 0; k < 5; ++k) table[k] = std::polar(1.0, 0.3 * k);
    apply_diagonal(out, DiagonalSpec::explicit_values(table, DiagonalBasis::cost), keys);
    for (std::size_t s = 0; s < 16; ++s) CHECK(std::abs(out[s] - table[s % 5] * psi[s]) < 1e-15);
  }

  SUBCASE("explicit spec missing a key") {
    auto out = psi;
    const auto spec = DiagonalSpec::explicit_values({{0, 1.0}, {1, -1.0}}, DiagonalBasis::cost);
    CHECK_THROWS_AS(apply_diagonal(out, spec, keys), ConfigError);
  }

  SUBCASE("explicit values must be unit modulus") {
    CHECK_THROWS_AS(DiagonalSpec::explicit_values({{0, cd(0.5, 0.0)}}, DiagonalBasis::cost), ConfigError);
  }

  SUBCASE("cost keys must cover every state") {
    auto out = psi;
    std::vector<double> short_keys(8, 0.0);
    CHECK_THROWS_AS(apply_diagonal(out, DiagonalSpec::exp_linear(0.5, DiagonalBasis::cost), short_keys),
                    ArgumentError);
  }
}

TEST_CASE("apply_mixing basic cases") {
  Rng rng(13);
  const auto psi = oracle::random_state(5, rng);
  auto same = psi;
  apply_mixing(same, 0.0);
  CHECK(max_diff(same.amplitudes(), psi.amplitudes()) < 1e-12);

  // tau = 1 on one bit: H diag(1,-1) H is a bit flip.
  auto flip = StateVector::basis(1, 0);
  apply_mixing(flip, 1.0);
  CHECK(std::abs(flip[0]) < 1e-15);
  CHECK(std::abs(std::abs(flip[1]) - 1.0) < 1e-15);
}

TEST_CASE("apply_mixing equals dense W T W") {
  Rng rng(14);
  for (int n = 1; n <= 6; ++n) {
    for (double tau : {0.12, 0.5, -0.37}) {
      const auto dense = oracle::mixing_matrix(n, tau);
      const auto psi = oracle::random_state(n, rng);
      auto fast = psi;
      apply_mixing(fast, tau);
      const auto expected = oracle::mat_vec(dense, to_vec(psi));
      CHECK(max_diff(fast.amplitudes(), std::span<const cd>(expected)) < 1e-12);
    }
  }
}

TEST_CASE("per-bit mixing agrees with the Walsh sandwich") {
  Rng rng(16);
  for (int n : {1, 4, 9, 14}) {
    for (double tau : {0.12, 0.5, 0.9, -1.3}) {
      const auto psi = oracle::random_state(n, rng);
      auto product_form = psi;
      auto sandwich = psi;
      apply_mixing(product_form, tau);
      apply_mixing(sandwich, DiagonalSpec::exp_linear(tau, DiagonalBasis::bit_count));
      CHECK(max_diff(product_form.amplitudes(), sandwich.amplitudes()) < 1e-12);
    }
  }
  auto psi = oracle::random_state(3, rng);
  CHECK_THROWS_AS(apply_mixing(psi, DiagonalSpec::exp_linear(0.1, DiagonalBasis::cost)), ConfigError);
}

TEST_CASE("mixing elements depend only on Hamming distance") {
  for (int n = 1; n <= 6; ++n) {
    for (double tau : {0.12, 0.5, 0.9}) {
      const std::size_t dim = std::size_t{1} << n;
      const cd ratio_base(0.0, -std::tan(std::numbers::pi * tau / 2.0));
      for (std::size_t s = 0; s < dim; ++s) {
        auto column = StateVector::basis(n, s);
        apply_mixing(column, tau);
        for (std::size_t r = 0; r < dim; ++r) {
          auto diag = StateVector::basis(n, r);
          apply_mixing(diag, tau);
          const cd ratio = column[r] / diag[r];
          const cd expected = std::pow(ratio_base, std::popcount(r ^ s));
          CHECK(std::abs(ratio - expected) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("operators preserve the norm and mixing is linear") {
  Rng rng(15);
  for (int n : {3, 8, 12}) {
    auto psi = oracle::random_state(n, rng);
    const double before = psi.norm_squared();
    apply_mixing(psi, 0.731);
    CHECK(std::abs(psi.norm_squared() - before) < 1e-10);
    std::vector<double> keys = oracle::random_costs(n, 9, rng);
    apply_diagonal(psi, DiagonalSpec::exp_linear(1.37, DiagonalBasis::cost), keys);
    CHECK(std::abs(psi.norm_squared() - before) < 1e-10);
    walsh_transform(psi);
    CHECK(std::abs(psi.norm_squared() - before) < 1e-10);
  }

  const int n = 7;
  const auto psi = oracle::random_state(n, rng);
  const auto phi = oracle::random_state(n, rng);
  const cd a(0.3, -1.2), b(-0.7, 0.4);
  std::vector<cd> combo(psi.size());
  for (std::size_t s = 0; s < combo.size(); ++s) combo[s] = a * psi[s] + b * phi[s];
  StateVector mixed(n, combo);
  apply_mixing(mixed, 0.42);
  auto mp = psi;
  auto mf = phi;
  apply_mixing(mp, 0.42);
  apply_mixing(mf, 0.42);
  for (std::size_t s = 0; s < combo.size(); ++s) CHECK(std::abs(mixed[s] - (a * mp[s] + b * mf[s])) < 1e-10);
}
