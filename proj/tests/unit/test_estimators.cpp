#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "phidim/environment.hpp"
#include "phidim/errors.hpp"
#include "phidim/estimators.hpp"
#include "phidim/fixtures.hpp"

using namespace phidim;

namespace {

// Direct double loop over (N, k) with fresh long double sums for every block.
std::pair<double, double> brute_large(const Environment& env, const DimensionFunction& f, Window w,
                                      std::size_t k_cap, NumeratorShift shift = {}) {
  std::vector<double> z(env.z().begin(), env.z().end());
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t n = w.n_min; n <= w.n_max; ++n) {
    auto k0 = *oracle::brute_depth(z, n, [&](double s) { return f.at_log(-s); });
    k0 = std::max(k0, shift.lead + shift.trail + 1);
    for (std::size_t k = k0; k <= k_cap; ++k) {
      long double sx = 0, sy = 0, sz = 0;
      for (std::size_t i = n; i < n + k; ++i) sz += env.z()[i];
      for (std::size_t i = n + shift.lead; i < n + k - shift.trail; ++i) {
        sx += env.x()[i];
        sy += env.y()[i];
      }
      hi = std::max(hi, static_cast<double>(sy / sz));
      lo = std::min(lo, static_cast<double>(sx / sz));
    }
  }
  return {hi, lo};
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("point masses give the exact ratios") {
  const double d = std::log(2.0) / std::log(3.0);
  const auto env = sample_environment(fixtures::middle_third(), 1, 700);
  const auto one = DimensionFunction::constant(1.0);
  CHECK(std::abs(large_upper(env, one, {10, 100}, 500) - d) < 1e-12);
  CHECK(std::abs(large_lower(env, one, {10, 100}, 500) - d) < 1e-12);
  CHECK(std::abs(small_alpha_hat(env, 1) - d) < 1e-15);
  CHECK(std::abs(small_beta_hat(env, 1) - d) < 1e-15);

  const DistributionSpec s(PointMass{{3, 0.25, {0.5, 0.25, 0.25}}}, 1.0 / 3.0);
  const auto env3 = sample_environment(s, 1, 400);
  // Y = log 4 = Z, X = log 2
  CHECK(large_upper(env3, one, {5, 50}, 300) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(large_lower(env3, one, {5, 50}, 300) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("large statistics against the block-sum oracle") {
  for (const char* key : {"uniform-simplex", "one-variable", "two-atom", "uniform-ratio"}) {
    CAPTURE(key);
    const auto env = sample_environment(fixtures::by_name(key), 31, 700);
    for (double delta : {0.5, 2.0}) {
      const auto f = DimensionFunction::constant(delta);
      const auto rep = large_estimates(env, f, {20, 60}, 400);
      const auto [hi, lo] = brute_large(env, f, {20, 60}, 400);
      CHECK(rep.upper == doctest::Approx(hi).epsilon(1e-12));
      CHECK(rep.lower == doctest::Approx(lo).epsilon(1e-12));
    }
    const auto theta = DimensionFunction::theta_spectrum(0.5);
    const NumeratorShift shift{1, 2};
    const auto rep = large_estimates(env, theta, {20, 60}, 400, shift);
    const auto [hi, lo] = brute_large(env, theta, {20, 60}, 400, shift);
    CHECK(rep.upper == doctest::Approx(hi).epsilon(1e-12));
    CHECK(rep.lower == doctest::Approx(lo).epsilon(1e-12));
  }
}

TEST_CASE("report metadata") {
  const auto env = sample_environment(fixtures::uniform_simplex_cantor(), 2, 600);
  const auto rep = large_estimates(env, DimensionFunction::constant(1.0), {10, 20}, 500);
  CHECK(rep.regime == Regime::Large);
  CHECK(rep.window.n_min == 10);
  CHECK(rep.window.n_max == 20);
  CHECK(rep.k_cap == 500);
  CHECK(rep.env_length == 600);
  CHECK(rep.phi_id == "Constant(1)");
  const auto small = small_estimates(env, 600);
  CHECK(small.regime == Regime::Small);
  CHECK(small.window.n_max == 600);
  CHECK(small.phi_id == "-");
}

TEST_CASE("window errors") {
  const auto env = sample_environment(fixtures::uniform_simplex_cantor(), 2, 600);
  const auto one = DimensionFunction::constant(1.0);
  CHECK_THROWS_AS(large_upper(env, one, {0, 10}, 100), WindowError);
  CHECK_THROWS_AS(large_upper(env, one, {20, 10}, 100), WindowError);
  CHECK_THROWS_AS(large_upper(env, one, {10, 200}, 500), WindowError);
  // phi(N) = N > k_cap
  CHECK_THROWS_AS(large_upper(env, one, {100, 200}, 50), WindowError);
  CHECK_THROWS_AS(small_alpha_hat(env, 0), WindowError);
  CHECK_THROWS_AS(small_beta_hat(env, 601), WindowError);
}

TEST_CASE("small statistics") {
  const auto env = sample_environment(fixtures::two_atom_mixture(), 3, 10'000);
  CHECK(small_alpha_hat(env, 10'000) == std::log(0.2) / std::log(0.1));
  CHECK(small_beta_hat(env, 10'000) == std::log(0.8) / std::log(0.1));

  const auto onev = sample_environment(fixtures::one_variable(), 3, 10'000);
  CHECK(small_beta_hat(onev, 10'000) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(small_alpha_hat(onev, 10'000) == doctest::Approx(std::log(3.0) / std::log(5.0)).epsilon(1e-15));

  // running extremes are monotone in the prefix
  const auto us = sample_environment(fixtures::uniform_simplex_cantor(), 3, 2000);
  for (std::size_t n = 1; n < 2000; n += 37) {
    CHECK(small_alpha_hat(us, n + 37 > 2000 ? 2000 : n + 37) >= small_alpha_hat(us, n));
    CHECK(small_beta_hat(us, n + 37 > 2000 ? 2000 : n + 37) <= small_beta_hat(us, n));
  }
}

TEST_CASE("sanity chain") {
  const auto one = DimensionFunction::constant(1.0);
  {
    const auto env = sample_environment(fixtures::middle_third(), 1, 700);
    CHECK(sanity_chain(small_estimates(env, 700), large_estimates(env, one, {10, 100}, 500)).empty());
  }
  {
    const auto env = sample_environment(fixtures::two_atom_mixture(), 4, 1000);
    const auto large = large_estimates(env, one, {50, 100}, 900);
    const auto small = small_estimates(env, 1000);
    CHECK(sanity_chain(small, large).empty());
    CHECK(small.lower == std::log(0.8) / std::log(0.1));
    CHECK(small.upper == std::log(0.2) / std::log(0.1));
    CHECK(small.lower <= large.lower);
    CHECK(large.upper <= small.upper);
  }
  {
    const auto env = sample_environment(fixtures::uniform_simplex_cantor(), 4, 1000);
    CHECK(sanity_chain(small_estimates(env, 1000), large_estimates(env, one, {50, 100}, 900)).empty());
  }
  EstimateReport small, large;
  small.lower = 0.3;
  small.upper = 0.9;
  large.lower = 0.2;
  large.upper = 0.95;
  const auto bad = sanity_chain(small, large);
  REQUIRE(bad.size() == 2);
  CHECK(bad[0].relation == "small.lower <= large.lower");
  CHECK(bad[0].margin == doctest::Approx(0.1));
  CHECK(bad[1].relation == "large.upper <= small.upper");
  small.upper = std::numeric_limits<double>::infinity();
  small.lower = 0.0;
  CHECK(sanity_chain(small, large).empty());
}

}  // TEST_SUITE
