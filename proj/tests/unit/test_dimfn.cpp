#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "phidim/dimfn.hpp"
#include "phidim/errors.hpp"

using namespace phidim;

TEST_SUITE("dimfn") {

TEST_CASE("evaluation of the built-in families") {
  CHECK(DimensionFunction::constant(0.5)(0.01) == 0.5);
  const auto theta = DimensionFunction::theta_spectrum(0.25);
  for (double x : {0.9, 0.5, 1e-3, 1e-200}) CHECK(theta(x) == doctest::Approx(3.0).epsilon(1e-15));

  const auto ll = DimensionFunction::loglog_multiple(1.0);
  CHECK(ll(std::exp(-std::numbers::e)) == doctest::Approx(1.0 / std::numbers::e).epsilon(1e-14));
  // the log-domain entry point agrees where x still has a double
  CHECK(ll.at_log(-50.0) == doctest::Approx(ll(std::exp(-50.0))).epsilon(1e-14));
  CHECK(ll.at_log(-1e6) == doctest::Approx(std::log(1e6) / 1e6).epsilon(1e-14));
}

TEST_CASE("declared regimes and descriptors") {
  CHECK(DimensionFunction::constant(2.0).regime() == Regime::Large);
  CHECK(DimensionFunction::constant(0.0).regime() == Regime::Small);
  CHECK(DimensionFunction::theta_spectrum(0.5).regime() == Regime::Large);
  CHECK(DimensionFunction::loglog_multiple(3.0).regime() == Regime::Boundary);
  CHECK(DimensionFunction::tabulated({{0.5, 1.0}}).regime() == Regime::Unclassified);
  CHECK(DimensionFunction::constant(2.0).with_regime(Regime::Small).regime() == Regime::Small);
  for (auto r : {Regime::Large, Regime::Small, Regime::Boundary, Regime::Unclassified}) {
    CHECK(regime_from_string(to_string(r)) == r);
  }
  CHECK_THROWS_AS(regime_from_string("Huge"), ConfigError);
  CHECK(DimensionFunction::constant(1.0).describe() == "Constant(1)");
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(DimensionFunction::constant(-1.0), DomainError);
  CHECK_THROWS_AS(DimensionFunction::theta_spectrum(1.0), DomainError);
  CHECK_THROWS_AS(DimensionFunction::loglog_multiple(0.0), DomainError);
  CHECK_THROWS_AS(DimensionFunction::constant(1.0)(0.0), DomainError);
  CHECK_THROWS_AS(DimensionFunction::constant(1.0)(1.0), DomainError);
  const auto tab = DimensionFunction::tabulated({{0.5, 0.1}, {0.25, 10.0}});
  CHECK_THROWS_AS(tab(0.75), ExtrapolationError);
  CHECK_THROWS_AS(tab(0.1), ExtrapolationError);
}

TEST_CASE("tabulated interpolation is linear in log x") {
  const auto tab = DimensionFunction::tabulated({{0.5, 1.0}, {0.125, 4.0}});
  CHECK(tab(0.5) == doctest::Approx(1.0));
  CHECK(tab(0.125) == doctest::Approx(4.0));
  // log 0.25 sits halfway between log 0.5 and log 0.125
  CHECK(tab(0.25) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("validate") {
  const std::vector<double> g{0.5, 0.25, 0.1};
  CHECK(validate(DimensionFunction::constant(1.0), g).ok());

  // x^{1+Phi}: 0.5^1.1 = 0.4665 and 0.25^11 = 2.4e-7, so decreasing
  const double hi = std::pow(0.5, 1.1), lo = std::pow(0.25, 11.0);
  REQUIRE(lo < hi);
  const std::vector<double> tab_grid{0.5, 0.25};
  CHECK(validate(DimensionFunction::tabulated({{0.5, 0.1}, {0.25, 10.0}}), tab_grid).ok());

  std::vector<double> logspaced;
  for (int i = 0; i < 100; ++i) logspaced.push_back(std::pow(10.0, -1.0 - 8.0 * i / 99.0));
  logspaced.back() = 1.01e-9;
  CHECK(validate(DimensionFunction::theta_spectrum(0.9), logspaced).ok());

  // Phi dropping fast enough makes x^{1+Phi} increase as x decreases
  const auto bad = DimensionFunction::tabulated({{0.5, 8.0}, {0.25, 0.1}});
  const auto rep = validate(bad, tab_grid);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations.front().x_hi == 0.5);
  CHECK(rep.violations.front().x_lo == 0.25);

  CHECK_THROWS_AS(validate(DimensionFunction::constant(1.0), std::vector<double>{0.1, 0.5}), DomainError);
}

TEST_CASE("regime warnings are advisory") {
  CHECK(regime_warnings(DimensionFunction::constant(1.0)).empty());
  CHECK_FALSE(regime_warnings(DimensionFunction::constant(1.0).with_regime(Regime::Small)).empty());
}

TEST_CASE("depth on constant ratio sequences") {
  const std::vector<double> thirds(200, std::log(3.0));
  // 3^{-(10+k)} <= 3^{-15} needs k >= 5
  CHECK(depth(thirds, DimensionFunction::constant(0.5), 10) == 5);
  int k = 1;
  while (10 + k < 15) ++k;
  CHECK(k == 5);

  const std::vector<double> halves(200, std::log(2.0));
  CHECK(depth(halves, DimensionFunction::constant(1.0), 7) == 7);
}

TEST_CASE("depth against the brute-force scan") {
  std::vector<double> z{std::log(2.0), std::log(4.0)};
  for (int i = 0; i < 20; ++i) z.push_back(std::log(2.0));
  const auto one = DimensionFunction::constant(1.0);
  const auto expect = oracle::brute_depth(z, 1, [](double) { return 1.0; });
  REQUIRE(expect);
  // S_1 = log 2 and Z_2 = log 4 already covers it
  CHECK(*expect == 1);
  CHECK(depth(z, one, 1) == *expect);
  for (std::size_t n = 1; n <= 8; ++n) {
    CHECK(depth(z, one, n) == *oracle::brute_depth(z, n, [](double) { return 1.0; }));
  }

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ur(0.01, 0.5);
  std::vector<double> rz(4000);
  for (auto& v : rz) v = -std::log(ur(gen));
  const auto theta = DimensionFunction::theta_spectrum(0.3);
  const auto ll = DimensionFunction::loglog_multiple(2.0);
  for (std::size_t n : {1u, 2u, 5u, 17u, 100u, 333u, 1000u}) {
    CHECK(depth(rz, theta, n) == *oracle::brute_depth(rz, n, [](double) { return 1.0 / 0.3 - 1.0; }));
    CHECK(depth(rz, ll, n) == *oracle::brute_depth(rz, n, [](double s) { return 2.0 * std::log(s) / s; }));
  }
}

TEST_CASE("depth truncation") {
  const std::vector<double> z(10, 1.0);
  CHECK_THROWS_AS(depth(z, DimensionFunction::constant(1.0), 6), TruncationError);
  try {
    depth(z, DimensionFunction::constant(1.0), 6);
  } catch (const TruncationError& e) {
    CHECK(e.levels_scanned() == 4);
    CHECK(e.partial_sum() == doctest::Approx(4.0));
  }
  CHECK_THROWS_AS(depth(z, DimensionFunction::constant(1.0), 3, 2), TruncationError);
  CHECK_THROWS_AS(depth(z, DimensionFunction::constant(1.0), 0), DomainError);
}

TEST_CASE("depth is monotone in Phi") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ur(0.05, 0.5);
  std::vector<double> z(3000);
  for (auto& v : z) v = -std::log(ur(gen));
  for (std::size_t n = 1; n < 300; n += 7) {
    std::size_t prev = 0;
    for (double d : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const auto k = depth(z, DimensionFunction::constant(d), n);
      CHECK(k >= prev);
      prev = k;
    }
  }
}

TEST_CASE("thresholds") {
  const double l3 = std::log(3.0);
  CHECK(zeta_threshold(1.0, 100, l3) == doctest::Approx(std::log(100 * std::log(2.0)) / (2 * l3)));
  CHECK(zeta_threshold(1.0, 100, l3) == doctest::Approx(1.929096).epsilon(1e-6));
  CHECK(zeta_threshold(1.0, 1000, l3) / std::log(1000 * std::log(2.0)) ==
        doctest::Approx(1.0 / (2 * l3)));

  CHECK(chi_threshold(1.0, 100, l3) == doctest::Approx(7.779539).epsilon(1e-6));
  CHECK(chi_threshold(1.0, 10, 1.0) == doctest::Approx(4.321928).epsilon(1e-6));
  // 2 N EZ = e makes the log term 1
  CHECK(chi_threshold(std::log(2.0), 1, std::numbers::e / 2) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(zeta_threshold(1.0, 1, l3), DomainError);
  CHECK_THROWS_AS(chi_threshold(1.0, 0, l3), DomainError);
  CHECK_THROWS_AS(chi_threshold(0.0, 5, l3), DomainError);
}

}  // TEST_SUITE
