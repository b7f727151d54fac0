#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "phidim/environment.hpp"
#include "phidim/errors.hpp"
#include "phidim/fixtures.hpp"
#include "phidim/rng.hpp"

using namespace phidim;

TEST_SUITE("rng") {

TEST_CASE("mix64 is the SplitMix64 output function") {
  // reference SplitMix64 with state 0: first output 0xe220a8397b1dcdaf
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  // second output (state advanced twice by the golden gamma)
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("counter streams are reproducible and independent of order") {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  std::vector<std::uint64_t> va, vc;
  for (int i = 0; i < 3; ++i) va.push_back(a());
  for (int i = 0; i < 3; ++i) CHECK(b() == va[static_cast<std::size_t>(i)]);
  for (int i = 0; i < 3; ++i) vc.push_back(c());
  CHECK(va != vc);
  CHECK(va[0] == 11609476028986870381ULL);
  CHECK(derive_seed(1, 0) == 11527216909531037759ULL);
}

TEST_CASE("derived seeds do not collide on small grids") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t base = 0; base < 64; ++base) {
    for (std::uint64_t r = 0; r < 256; ++r) seen.insert(derive_seed(base, r));
  }
  CHECK(seen.size() == 64 * 256);
}

TEST_CASE("uniform and exponential draws") {
  CounterRng g(3, 0);
  double mean_u = 0, mean_e = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    mean_u += u;
    const double e = g.exponential();
    REQUIRE(e > 0.0);
    mean_e += e;
  }
  // 6 standard errors
  CHECK(std::abs(mean_u / n - 0.5) < 6 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(mean_e / n - 1.0) < 6 * std::sqrt(1.0 / n));
}

TEST_CASE("point mass environments repeat the draw") {
  const auto env = sample_environment(fixtures::middle_third(), 12345, 5);
  REQUIRE(env.length() == 5);
  for (const auto& d : env.draws()) {
    CHECK(d.t == 2);
    CHECK(d.r == 1.0 / 3.0);
    CHECK(d.p == std::vector<double>{0.5, 0.5});
  }
  CHECK(env.log_scale(5) == doctest::Approx(5 * std::log(3.0)));
}

TEST_CASE("uniform simplex golden draws") {
  const auto env = sample_environment(fixtures::uniform_simplex_cantor(), 42, 3);
  const double golden[3][2] = {{0.54994449289326663, 0.45005550710673337},
                               {0.95436008246844017, 0.045639917531559784},
                               {0.64210435755840833, 0.35789564244159161}};
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(env.draws()[j].p[0] == golden[j][0]);
    CHECK(env.draws()[j].p[1] == golden[j][1]);
    CHECK(env.draws()[j].r == 1.0 / 3.0);
  }
  const auto again = sample_environment(fixtures::uniform_simplex_cantor(), 42, 3);
  CHECK(again.draws() == env.draws());
}

TEST_CASE("longer environments extend shorter ones") {
  const auto spec = fixtures::one_variable();
  const auto short_env = sample_environment(spec, 9, 50);
  const auto long_env = sample_environment(spec, 9, 500);
  for (std::size_t j = 1; j <= 50; ++j) CHECK(short_env.level(j) == long_env.level(j));
  CHECK(sample_level(spec, 9, 321) == long_env.level(321));
  CHECK_THROWS_AS(sample_environment(spec, 9, 0), DomainError);
}

TEST_CASE("cached level variables") {
  const auto env = sample_environment(fixtures::two_atom_mixture(), 5, 100);
  for (std::size_t j = 0; j < env.length(); ++j) {
    const auto& d = env.draws()[j];
    CHECK(env.x()[j] == -std::log(d.max_p()));
    CHECK(env.y()[j] == -std::log(d.min_p()));
    CHECK(env.z()[j] == -std::log(d.r));
  }
}

TEST_CASE("inverse-square mixture draws") {
  const auto spec = fixtures::inverse_square(64);
  const std::size_t n = 200000;
  const auto env = sample_environment(spec, 77, n);
  std::map<int, std::size_t> counts;
  for (const auto& d : env.draws()) {
    REQUIRE(d.t >= 2);
    REQUIRE(d.t <= 64);
    CHECK(d.r == doctest::Approx(1.0 / (4.0 * d.t)).epsilon(1e-15));
    CHECK(d.min_p() == d.max_p());
    ++counts[d.t];
  }
  double norm = 0;
  for (int t = 2; t <= 64; ++t) norm += 1.0 / (t * t);
  for (int t : {2, 3, 5, 10}) {
    const double p = 1.0 / (t * t) / norm;
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(counts[t]) / n - p) < 5 * se);
  }
}

TEST_CASE("uniform ratio draws stay inside the support") {
  const auto spec = fixtures::uniform_ratio_halves();
  const auto env = sample_environment(spec, 1, 100000);
  double mean = 0;
  for (const auto& d : env.draws()) {
    REQUIRE(d.r > 0.0);
    REQUIRE(d.r <= 0.5);
    mean += d.r;
  }
  mean /= 100000.0;
  CHECK(std::abs(mean - 0.25) < 5 * std::sqrt(0.25 / 12 / 100000.0));
}

}  // TEST_SUITE
