// Acceptance suite. Prints one PASS/FAIL line per criterion; with arguments,
// runs only the listed criterion numbers. Exit status is nonzero when any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phidim/dimfn.hpp"
#include "phidim/environment.hpp"
#include "phidim/estimators.hpp"
#include "phidim/experiments.hpp"
#include "phidim/fixtures.hpp"
#include "phidim/identities.hpp"
#include "phidim/moran.hpp"
#include "phidim/rng.hpp"
#include "phidim/simplex.hpp"
#include "phidim/theory.hpp"

using namespace phidim;
namespace fx = phidim::fixtures;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome closed_forms_vs_monte_carlo() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  double worst = 0.0;
  for (int T = 2; T <= 6; ++T) {
    const auto mc = mc_moment_oracle(T, fx::kOracleSamples, derive_seed(fx::kBaseSeed, static_cast<std::uint64_t>(T)));
    const double zx = (mc.ex_hat - closed_form_ex(T)) / mc.se_x;
    const double zy = (mc.ey_hat - closed_form_ey(T)) / mc.se_y;
    worst = std::max({worst, std::abs(zx), std::abs(zy)});
    if (std::abs(zx) > fx::kOracleSigmas || std::abs(zy) > fx::kOracleSigmas) {
      o.pass = false;
      o.detail += "T=" + std::to_string(T) + " z=(" + fmt(zx, 3) + "," + fmt(zy, 3) + ") ";
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) o.pass = false;
  o.detail += "max |z| " + fmt(worst, 3) + " over T=2..6, " + fmt(secs, 3) + " s";
  return o;
}

Outcome combinatorial_identities() {
  Outcome o;
  std::size_t checks = 0;
  auto expect_zero = [&](const Rational& r, const std::string& what) {
    ++checks;
    if (r != 0) {
      o.pass = false;
      if (o.detail.empty()) o.detail = what + " residual " + to_string(r) + "; ";
    }
  };
  const std::vector<Rational> lambdas{Rational(1, 2), Rational(-1, 3), Rational(7, 4), Rational(-5),
                                      Rational(45, 2)};
  for (int n = 0; n <= 20; ++n) {
    expect_zero(melzak_reciprocal_residual(n), "1/(k+1) n=" + std::to_string(n));
    expect_zero(melzak_reciprocal_square_residual(n), "1/(k+1)^2 n=" + std::to_string(n));
    for (const auto& lam : lambdas) {
      expect_zero(melzak_shifted_residual(n, lam), "1/(k+1-lambda) n=" + std::to_string(n));
    }
  }
  for (int T = 2; T <= 20; ++T) {
    for (int j = 1; j < T; ++j) expect_zero(euler_difference_residual(T, j), "Euler T=" + std::to_string(T));
    expect_zero(harmonic_alternating_residual(T), "harmonic T=" + std::to_string(T));
  }
  o.detail += std::to_string(checks) + " exact residuals, n,T <= 20";
  return o;
}

Outcome cdf_formulas() {
  Outcome o;
  for (int T = 2; T <= 5; ++T) {
    const auto c = cdf_band_check(T, fx::kOracleSamples, derive_seed(fx::kBaseSeed, 100 + T), fx::kDkwConfidence);
    if (!c.pass()) o.pass = false;
    o.detail += "T=" + std::to_string(T) + " ks(min,max)=(" + fmt(c.ks_min, 3) + "," + fmt(c.ks_max, 3) + ") ";
  }
  const double v = max_cdf(2, 0.75);
  if (v != 0.5) o.pass = false;
  o.detail += "eps=" + fmt(dkw_epsilon(fx::kOracleSamples, fx::kDkwConfidence), 4) +
              ", max_cdf(2,0.75)=" + fmt(v, 17);
  return o;
}

Outcome degenerate_exactness() {
  Outcome o;
  double worst = 0.0;
  auto track = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
  const std::vector<DimensionFunction> phis{DimensionFunction::constant(fx::kLargePhiDelta),
                                            DimensionFunction::constant(1.0),
                                            DimensionFunction::theta_spectrum(0.5)};

  const double d = std::log(2.0) / std::log(3.0);
  const auto mt = fx::middle_third();
  const auto env = sample_environment(mt, fx::kBaseSeed, fx::kLargeEnvLength);
  for (const auto& f : phis) {
    const auto large = large_estimates(env, f, fx::kLargeWindow, fx::kLargeKCap);
    track(large.upper, d);
    track(large.lower, d);
  }
  track(small_alpha_hat(env, fx::kSmallPrefix), d);
  track(small_beta_hat(env, fx::kSmallPrefix), d);
  const auto th = moments(mt);
  for (const auto& v : {th.d_lower, th.d_upper, th.alpha, th.beta}) track(v.value_or(NAN), d);
  const double middle_worst = worst;

  // other equicontractive point masses
  const std::vector<LevelDraw> draws{{3, 0.25, {0.5, 0.25, 0.25}},
                                     {4, 0.2, {0.1, 0.2, 0.3, 0.4}},
                                     {2, 0.1, {0.3, 0.7}},
                                     {5, 0.125, {0.05, 0.15, 0.2, 0.25, 0.35}}};
  for (const auto& draw : draws) {
    const DistributionSpec s(PointMass{draw}, 1.0 / 3.0);
    const auto e = sample_environment(s, fx::kBaseSeed, fx::kLargeEnvLength);
    const double up = std::log(draw.min_p()) / std::log(draw.r);
    const double lo = std::log(draw.max_p()) / std::log(draw.r);
    for (const auto& f : phis) {
      const auto large = large_estimates(e, f, fx::kLargeWindow, fx::kLargeKCap);
      track(large.upper, up);
      track(large.lower, lo);
    }
    track(small_alpha_hat(e, fx::kSmallPrefix), up);
    track(small_beta_hat(e, fx::kSmallPrefix), lo);
  }
  o.pass = worst <= 1e-12;
  o.detail = "middle-third max |err| " + fmt(middle_worst, 3) + "; with 4 point masses " + fmt(worst, 3);
  return o;
}

Outcome large_regime(const DistributionSpec& spec, double tolerance, double time_limit) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg(spec);
  cfg.regime = Regime::Large;
  cfg.phi = DimensionFunction::constant(fx::kLargePhiDelta);
  cfg.window = fx::kLargeWindow;
  cfg.k_cap = fx::kLargeKCap;
  cfg.env_length = fx::kLargeEnvLength;
  cfg.replicates = fx::kReplicates;
  cfg.base_seed = fx::kBaseSeed;
  const auto table = run_replicated(cfg);
  const double secs = seconds_since(t0);
  const double du = *table.upper.delta, dl = *table.lower.delta;
  Outcome o;
  o.pass = std::abs(du) <= tolerance && std::abs(dl) <= tolerance && secs < time_limit;
  o.detail = "median upper " + fmt(table.upper.q50) + " (target " + fmt(*table.upper.target) + ", delta " +
             fmt(du, 3) + "), median lower " + fmt(table.lower.q50) + " (target " + fmt(*table.lower.target) +
             ", delta " + fmt(dl, 3) + "), tol " + fmt(tolerance) + ", " + fmt(secs, 3) + " s";
  return o;
}

Outcome two_atom_small() {
  Outcome o;
  const double alpha = -std::log(0.2) / -std::log(0.1);
  const double beta = -std::log(0.8) / -std::log(0.1);
  std::size_t both_by_100 = 0;
  for (std::size_t r = 0; r < fx::kReplicates; ++r) {
    const auto env = sample_environment(fx::two_atom_mixture(), derive_seed(fx::kBaseSeed, r), fx::kSmallPrefix);
    bool skewed = false, even = false;
    for (std::size_t j = 1; j <= 100; ++j) (env.level(j).p[0] == 0.2 ? skewed : even) = true;
    both_by_100 += skewed && even;
    if (small_alpha_hat(env, fx::kSmallPrefix) != alpha || small_beta_hat(env, fx::kSmallPrefix) != beta) {
      o.pass = false;
    }
  }
  o.detail = std::to_string(fx::kReplicates) + " seeds: alpha_hat == " + fmt(alpha, 17) + " and beta_hat == " +
             fmt(beta, 17) + (o.pass ? " on all" : " NOT on all") + "; both atoms by n=100 on " +
             std::to_string(both_by_100);
  return o;
}

Outcome one_variable_model() {
  const auto large = large_regime(fx::one_variable(), fx::kOneVariableTolerance, 1e9);
  Outcome o = large;
  // the drawn atoms give exactly these ratios; compare with the closed values too
  const double a_atom = -std::log(1.0 / 3.0) / -std::log(0.2);
  const double b_atom = -std::log(0.5) / -std::log(0.25);
  const double a_true = std::log(3.0) / std::log(5.0);
  bool exact = true;
  for (std::size_t r = 0; r < fx::kReplicates; ++r) {
    const auto env = sample_environment(fx::one_variable(), derive_seed(fx::kBaseSeed, r), fx::kSmallPrefix);
    exact = exact && small_alpha_hat(env, fx::kSmallPrefix) == a_atom &&
            small_beta_hat(env, fx::kSmallPrefix) == b_atom;
  }
  exact = exact && b_atom == 0.5 && std::abs(a_atom - a_true) <= 1e-15;
  o.pass = o.pass && exact;
  o.detail = "large: " + large.detail + "; small extremes " + fmt(b_atom, 17) + ", " + fmt(a_atom, 17) +
             (exact ? " on all seeds" : " MISMATCH");
  return o;
}

Outcome divergence() {
  Outcome o;
  std::size_t alpha_hits = 0, beta_hits = 0;
  double min_beta = 1.0;
  const auto us = fx::uniform_simplex_cantor();
  const auto inv = fx::inverse_square();
  for (std::size_t s = 0; s < fx::kDivergenceSeeds; ++s) {
    const auto seed = derive_seed(fx::kBaseSeed, s);
    const auto e1 = sample_environment(us, seed, fx::kDivergencePrefix);
    alpha_hits += small_alpha_hat(e1, fx::kDivergencePrefix) > fx::kDivergenceAlphaLevel;
    const auto e2 = sample_environment(inv, seed, fx::kDivergencePrefix);
    const double b = small_beta_hat(e2, fx::kDivergencePrefix);
    min_beta = std::min(min_beta, b);
    beta_hits += b < fx::kDivergenceBetaLevel;
  }
  const double fa = static_cast<double>(alpha_hits) / fx::kDivergenceSeeds;
  const double fb = static_cast<double>(beta_hits) / fx::kDivergenceSeeds;
  o.pass = fa >= fx::kDivergenceFraction && fb >= fx::kDivergenceFraction;
  o.detail = "uniform-simplex alpha_hat > 2 on " + std::to_string(alpha_hits) + "/" + std::to_string(fx::kDivergenceSeeds) +
             " seeds; inverse-square beta_hat < 0.05 on " + std::to_string(beta_hits) + "/" + std::to_string(fx::kDivergenceSeeds) + " seeds (smallest beta_hat " + fmt(min_beta) + ", log t/log 4t >= 1/3)";
  return o;
}

int fitting_depth(const Environment& env, int max_depth, std::size_t budget) {
  double leaves = 1.0;
  int d = 0;
  while (d < max_depth) {
    leaves *= env.level(static_cast<std::size_t>(d + 1)).t;
    if (leaves > static_cast<double>(budget)) break;
    ++d;
  }
  return d;
}

Outcome sandwich_lemma() {
  Outcome o;
  struct Case {
    DistributionSpec spec;
    PlacementPolicy policy;
  };
  const std::vector<Case> cases{{fx::middle_third(), PlacementPolicy::EquallySpaced},
                                {fx::uniform_simplex_cantor(), PlacementPolicy::EquallySpaced},
                                {fx::three_child_simplex(), PlacementPolicy::EquallySpaced},
                                {fx::two_atom_mixture(), PlacementPolicy::ExtremeChildIsolated},
                                {fx::inverse_square(), PlacementPolicy::LeftPackedRightAnchored}};
  const std::size_t per_case = fx::kSandwichEnvironments / cases.size();
  const std::size_t per_env = fx::kSandwichQueries / fx::kSandwichEnvironments;
  std::size_t queries = 0, failures = 0, envs = 0, bad_geometry = 0;
  int max_depth = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    std::size_t used = 0;
    for (std::uint64_t s = 0; used < per_case && s < 1000; ++s) {
      const auto seed = derive_seed(fx::kBaseSeed + 1000 * (c + 1), s);
      const auto env = sample_environment(cases[c].spec, seed, fx::kSandwichDepth);
      const int depth = fitting_depth(env, fx::kSandwichDepth, 200'000);
      if (depth <= gap_constant(cases[c].spec.tau())) continue;
      const auto tree = build_exact_tree(env, cases[c].spec.tau(), cases[c].policy, depth);
      bad_geometry += structural_violations(tree).size() + separation_violations(tree, cases[c].spec.tau()).size();
      const auto qs = random_sandwich_queries(tree, per_env, seed);
      const auto rep = verify_sandwich<Rational>(tree, qs);
      queries += qs.size();
      failures += rep.failures;
      max_depth = std::max(max_depth, depth);
      ++used;
      ++envs;
    }
  }
  o.pass = failures == 0 && bad_geometry == 0 && queries == fx::kSandwichQueries &&
           envs == fx::kSandwichEnvironments;
  o.detail = std::to_string(queries) + " exact queries over " + std::to_string(envs) + " environments (depth <= " +
             std::to_string(max_depth) + "), " + std::to_string(failures) + " failures, " +
             std::to_string(bad_geometry) + " geometry violations";
  return o;
}

Outcome depth_function() {
  Outcome o;
  std::mt19937_64 gen(derive_seed(fx::kBaseSeed, 11));
  std::uniform_int_distribution<std::size_t> un(1, 1000);
  std::uniform_real_distribution<double> ud(0.0, 5.0);
  std::size_t pairs = 0, mismatches = 0;
  for (const char* key : {"middle-third", "uniform-simplex", "three-child", "two-atom"}) {
    const auto env = sample_environment(fx::by_name(key), fx::kBaseSeed, 6001);
    const std::vector<double> z(env.z().begin(), env.z().end());
    for (int i = 0; i < 250; ++i) {
      const std::size_t n = un(gen);
      double delta = ud(gen);
      while (delta == 0.0) delta = ud(gen);
      const auto f = DimensionFunction::constant(delta);
      const std::size_t got = depth(z, f, n);
      const std::size_t closed = oracle::exact_ceil_product(n, delta);
      const auto scan = oracle::brute_depth(z, n, [delta](double) { return delta; });
      ++pairs;
      if (got != closed || !scan || *scan != got) ++mismatches;
    }
  }

  // Phi ordered pointwise: 0.1 <= 0.25 <= 0.5 <= 1 <= 2 <= 4
  const std::vector<DimensionFunction> chain{DimensionFunction::constant(0.1), DimensionFunction::theta_spectrum(0.8),
                                             DimensionFunction::constant(0.5), DimensionFunction::theta_spectrum(0.5),
                                             DimensionFunction::constant(2.0), DimensionFunction::theta_spectrum(0.2)};
  std::size_t mono_envs = 0, mono_bad = 0;
  const std::vector<DistributionSpec> random_specs{fx::uniform_ratio_halves(), fx::one_variable(), fx::inverse_square()};
  for (std::size_t e = 0; e < 100; ++e) {
    const auto env = sample_environment(random_specs[e % 3], derive_seed(fx::kBaseSeed + 7, e), 12000);
    for (std::size_t n : {1u, 3u, 10u, 37u, 100u, 250u, 499u}) {
      std::size_t prev = 0;
      for (const auto& f : chain) {
        const auto k = depth(env.z(), f, n);
        if (k < prev) ++mono_bad;
        prev = k;
      }
    }
    ++mono_envs;
  }
  o.pass = mismatches == 0 && mono_bad == 0 && pairs == 1000;
  o.detail = std::to_string(pairs) + " (n, delta) pairs, " + std::to_string(mismatches) +
             " mismatches vs exact ceil(n delta) and scan; monotonicity on " + std::to_string(mono_envs) +
             " environments, " + std::to_string(mono_bad) + " violations";
  return o;
}

Outcome sanity_chain_all_fixtures() {
  Outcome o;
  const auto f = DimensionFunction::constant(fx::kLargePhiDelta);
  std::size_t runs = 0, violations = 0;
  std::string first;
  for (const auto& nf : fx::all()) {
    for (std::size_t r = 0; r < fx::kReplicates; ++r) {
      const auto env = sample_environment(nf.spec, derive_seed(fx::kBaseSeed, r),
                                          std::max(fx::kLargeEnvLength, fx::kSmallPrefix));
      const auto large = large_estimates(env, f, fx::kLargeWindow, fx::kLargeKCap);
      const auto small = small_estimates(env, fx::kSmallPrefix);
      const auto v = sanity_chain(small, large);
      ++runs;
      violations += v.size();
      if (!v.empty() && first.empty()) first = nf.key + " replicate " + std::to_string(r) + ": " + v.front().relation;
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(runs) + " runs over " + std::to_string(fx::all().size()) + " fixtures, " +
             std::to_string(violations) + " violations" + (first.empty() ? "" : " (first: " + first + ")");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "closed forms vs Monte Carlo", closed_forms_vs_monte_carlo},
      {2, "combinatorial identities", combinatorial_identities},
      {3, "min/max CDF formulas", cdf_formulas},
      {4, "degenerate exactness", degenerate_exactness},
      {5, "large regime, uniform-simplex Cantor",
       [] { return large_regime(fx::uniform_simplex_cantor(), fx::kLargeTolerance, 120.0); }},
      {6, "large regime, three-child simplex",
       [] { return large_regime(fx::three_child_simplex(), fx::kLargeTolerance, 120.0); }},
      {7, "small regime, two-atom mixture", two_atom_small},
      {8, "1-variable model", one_variable_model},
      {9, "divergence of the small-regime extremes", divergence},
      {10, "ball/Moran interval sandwich", sandwich_lemma},
      {11, "depth function", depth_function},
      {12, "sanity chain on every fixture", sanity_chain_all_fixtures},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
