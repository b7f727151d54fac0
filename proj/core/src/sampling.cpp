#include <cmath>

#include "phidim/environment.hpp"
#include "phidim/errors.hpp"
#include "phidim/rng.hpp"

namespace phidim {

namespace {

template <class Weights>
std::vector<double> cumulative(const Weights& items) {
  std::vector<double> cdf;
  cdf.reserve(items.size());
  double acc = 0.0;
  for (const auto& it : items) {
    acc += it.weight;
    cdf.push_back(acc);
  }
  return cdf;
}

std::vector<double> uniform_simplex(CounterRng& rng, int t) {
  std::vector<double> p(static_cast<std::size_t>(t));
  double sum = 0.0;
  for (auto& v : p) {
    v = rng.exponential();
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return p;
}

// Draw order within a level is fixed: t, then r, then p.
LevelDraw draw_product(const DistributionSpec& spec, const ProductForm& pf, CounterRng& rng) {
  LevelDraw d;
  if (pf.t_dist.size() == 1) {
    d.t = pf.t_dist.front().t;
  } else {
    d.t = pf.t_dist[rng.pick(cumulative(pf.t_dist))].t;
  }
  if (const auto* fr = std::get_if<FixedRatio>(&pf.r_rule)) {
    d.r = fr->r;
  } else {
    d.r = spec.ratio_upper(d.t) * rng.uniform_open();
  }
  if (const auto* fp = std::get_if<FixedProbabilities>(&pf.p_rule)) {
    d.p = fp->p;
  } else if (std::holds_alternative<UniformSimplex>(pf.p_rule)) {
    d.p = uniform_simplex(rng, d.t);
  } else {
    const auto& ds = std::get<DiscreteProbabilities>(pf.p_rule);
    d.p = ds.atoms[rng.pick(cumulative(ds.atoms))].p;
  }
  return d;
}

}  // namespace

LevelDraw sample_level(const DistributionSpec& spec, std::uint64_t seed, std::size_t level) {
  const auto& v = spec.variant();
  if (const auto* pm = std::get_if<PointMass>(&v)) return pm->draw;
  CounterRng rng(seed, level);
  if (const auto* mix = std::get_if<DiscreteMixture>(&v)) {
    return mix->atoms[rng.pick(cumulative(mix->atoms))].draw;
  }
  return draw_product(spec, std::get<ProductForm>(v), rng);
}

Environment sample_environment(const DistributionSpec& spec, std::uint64_t seed,
                               std::size_t depth) {
  if (depth < 1) throw DomainError("sample_environment: depth must be >= 1");
  std::vector<LevelDraw> draws;
  draws.reserve(depth);
  for (std::size_t level = 1; level <= depth; ++level) {
    draws.push_back(sample_level(spec, seed, level));
  }
  return Environment(std::move(draws), seed, spec.id());
}

}  // namespace phidim
