#include "phidim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phidim/errors.hpp"
#include "phidim/simplex.hpp"

namespace phidim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Moments3 {
  std::optional<double> ex, ey, ez;
};

void accumulate(std::optional<double>& acc, std::optional<double> v, double w) {
  if (!acc || !v) {
    acc.reset();
    return;
  }
  *acc += w * *v;
}

Moments3 product_moments(const DistributionSpec& spec, const ProductForm& pf,
                         std::vector<std::string>& notes) {
  Moments3 out{0.0, 0.0, 0.0};
  for (const auto& [t, w] : pf.t_dist) {
    std::optional<double> ex, ey;
    if (const auto* fp = std::get_if<FixedProbabilities>(&pf.p_rule)) {
      ex = -std::log(*std::max_element(fp->p.begin(), fp->p.end()));
      ey = -std::log(*std::min_element(fp->p.begin(), fp->p.end()));
    } else if (const auto* ds = std::get_if<DiscreteProbabilities>(&pf.p_rule)) {
      ex = 0.0;
      ey = 0.0;
      for (const auto& a : ds->atoms) {
        *ex += a.weight * -std::log(*std::max_element(a.p.begin(), a.p.end()));
        *ey += a.weight * -std::log(*std::min_element(a.p.begin(), a.p.end()));
      }
    } else {
      ey = closed_form_ey(t);
      try {
        ex = closed_form_ex(t);
      } catch (const DomainError& e) {
        notes.push_back(std::string("E(X) unavailable: ") + e.what());
      }
    }
    double ez = 0.0;
    if (const auto* fr = std::get_if<FixedRatio>(&pf.r_rule)) {
      ez = -std::log(fr->r);
    } else {
      ez = 1.0 - std::log(spec.ratio_upper(t));  // E(-log(c U)) for U ~ Uniform(0,1)
    }
    accumulate(out.ex, ex, w);
    accumulate(out.ey, ey, w);
    accumulate(out.ez, ez, w);
  }
  return out;
}

}  // namespace

std::string to_string(TriState s) {
  switch (s) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    case TriState::Unknown: return "unknown";
  }
  return "unknown";
}

Extremes extremes(const DistributionSpec& spec) {
  Extremes out;
  const auto& v = spec.variant();
  auto over_atoms = [&](auto&& atoms, auto&& draw_of) {
    double a = -kInf, b = kInf;
    for (const auto& atom : atoms) {
      const LevelDraw& d = draw_of(atom);
      a = std::max(a, d.y() / d.z());
      b = std::min(b, d.x() / d.z());
    }
    out.alpha = a;
    out.beta = b;
  };

  if (const auto* pm = std::get_if<PointMass>(&v)) {
    over_atoms(std::vector<LevelDraw>{pm->draw}, [](const LevelDraw& d) -> const LevelDraw& { return d; });
    out.rules.push_back("single atom");
    return out;
  }
  if (const auto* mix = std::get_if<DiscreteMixture>(&v)) {
    over_atoms(mix->atoms, [](const WeightedDraw& a) -> const LevelDraw& { return a.draw; });
    out.rules.push_back("finite support: extremes over atoms");
    return out;
  }

  const auto& pf = std::get<ProductForm>(v);
  if (std::holds_alternative<UniformSimplex>(pf.p_rule)) {
    // essinf m = 0 and m is independent of r given t; esssup M = 1.
    out.alpha = kInf;
    out.beta = 0.0;
    out.rules.push_back("alpha=inf: essinf m = 0 with m independent of r");
    out.rules.push_back("beta=0: esssup M = 1");
    return out;
  }

  std::vector<std::vector<double>> vectors;
  if (const auto* fp = std::get_if<FixedProbabilities>(&pf.p_rule)) {
    vectors.push_back(fp->p);
  } else {
    for (const auto& a : std::get<DiscreteProbabilities>(pf.p_rule).atoms) vectors.push_back(a.p);
  }

  const bool uniform_r = std::holds_alternative<UniformRatio>(pf.r_rule);
  double a = -kInf, b = kInf;
  for (const auto& tw : pf.t_dist) {
    const double log_r_top = std::log(spec.ratio_upper(tw.t));
    for (const auto& p : vectors) {
      const double log_m = std::log(*std::min_element(p.begin(), p.end()));
      const double log_big = std::log(*std::max_element(p.begin(), p.end()));
      // log m / log r grows as r increases, so its sup sits at the top of the r-support
      a = std::max(a, log_m / log_r_top);
      if (!uniform_r) b = std::min(b, log_big / log_r_top);
    }
  }
  out.alpha = a;
  if (uniform_r) {
    out.beta = 0.0;
    out.rules.push_back("alpha at r = c_t (ratio increasing in r)");
    out.rules.push_back("beta=0: essinf r = 0 with essinf M > 0");
  } else {
    out.beta = b;
    out.rules.push_back("finite support: extremes over probability atoms");
  }
  return out;
}

MgfFlags mgf_flags(const DistributionSpec& spec) {
  const auto& v = spec.variant();
  if (std::holds_alternative<PointMass>(v) || std::holds_alternative<DiscreteMixture>(v)) {
    return {TriState::Yes, TriState::Yes, TriState::Yes};
  }
  MgfFlags f;
  // child counts have finite support, so M >= 1/t_max and X is bounded
  f.x = TriState::Yes;
  // fixed or finitely many probability vectors bound Y; the uniform simplex
  // has E(exp(lambda Y)) < inf for |lambda| < 1
  f.y = TriState::Yes;
  // fixed r bounds Z; uniform r has E(r^{-lambda}) < inf for lambda < 1
  f.z = TriState::Yes;
  return f;
}

TheoryReport moments(const DistributionSpec& spec) {
  TheoryReport rep;
  const auto& v = spec.variant();
  if (const auto* pm = std::get_if<PointMass>(&v)) {
    rep.ex = pm->draw.x();
    rep.ey = pm->draw.y();
    rep.ez = pm->draw.z();
  } else if (const auto* mix = std::get_if<DiscreteMixture>(&v)) {
    double ex = 0.0, ey = 0.0, ez = 0.0;
    for (const auto& a : mix->atoms) {
      ex += a.weight * a.draw.x();
      ey += a.weight * a.draw.y();
      ez += a.weight * a.draw.z();
    }
    rep.ex = ex;
    rep.ey = ey;
    rep.ez = ez;
    rep.truncated_at = mix->truncated_at;
    if (mix->truncated_at) {
      rep.notes.push_back("mixture truncated at t_max=" + std::to_string(*mix->truncated_at) +
                          " and renormalized");
    }
  } else {
    const auto m = product_moments(spec, std::get<ProductForm>(v), rep.notes);
    rep.ex = m.ex;
    rep.ey = m.ey;
    rep.ez = m.ez;
  }
  if (rep.ex && rep.ez) rep.d_lower = *rep.ex / *rep.ez;
  if (rep.ey && rep.ez) rep.d_upper = *rep.ey / *rep.ez;

  const Extremes ext = extremes(spec);
  rep.alpha = ext.alpha;
  rep.beta = ext.beta;
  for (const auto& r : ext.rules) rep.notes.push_back(r);
  rep.mgf = mgf_flags(spec);
  return rep;
}

}  // namespace phidim
