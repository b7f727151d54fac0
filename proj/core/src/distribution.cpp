#include "phidim/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "format.hpp"
#include "phidim/errors.hpp"
#include "phidim/separation.hpp"
#include "phidim/spec_io.hpp"

namespace phidim {

namespace {

constexpr double kSumTol = 1e-12;

void check_probability_vector(const std::vector<double>& p, int t, const char* where) {
  if (static_cast<int>(p.size()) != t) {
    throw InvalidSpec("probability-length", std::string(where) + ": probability vector has length " +
                                                std::to_string(p.size()) + ", expected t=" +
                                                std::to_string(t));
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v > 0.0)) throw InvalidSpec("probability-positive", std::string(where) + ": p_i <= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw InvalidSpec("probability-sum",
                      std::string(where) + ": probabilities sum to " + detail::fmt_num(sum, 17));
  }
}

void check_weights(double total, const char* where) {
  if (std::abs(total - 1.0) > kSumTol) {
    throw InvalidSpec("weights-sum",
                      std::string(where) + ": weights sum to " + detail::fmt_num(total, 17));
  }
}

void check_ratio(double r, const char* where) {
  if (!(r > 0.0 && r <= 0.5)) {
    throw InvalidSpec("ratio-range", std::string(where) + ": r=" + detail::fmt_num(r) +
                                         " outside (0, 1/2]");
  }
}

}  // namespace

void check_draw(const LevelDraw& draw) {
  if (draw.t < 2) throw InvalidSpec("child-count", "t must be >= 2");
  check_ratio(draw.r, "level draw");
  check_probability_vector(draw.p, draw.t, "level draw");
}

void check_draw_separation(const LevelDraw& draw, double tau) {
  const double bound = feasible_ratio_bound(draw.t, tau);
  if (draw.r > bound) {
    throw InvalidSpec("separation", "r=" + detail::fmt_num(draw.r) + " exceeds 1/(t+tau(t-1))=" +
                                        detail::fmt_num(bound) + " for t=" +
                                        std::to_string(draw.t));
  }
}

DistributionSpec::DistributionSpec(Variant variant, double tau, std::string name)
    : variant_(std::move(variant)), tau_(tau), name_(std::move(name)) {
  if (!(tau_ > 0.0 && tau_ < 1.0)) throw InvalidSpec("tau-range", "tau must lie in (0,1)");

  if (auto* pm = std::get_if<PointMass>(&variant_)) {
    check_draw(pm->draw);
  } else if (auto* mix = std::get_if<DiscreteMixture>(&variant_)) {
    if (mix->atoms.empty()) throw InvalidSpec("mixture-nonempty", "mixture has no atoms");
    double total = 0.0;
    for (const auto& a : mix->atoms) {
      if (!(a.weight > 0.0)) throw InvalidSpec("weights-positive", "mixture weight <= 0");
      check_draw(a.draw);
      total += a.weight;
    }
    check_weights(total, "mixture");
  } else {
    const auto& pf = std::get<ProductForm>(variant_);
    if (pf.t_dist.empty()) throw InvalidSpec("t-dist-nonempty", "child-count law is empty");
    double total = 0.0;
    std::set<int> seen;
    for (const auto& [t, w] : pf.t_dist) {
      if (t < 2) throw InvalidSpec("child-count", "t must be >= 2");
      if (!(w > 0.0)) throw InvalidSpec("weights-positive", "child-count weight <= 0");
      if (!seen.insert(t).second) throw InvalidSpec("t-dist-unique", "repeated child count");
      total += w;
    }
    check_weights(total, "child-count law");
    for (int t : seen) {
      if (const auto* fr = std::get_if<FixedRatio>(&pf.r_rule)) {
        check_ratio(fr->r, "fixed ratio");
      } else if (const auto& ur = std::get<UniformRatio>(pf.r_rule); ur.upper) {
        check_ratio(*ur.upper, "uniform ratio bound");
      }
      if (const auto* fp = std::get_if<FixedProbabilities>(&pf.p_rule)) {
        check_probability_vector(fp->p, t, "fixed probabilities");
      } else if (const auto* dp = std::get_if<DiscreteProbabilities>(&pf.p_rule)) {
        if (dp->atoms.empty()) throw InvalidSpec("discrete-set-nonempty", "DiscreteSet is empty");
        double wsum = 0.0;
        for (const auto& a : dp->atoms) {
          if (!(a.weight > 0.0)) throw InvalidSpec("weights-positive", "DiscreteSet weight <= 0");
          check_probability_vector(a.p, t, "DiscreteSet");
          wsum += a.weight;
        }
        check_weights(wsum, "DiscreteSet");
      }
    }
  }
}

std::string DistributionSpec::variant_name() const {
  switch (variant_.index()) {
    case 0: return "PointMass";
    case 1: return "ProductForm";
    default: return "DiscreteMixture";
  }
}

std::string DistributionSpec::id() const {
  // FNV-1a over the canonical compact serialization.
  const std::string text = spec_to_json(*this, -1);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<int> DistributionSpec::child_counts() const {
  std::set<int> ts;
  if (const auto* pm = std::get_if<PointMass>(&variant_)) {
    ts.insert(pm->draw.t);
  } else if (const auto* mix = std::get_if<DiscreteMixture>(&variant_)) {
    for (const auto& a : mix->atoms) ts.insert(a.draw.t);
  } else {
    for (const auto& tw : std::get<ProductForm>(variant_).t_dist) ts.insert(tw.t);
  }
  return {ts.begin(), ts.end()};
}

double DistributionSpec::ratio_upper(int t) const {
  if (const auto* pm = std::get_if<PointMass>(&variant_)) return pm->draw.r;
  if (const auto* mix = std::get_if<DiscreteMixture>(&variant_)) {
    double best = 0.0;
    for (const auto& a : mix->atoms) {
      if (a.draw.t == t) best = std::max(best, a.draw.r);
    }
    return best;
  }
  const auto& pf = std::get<ProductForm>(variant_);
  if (const auto* fr = std::get_if<FixedRatio>(&pf.r_rule)) return fr->r;
  const auto& ur = std::get<UniformRatio>(pf.r_rule);
  return ur.upper ? *ur.upper : feasible_ratio_bound(t, tau_);
}

std::vector<std::string> DistributionSpec::separation_issues() const {
  std::vector<std::string> issues;
  for (int t : child_counts()) {
    const double r = ratio_upper(t);
    const double bound = feasible_ratio_bound(t, tau_);
    if (r > bound) {
      issues.push_back("t=" + std::to_string(t) + ": ratio up to " + detail::fmt_num(r) +
                       " exceeds separation bound " + detail::fmt_num(bound) + " at tau=" +
                       detail::fmt_num(tau_));
    }
  }
  return issues;
}

DistributionSpec inverse_square_mixture(int t_max, double tau, std::string name) {
  if (t_max < 2) throw InvalidSpec("truncation", "t_max must be >= 2");
  double total = 0.0;
  for (int t = 2; t <= t_max; ++t) total += 1.0 / (static_cast<double>(t) * t);
  DiscreteMixture mix;
  mix.truncated_at = t_max;
  double running = 0.0;
  for (int t = 2; t <= t_max; ++t) {
    double w = 1.0 / (static_cast<double>(t) * t) / total;
    if (t == t_max) w = 1.0 - running;  // absorb rounding so weights sum to 1
    running += w;
    LevelDraw d;
    d.t = t;
    d.r = 1.0 / (4.0 * t);
    d.p.assign(static_cast<std::size_t>(t), 1.0 / t);
    mix.atoms.push_back({w, std::move(d)});
  }
  return DistributionSpec(std::move(mix), tau, std::move(name));
}

}  // namespace phidim
