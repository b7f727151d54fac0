#pragma once

// The law pi of one construction level, from which the environment is drawn iid.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phidim/level_draw.hpp"

namespace phidim {

/// Deterministic spec: every level equals `draw`.
struct PointMass {
  LevelDraw draw;
};

struct FixedRatio {
  double r;
};
/// r uniform on (0, c_t]. Without an explicit bound c_t defaults to
/// feasible_ratio_bound(t, tau).
struct UniformRatio {
  std::optional<double> upper;
};
using RatioRule = std::variant<FixedRatio, UniformRatio>;

struct FixedProbabilities {
  std::vector<double> p;
};
/// p uniform on the open simplex of dimension t (Dirichlet(1,...,1)).
struct UniformSimplex {};
struct WeightedVector {
  double weight;
  std::vector<double> p;
};
struct DiscreteProbabilities {
  std::vector<WeightedVector> atoms;
};
using ProbabilityRule = std::variant<FixedProbabilities, UniformSimplex, DiscreteProbabilities>;

struct ChildCountWeight {
  int t;
  double weight;
};

/// Two-step law: t from `t_dist`, then r and p independently given t.
struct ProductForm {
  std::vector<ChildCountWeight> t_dist;
  RatioRule r_rule;
  ProbabilityRule p_rule;
};

struct WeightedDraw {
  double weight;
  LevelDraw draw;
};
/// Finitely supported law on whole level draws.
struct DiscreteMixture {
  std::vector<WeightedDraw> atoms;
  /// Set when the mixture is a truncation of an infinite family.
  std::optional<int> truncated_at;
};

class DistributionSpec {
 public:
  using Variant = std::variant<PointMass, ProductForm, DiscreteMixture>;

  DistributionSpec(Variant variant, double tau, std::string name = {});

  const Variant& variant() const noexcept { return variant_; }
  double tau() const noexcept { return tau_; }
  const std::string& name() const noexcept { return name_; }
  /// Name of the active variant: "PointMass", "ProductForm" or "DiscreteMixture".
  std::string variant_name() const;
  /// Stable content hash (hex) of the canonical serialization.
  std::string id() const;

  /// Every child count with positive probability, ascending.
  std::vector<int> child_counts() const;
  /// Upper end of the ratio support for child count t (c_t for UniformRatio).
  double ratio_upper(int t) const;

  /// Draws that violate r <= feasible_ratio_bound(t, tau), described as text.
  /// Empty when the spec can be realized geometrically on [0,1].
  std::vector<std::string> separation_issues() const;

 private:
  Variant variant_;
  double tau_;
  std::string name_;
};

/// Weights w_t proportional to t^{-2} on t = 2..t_max, renormalized; atom t has
/// r = 1/(4t) and p = (1/t, ..., 1/t).
DistributionSpec inverse_square_mixture(int t_max, double tau, std::string name = {});

}  // namespace phidim
