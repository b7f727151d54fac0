#pragma once

// Truncated geometric realization of a random Moran construction on [0,1].
//
// MoranTree<double> is the float mode: widths are exp(-sum Z) and child
// positions are parent.left + offset. MoranTree<Rational> is the exact mode
// used as an oracle at small depth: every ratio and probability is converted
// to its exact binary value and all geometry is rational.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "phidim/environment.hpp"
#include "phidim/rational.hpp"
#include "phidim/separation.hpp"

namespace phidim {

enum class PlacementPolicy {
  /// First child at the parent's left end, last at its right end, equal gaps.
  EquallySpaced,
  /// Children from the left end with gaps equal to their own width; the last
  /// child is flush with the parent's right end.
  LeftPackedRightAnchored,
  /// Max-probability child at the left end, min-probability child at the right
  /// end, both separated from their siblings by at least tau * parent width.
  ExtremeChildIsolated,
};

std::string to_string(PlacementPolicy policy);
PlacementPolicy policy_from_string(const std::string& name);

inline constexpr std::size_t kDefaultLeafCap = 10'000'000;

template <class Coord>
class MoranTree {
 public:
  static constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    int level = 0;
    Coord left{};
    Coord right{};
    double log_measure = 0.0;
    /// Exact in Rational mode; exp(log_measure) in float mode (may underflow).
    Coord measure{};
    std::uint32_t parent = kNoParent;
    std::uint32_t first_child = 0;
    std::uint32_t child_count = 0;
    /// Position of this child in its level's probability vector (0-based).
    std::uint32_t child_index = 0;
  };

  MoranTree() = default;

  int depth() const noexcept { return static_cast<int>(level_begin_.size()) - 2; }
  double tau() const noexcept { return tau_; }
  int gap_constant() const noexcept { return gap_constant_; }
  PlacementPolicy policy() const noexcept { return policy_; }
  const std::vector<LevelDraw>& draws() const noexcept { return draws_; }

  /// r_1 ... r_level (width of every level-`level` interval).
  const Coord& width(int level) const { return width_.at(static_cast<std::size_t>(level)); }
  double log_width(int level) const { return log_width_.at(static_cast<std::size_t>(level)); }

  std::span<const Node> nodes() const noexcept { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  const Coord& right(const Node& n) const noexcept { return n.right; }
  std::span<const Node> children(const Node& n) const {
    return std::span<const Node>(nodes_).subspan(n.first_child, n.child_count);
  }
  /// Node indices [level_begin(l), level_end(l)) hold level l.
  std::size_t level_begin(int level) const { return level_begin_.at(static_cast<std::size_t>(level)); }
  std::size_t level_end(int level) const { return level_begin_.at(static_cast<std::size_t>(level) + 1); }
  std::size_t leaf_count() const { return level_end(depth()) - level_begin(depth()); }

  /// 1-based child indices from the root down to node `i`.
  std::vector<int> path(std::size_t i) const;
  /// Ancestor of node `i` at `level` (<= its own level).
  std::size_t ancestor(std::size_t i, int level) const;

 private:
  template <class C>
  friend MoranTree<C> build_tree_as(const Environment&, double, PlacementPolicy, int, std::size_t);

  std::vector<Node> nodes_;
  std::vector<std::size_t> level_begin_;
  std::vector<Coord> width_;
  std::vector<double> log_width_;
  std::vector<LevelDraw> draws_;
  double tau_ = 0.0;
  int gap_constant_ = 0;
  PlacementPolicy policy_ = PlacementPolicy::EquallySpaced;
};

using FloatTree = MoranTree<double>;
using ExactTree = MoranTree<Rational>;

/// Builds the first `depth` levels of the construction driven by `env`.
/// Throws PlacementError when a level's ratio is infeasible for `tau` or the
/// policy, and Error when the leaf count would exceed `leaf_cap`.
template <class Coord>
MoranTree<Coord> build_tree_as(const Environment& env, double tau, PlacementPolicy policy,
                               int depth, std::size_t leaf_cap = kDefaultLeafCap);

inline FloatTree build_tree(const Environment& env, double tau, PlacementPolicy policy, int depth,
                            std::size_t leaf_cap = kDefaultLeafCap) {
  return build_tree_as<double>(env, tau, policy, depth, leaf_cap);
}
inline ExactTree build_exact_tree(const Environment& env, double tau, PlacementPolicy policy,
                                  int depth, std::size_t leaf_cap = kDefaultLeafCap) {
  return build_tree_as<Rational>(env, tau, policy, depth, leaf_cap);
}

/// Largest ratio the policy can realize for t children at separation tau.
double policy_ratio_bound(PlacementPolicy policy, int t, double tau);

/// I_level(x): index of the level-`level` node containing x. Throws GapError
/// (carrying the deepest covering level) when x falls in a gap.
template <class Coord>
std::size_t locate(const MoranTree<Coord>& tree, const Coord& x, int level);

struct BallBounds {
  double log_lower;  ///< log mu of the leaves inside the closed ball (-inf if none)
  double log_upper;  ///< log mu of the leaves meeting the closed ball
  bool degenerate;   ///< radius below the leaf width
};

/// Leaf-resolution bracket of mu(B(x,R)); x must lie in a leaf.
template <class Coord>
BallBounds ball_measure_bounds(const MoranTree<Coord>& tree, const Coord& x, const Coord& radius);

struct SandwichResult {
  int level = 0;             ///< N with r_1..r_{N+1} <= R < r_1..r_N
  bool inner_contained = false;   ///< I_{N+1}(x) inside the closed ball
  bool outer_contained = false;   ///< every leaf meeting the ball lies in I_{N-L}(x)
  bool pass() const noexcept { return inner_contained && outer_contained; }
};

/// Checks both set inclusions of the ball/Moran-interval sandwich for one
/// query. Throws QueryError unless N - L >= 0 and N + 1 <= depth.
template <class Coord>
SandwichResult check_sandwich(const MoranTree<Coord>& tree, const Coord& x, const Coord& radius);

template <class Coord>
struct SandwichQuery {
  Coord x;
  Coord radius;
};

struct SandwichReport {
  std::vector<SandwichResult> results;
  std::size_t failures = 0;
  bool ok() const noexcept { return failures == 0; }
};

template <class Coord>
SandwichReport verify_sandwich(const MoranTree<Coord>& tree,
                               std::span<const SandwichQuery<Coord>> queries);

/// `count` random admissible queries: x uniform in a uniformly chosen leaf,
/// N uniform on [L, depth-1] and R uniform on [r_1..r_{N+1}, r_1..r_N).
/// Throws QueryError when depth <= L.
template <class Coord>
std::vector<SandwichQuery<Coord>> random_sandwich_queries(const MoranTree<Coord>& tree,
                                                          std::size_t count, std::uint64_t seed);

/// True when every leaf meeting the closed ball B(x, radius) descends from
/// I_level(x).
template <class Coord>
bool ball_isolated_within(const MoranTree<Coord>& tree, const Coord& x, const Coord& radius,
                          int level);

struct SeparationViolation {
  int level;           ///< level of the children
  std::size_t parent;  ///< parent node index
  double gap;
  double required;
  std::string rule;
};

/// Sibling gaps below tau_check * child width, plus (for ExtremeChildIsolated
/// trees) gaps next to an extreme child below tau_check * parent width.
template <class Coord>
std::vector<SeparationViolation> separation_violations(const MoranTree<Coord>& tree,
                                                       double tau_check);

/// Children outside their parent, or child measures not summing to the parent
/// (exactly in Rational mode, 1e-10 relative in float mode).
template <class Coord>
std::vector<std::string> structural_violations(const MoranTree<Coord>& tree);

/// One node per line in depth-first order:
///   level path left right log_measure
/// path is dot-separated 1-based child indices ("-" for the root). Float mode
/// prints %.17g, exact mode prints p/q.
template <class Coord>
void write_tree(std::ostream& out, const MoranTree<Coord>& tree);

}  // namespace phidim
