#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "format.hpp"
#include "phidim/errors.hpp"
#include "phidim/moran.hpp"
#include "phidim/rng.hpp"

namespace phidim {

namespace {

constexpr double kFloatRelTol = 1e-12;
constexpr double kMeasureTol = 1e-10;
// rounding slack for float-mode containment; coordinates live in [0,1]
constexpr double kCoordTol = 1e-14;

template <class C>
C from_double(double v);
template <>
double from_double<double>(double v) {
  return v;
}
template <>
Rational from_double<Rational>(double v) {
  return exact_rational(v);
}

double to_double(double v) { return v; }
double to_double(const Rational& q) { return q.template convert_to<double>(); }

std::string coord_text(double v) { return detail::fmt_num(v, 17); }
std::string coord_text(const Rational& q) { return to_string(q); }

/// a >= b, with a relative slack in float mode.
bool at_least(double a, double b) { return a >= b - kFloatRelTol * std::abs(b); }
bool at_least(const Rational& a, const Rational& b) { return a >= b; }

double log_sum_exp(const std::vector<double>& terms) {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

/// (index of the max-probability child, index of a min-probability child),
/// lowest index first; distinct whenever t >= 2.
std::pair<std::size_t, std::size_t> extreme_children(const LevelDraw& d) {
  const std::size_t hi = d.argmax_p();
  const double lo_value = d.min_p();
  std::size_t lo = d.argmin_p();
  if (lo == hi) {
    for (std::size_t i = 0; i < d.p.size(); ++i) {
      if (i != hi && d.p[i] == lo_value) {
        lo = i;
        break;
      }
    }
  }
  return {hi, lo};
}

/// Left offsets of the children relative to the parent's left end, indexed by
/// probability position. Throws PlacementError if a required gap is too small.
template <class C>
std::vector<C> child_offsets(PlacementPolicy policy, const LevelDraw& d, const C& parent_w,
                             const C& child_w, const C& tau) {
  const int t = d.t;
  std::vector<C> off(static_cast<std::size_t>(t));
  const C min_gap = tau * child_w;
  auto require = [&](const C& gap, const C& need, const char* what) {
    if (!at_least(gap, need)) {
      throw PlacementError(std::string(to_string(policy)) + ": " + what + " for t=" +
                           std::to_string(t) + ", r=" + detail::fmt_num(d.r));
    }
  };

  switch (policy) {
    case PlacementPolicy::EquallySpaced: {
      const C gap = (parent_w - C(t) * child_w) / C(t - 1);
      require(gap, min_gap, "sibling gap below tau * width");
      for (int i = 0; i < t; ++i) off[static_cast<std::size_t>(i)] = C(i) * (child_w + gap);
      break;
    }
    case PlacementPolicy::LeftPackedRightAnchored: {
      for (int i = 0; i + 1 < t; ++i) off[static_cast<std::size_t>(i)] = C(2 * i) * child_w;
      off.back() = parent_w - child_w;
      const C last_gap = off.back() - (off[static_cast<std::size_t>(t - 2)] + child_w);
      require(last_gap, min_gap, "gap before the anchored child below tau * width");
      break;
    }
    case PlacementPolicy::ExtremeChildIsolated: {
      const auto [hi, lo] = extreme_children(d);
      std::vector<std::size_t> order{hi};
      for (std::size_t i = 0; i < d.p.size(); ++i) {
        if (i != hi && i != lo) order.push_back(i);
      }
      order.push_back(lo);
      const C isolation = tau * parent_w;
      const C extra = (t == 2) ? isolation : C(2) * isolation;
      const C base = (parent_w - C(t) * child_w - extra) / C(t - 1);
      require(base, min_gap, "ratio too large to isolate the extreme children");
      C pos = C(0);
      for (std::size_t k = 0; k < order.size(); ++k) {
        off[order[k]] = pos;
        C gap = base;
        if (k == 0 || k + 2 == order.size()) gap += isolation;
        pos += child_w + gap;
      }
      break;
    }
  }
  return off;
}

template <class C>
std::vector<C> exact_weights(const LevelDraw& d) {
  std::vector<C> w;
  w.reserve(d.p.size());
  for (double v : d.p) w.push_back(from_double<C>(v));
  if constexpr (std::is_same_v<C, Rational>) {
    // renormalize so child measures add up to the parent exactly
    const Rational total = std::accumulate(w.begin(), w.end(), Rational(0));
    for (auto& v : w) v /= total;
  }
  return w;
}

template <class C>
bool disjoint(const MoranTree<C>& tree, const typename MoranTree<C>::Node& n, const C& lo,
              const C& hi) {
  return tree.right(n) < lo || n.left > hi;
}

template <class C>
bool inside(const MoranTree<C>& tree, const typename MoranTree<C>::Node& n, const C& lo,
            const C& hi) {
  return n.left >= lo && tree.right(n) <= hi;
}

}  // namespace

std::string to_string(PlacementPolicy policy) {
  switch (policy) {
    case PlacementPolicy::EquallySpaced: return "EquallySpaced";
    case PlacementPolicy::LeftPackedRightAnchored: return "LeftPackedRightAnchored";
    case PlacementPolicy::ExtremeChildIsolated: return "ExtremeChildIsolated";
  }
  return "EquallySpaced";
}

PlacementPolicy policy_from_string(const std::string& name) {
  if (name == "EquallySpaced") return PlacementPolicy::EquallySpaced;
  if (name == "LeftPackedRightAnchored") return PlacementPolicy::LeftPackedRightAnchored;
  if (name == "ExtremeChildIsolated") return PlacementPolicy::ExtremeChildIsolated;
  throw ConfigError("unknown placement policy '" + name + "'");
}

double policy_ratio_bound(PlacementPolicy policy, int t, double tau) {
  if (t < 2) throw DomainError("policy_ratio_bound needs t >= 2");
  switch (policy) {
    case PlacementPolicy::EquallySpaced: return feasible_ratio_bound(t, tau);
    case PlacementPolicy::LeftPackedRightAnchored: return 1.0 / (2.0 * t - 2.0 + tau);
    case PlacementPolicy::ExtremeChildIsolated: {
      const double k = (t == 2) ? 1.0 : 2.0;
      return std::max(0.0, (1.0 - k * tau) / (t + tau * (t - 1)));
    }
  }
  return 0.0;
}

template <class Coord>
std::vector<int> MoranTree<Coord>::path(std::size_t i) const {
  std::vector<int> out;
  while (nodes_.at(i).parent != kNoParent) {
    out.push_back(static_cast<int>(nodes_[i].child_index) + 1);
    i = nodes_[i].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

template <class Coord>
std::size_t MoranTree<Coord>::ancestor(std::size_t i, int level) const {
  if (level > nodes_.at(i).level) throw DomainError("ancestor: level below the node");
  while (nodes_[i].level > level) i = nodes_[i].parent;
  return i;
}

template <class Coord>
MoranTree<Coord> build_tree_as(const Environment& env, double tau, PlacementPolicy policy,
                               int depth, std::size_t leaf_cap) {
  if (depth < 0) throw DomainError("build_tree: negative depth");
  if (static_cast<std::size_t>(depth) > env.length()) {
    throw DomainError("build_tree: environment shorter than the requested depth");
  }
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("build_tree: tau must lie in (0,1)");

  double leaves = 1.0;
  for (int n = 1; n <= depth; ++n) {
    const LevelDraw& d = env.level(static_cast<std::size_t>(n));
    const double bound = feasible_ratio_bound(d.t, tau);
    if (d.r > bound) {
      throw PlacementError("build_tree: level " + std::to_string(n) + " ratio " +
                           detail::fmt_num(d.r) + " exceeds the separation bound " +
                           detail::fmt_num(bound));
    }
    leaves *= d.t;
    if (leaves > static_cast<double>(leaf_cap)) {
      throw Error("build_tree: leaf count exceeds cap " + std::to_string(leaf_cap) +
                  "; use the sequence-level estimators for deep analysis");
    }
  }

  MoranTree<Coord> tree;
  using Node = typename MoranTree<Coord>::Node;
  tree.tau_ = tau;
  tree.gap_constant_ = gap_constant(tau);
  tree.policy_ = policy;
  tree.draws_.assign(env.draws().begin(), env.draws().begin() + depth);
  tree.width_.push_back(Coord(1));
  tree.log_width_.push_back(0.0);
  tree.nodes_.reserve(static_cast<std::size_t>(2.0 * leaves) + 1);

  Node root;
  root.right = Coord(1);
  root.measure = Coord(1);
  tree.nodes_.push_back(root);
  tree.level_begin_ = {0, 1};

  const Coord tau_c = from_double<Coord>(tau);
  for (int n = 1; n <= depth; ++n) {
    const LevelDraw& d = env.level(static_cast<std::size_t>(n));
    const double log_w = tree.log_width_.back() - d.z();
    Coord child_w;
    if constexpr (std::is_same_v<Coord, double>) {
      child_w = std::exp(log_w);
    } else {
      child_w = tree.width_.back() * exact_rational(d.r);
    }
    const Coord parent_w = tree.width_.back();
    const auto offsets = child_offsets<Coord>(policy, d, parent_w, child_w, tau_c);
    const auto weights = exact_weights<Coord>(d);
    std::vector<double> log_p(d.p.size());
    for (std::size_t i = 0; i < d.p.size(); ++i) log_p[i] = std::log(d.p[i]);

    const std::size_t begin = tree.level_begin_[static_cast<std::size_t>(n - 1)];
    const std::size_t end = tree.level_begin_[static_cast<std::size_t>(n)];
    for (std::size_t pi = begin; pi < end; ++pi) {
      tree.nodes_[pi].first_child = static_cast<std::uint32_t>(tree.nodes_.size());
      tree.nodes_[pi].child_count = static_cast<std::uint32_t>(d.t);
      for (int c = 0; c < d.t; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        const Node& parent = tree.nodes_[pi];  // capacity reserved above, no reallocation
        Node child;
        child.level = n;
        child.left = parent.left + offsets[ci];
        child.right = child.left + child_w;
        child.log_measure = parent.log_measure + log_p[ci];
        if constexpr (std::is_same_v<Coord, double>) {
          child.measure = std::exp(child.log_measure);
        } else {
          child.measure = parent.measure * weights[ci];
        }
        child.parent = static_cast<std::uint32_t>(pi);
        child.child_index = static_cast<std::uint32_t>(c);
        tree.nodes_.push_back(std::move(child));
      }
    }
    tree.level_begin_.push_back(tree.nodes_.size());
    tree.width_.push_back(child_w);
    tree.log_width_.push_back(log_w);
  }
  return tree;
}

template <class Coord>
std::size_t locate(const MoranTree<Coord>& tree, const Coord& x, int level) {
  if (level < 0 || level > tree.depth()) throw DomainError("locate: level outside the tree");
  std::size_t cur = 0;
  if (x < tree.node(0).left || x > tree.right(tree.node(0))) {
    throw GapError("locate: point outside [0,1]", -1);
  }
  for (int l = 1; l <= level; ++l) {
    const auto& parent = tree.node(cur);
    bool found = false;
    for (std::uint32_t k = 0; k < parent.child_count; ++k) {
      const std::size_t ci = parent.first_child + k;
      const auto& child = tree.node(ci);
      if (child.left <= x && x <= tree.right(child)) {
        cur = ci;
        found = true;
        break;
      }
    }
    if (!found) {
      throw GapError("locate: point lies in a gap at level " + std::to_string(l) +
                         " (covered through level " + std::to_string(l - 1) + ")",
                     l - 1);
    }
  }
  return cur;
}

template <class Coord>
BallBounds ball_measure_bounds(const MoranTree<Coord>& tree, const Coord& x, const Coord& radius) {
  if (!(radius > Coord(0))) throw DomainError("ball_measure_bounds: radius must be positive");
  locate(tree, x, tree.depth());  // x must lie in the leaf cover
  const Coord lo = x - radius;
  const Coord hi = x + radius;
  std::vector<double> lower_terms, upper_terms;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const auto& n = tree.node(i);
    if (disjoint(tree, n, lo, hi)) continue;
    if (inside(tree, n, lo, hi)) {
      lower_terms.push_back(n.log_measure);
      upper_terms.push_back(n.log_measure);
      continue;
    }
    if (n.child_count == 0) {
      upper_terms.push_back(n.log_measure);
      continue;
    }
    for (std::uint32_t k = 0; k < n.child_count; ++k) stack.push_back(n.first_child + k);
  }
  return {log_sum_exp(lower_terms), log_sum_exp(upper_terms), radius < tree.width(tree.depth())};
}

template <class Coord>
bool ball_isolated_within(const MoranTree<Coord>& tree, const Coord& x, const Coord& radius,
                          int level) {
  const std::size_t anchor = locate(tree, x, level);
  const Coord lo = x - radius;
  const Coord hi = x + radius;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const auto& n = tree.node(i);
    if (disjoint(tree, n, lo, hi)) continue;
    if (n.level >= level && tree.ancestor(i, level) == anchor) continue;  // whole subtree fine
    if (n.child_count == 0) return false;  // a leaf outside I_level(x) meets the ball
    for (std::uint32_t k = 0; k < n.child_count; ++k) stack.push_back(n.first_child + k);
  }
  return true;
}

template <class Coord>
SandwichResult check_sandwich(const MoranTree<Coord>& tree, const Coord& x, const Coord& radius) {
  if (!(radius < tree.width(0))) {
    throw QueryError("sandwich query: R >= diam(I_0), no admissible N");
  }
  int level = 0;
  while (level + 1 <= tree.depth() && radius < tree.width(level + 1)) ++level;
  if (level + 1 > tree.depth()) {
    throw QueryError("sandwich query: R below the leaf width, N + 1 exceeds the tree depth");
  }
  const int outer = level - tree.gap_constant();
  if (outer < 0) {
    throw QueryError("sandwich query: N - L < 0 (N=" + std::to_string(level) +
                     ", L=" + std::to_string(tree.gap_constant()) + ")");
  }
  SandwichResult res;
  res.level = level;
  const auto& inner = tree.node(locate(tree, x, level + 1));
  res.inner_contained = inside(tree, inner, Coord(x - radius), Coord(x + radius));
  res.outer_contained = ball_isolated_within(tree, x, radius, outer);
  return res;
}

template <class Coord>
SandwichReport verify_sandwich(const MoranTree<Coord>& tree,
                               std::span<const SandwichQuery<Coord>> queries) {
  SandwichReport report;
  report.results.reserve(queries.size());
  for (const auto& q : queries) {
    report.results.push_back(check_sandwich(tree, q.x, q.radius));
    if (!report.results.back().pass()) ++report.failures;
  }
  return report;
}

template <class Coord>
std::vector<SandwichQuery<Coord>> random_sandwich_queries(const MoranTree<Coord>& tree,
                                                          std::size_t count, std::uint64_t seed) {
  const int lo_level = tree.gap_constant();
  if (tree.depth() <= lo_level) {
    throw QueryError("random queries need depth > L = " + std::to_string(lo_level));
  }
  CounterRng rng(seed, 0);
  const std::size_t first_leaf = tree.level_begin(tree.depth());
  const std::size_t leaves = tree.leaf_count();
  const auto span = static_cast<std::uint64_t>(tree.depth() - lo_level);
  std::vector<SandwichQuery<Coord>> out;
  out.reserve(count);
  for (std::size_t q = 0; q < count; ++q) {
    const auto& leaf = tree.node(first_leaf + static_cast<std::size_t>(rng() % leaves));
    const Coord x = leaf.left + from_double<Coord>(rng.uniform_open()) * tree.width(tree.depth());
    const int n = lo_level + static_cast<int>(rng() % span);
    const Coord& hi = tree.width(n);
    const Coord& lo = tree.width(n + 1);
    // uniform_open() < 1, so R < hi
    const Coord radius = lo + from_double<Coord>(rng.uniform_open()) * (hi - lo);
    out.push_back({x, radius});
  }
  return out;
}

template <class Coord>
std::vector<SeparationViolation> separation_violations(const MoranTree<Coord>& tree,
                                                       double tau_check) {
  std::vector<SeparationViolation> out;
  const Coord tau_c = from_double<Coord>(tau_check);
  const bool isolate = tree.policy() == PlacementPolicy::ExtremeChildIsolated;
  for (int n = 1; n <= tree.depth(); ++n) {
    const LevelDraw& d = tree.draws()[static_cast<std::size_t>(n - 1)];
    const auto [hi_idx, lo_idx] = extreme_children(d);
    const Coord& w = tree.width(n);
    const Coord sibling_need = tau_c * w;
    const Coord isolation_need = tau_c * tree.width(n - 1);
    for (std::size_t pi = tree.level_begin(n - 1); pi < tree.level_end(n - 1); ++pi) {
      const auto kids = tree.children(tree.node(pi));
      std::vector<std::size_t> order(kids.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return kids[a].left < kids[b].left; });
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const auto& a = kids[order[k]];
        const auto& b = kids[order[k + 1]];
        const Coord gap = b.left - a.right;
        if (!at_least(gap, sibling_need)) {
          out.push_back({n, pi, to_double(gap), to_double(sibling_need), "tau-separation"});
        }
        const bool touches_extreme = a.child_index == hi_idx || a.child_index == lo_idx ||
                                     b.child_index == hi_idx || b.child_index == lo_idx;
        if (isolate && touches_extreme && !at_least(gap, isolation_need)) {
          out.push_back({n, pi, to_double(gap), to_double(isolation_need), "extreme-isolation"});
        }
      }
    }
  }
  return out;
}

template <class Coord>
std::vector<std::string> structural_violations(const MoranTree<Coord>& tree) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& n = tree.node(i);
    if (n.child_count == 0) continue;
    const auto kids = tree.children(n);
    std::vector<double> rel;
    Coord exact_sum = Coord(0);
    for (const auto& c : kids) {
      bool outside = false;
      if constexpr (std::is_same_v<Coord, Rational>) {
        outside = c.left < n.left || tree.right(c) > tree.right(n);
      } else {
        outside = c.left < n.left - kCoordTol || tree.right(c) > tree.right(n) + kCoordTol;
      }
      if (outside) {
        out.push_back("node " + std::to_string(i) + ": child outside its parent");
      }
      rel.push_back(c.log_measure - n.log_measure);
      exact_sum += c.measure;
    }
    if constexpr (std::is_same_v<Coord, Rational>) {
      if (exact_sum != n.measure) out.push_back("node " + std::to_string(i) + ": measure not additive");
    } else {
      const double total = std::exp(log_sum_exp(rel));
      if (std::abs(total - 1.0) > kMeasureTol) {
        out.push_back("node " + std::to_string(i) + ": child measures sum to " +
                      detail::fmt_num(total, 17) + " of the parent");
      }
    }
  }
  return out;
}

template <class Coord>
void write_tree(std::ostream& out, const MoranTree<Coord>& tree) {
  out << "# phidim-tree v1 policy=" << to_string(tree.policy())
      << " tau=" << detail::fmt_num(tree.tau(), 17) << " depth=" << tree.depth() << '\n';
  out << "# level path left right log_measure\n";
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const auto& n = tree.node(i);
    std::string path;
    for (int step : tree.path(i)) {
      if (!path.empty()) path += '.';
      path += std::to_string(step);
    }
    out << n.level << ' ' << (path.empty() ? "-" : path) << ' ' << coord_text(n.left) << ' '
        << coord_text(Coord(tree.right(n))) << ' ' << detail::fmt_num(n.log_measure, 17) << '\n';
    for (std::uint32_t k = n.child_count; k > 0; --k) stack.push_back(n.first_child + k - 1);
  }
}

#define PHIDIM_INSTANTIATE_TREE(C)                                                               \
  template class MoranTree<C>;                                                                   \
  template MoranTree<C> build_tree_as<C>(const Environment&, double, PlacementPolicy, int,       \
                                         std::size_t);                                           \
  template std::size_t locate<C>(const MoranTree<C>&, const C&, int);                            \
  template BallBounds ball_measure_bounds<C>(const MoranTree<C>&, const C&, const C&);           \
  template bool ball_isolated_within<C>(const MoranTree<C>&, const C&, const C&, int);           \
  template SandwichResult check_sandwich<C>(const MoranTree<C>&, const C&, const C&);            \
  template SandwichReport verify_sandwich<C>(const MoranTree<C>&,                                \
                                             std::span<const SandwichQuery<C>>);                 \
  template std::vector<SandwichQuery<C>> random_sandwich_queries<C>(const MoranTree<C>&,          \
                                                                    std::size_t, std::uint64_t); \
  template std::vector<SeparationViolation> separation_violations<C>(const MoranTree<C>&, double); \
  template std::vector<std::string> structural_violations<C>(const MoranTree<C>&);               \
  template void write_tree<C>(std::ostream&, const MoranTree<C>&);

PHIDIM_INSTANTIATE_TREE(double)
PHIDIM_INSTANTIATE_TREE(Rational)

#undef PHIDIM_INSTANTIATE_TREE

}  // namespace phidim
