#pragma once

// Closed-form almost-sure Phi-dimension targets for a level law.

#include <optional>
#include <string>
#include <vector>

#include "phidim/distribution.hpp"

namespace phidim {

enum class TriState { Yes, No, Unknown };
std::string to_string(TriState s);

/// Essential sup of log m / log r and essential inf of log M / log r.
/// nullopt means no support rule applied ("undetermined"); alpha may be +inf.
struct Extremes {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::vector<std::string> rules;  ///< which support rule produced each value
};

/// Whether E(exp(lambda W)) is finite for small |lambda|, W = X, Y, Z.
struct MgfFlags {
  TriState x = TriState::Unknown;
  TriState y = TriState::Unknown;
  TriState z = TriState::Unknown;
};

struct TheoryReport {
  std::optional<double> ex;
  std::optional<double> ey;
  std::optional<double> ez;
  /// E(X)/E(Z): almost-sure lower Phi-dimension for large Phi.
  std::optional<double> d_lower;
  /// E(Y)/E(Z): almost-sure upper Phi-dimension for large Phi.
  std::optional<double> d_upper;
  std::optional<double> alpha;
  std::optional<double> beta;
  MgfFlags mgf;
  std::optional<int> truncated_at;
  std::vector<std::string> notes;
};

/// Exact E(X), E(Y), E(Z) and the derived ratios, alpha, beta and MGF flags.
TheoryReport moments(const DistributionSpec& spec);

Extremes extremes(const DistributionSpec& spec);

MgfFlags mgf_flags(const DistributionSpec& spec);

}  // namespace phidim
