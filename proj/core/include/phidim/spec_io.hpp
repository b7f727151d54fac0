#pragma once

// JSON form of DistributionSpec. Variant and rule names match the C++ types:
//
//   {"tau": 0.333, "name": "...", "variant": "PointMass",
//    "draw": {"t": 2, "r": 0.333, "p": [0.5, 0.5]}}
//
//   {"tau": 0.333, "variant": "ProductForm",
//    "t_dist": [{"t": 2, "weight": 1.0}],
//    "r_dist": {"kind": "PointMass", "r": 0.333}          | {"kind": "UniformInterval", "upper": 0.4},
//    "p_dist": {"kind": "PointMass", "p": [0.5, 0.5]}     | {"kind": "UniformSimplex"}
//            | {"kind": "DiscreteSet", "atoms": [{"weight": 0.5, "p": [...]}, ...]}}
//
//   {"tau": 0.333, "variant": "DiscreteMixture",
//    "atoms": [{"weight": 0.5, "t": 2, "r": 0.1, "p": [0.2, 0.8]}, ...]}
//   {"tau": 0.333, "variant": "DiscreteMixture", "inverse_square": {"t_max": 64}}
//
// "upper" may be omitted (defaults to the separation bound). Comments are
// accepted on input.

#include <string>
#include <string_view>

#include "phidim/distribution.hpp"

namespace phidim {

/// Canonical serialization (keys sorted, compact when indent < 0).
std::string spec_to_json(const DistributionSpec& spec, int indent = 2);

/// Parses a spec; throws ConfigError on malformed input and InvalidSpec when
/// the parsed values break an invariant.
DistributionSpec spec_from_json(std::string_view text);

}  // namespace phidim
