#include "phidim/spec_io.hpp"

#include <json.hpp>

#include "phidim/errors.hpp"

namespace phidim {

namespace {

using nlohmann::json;

json draw_to_json(const LevelDraw& d) { return json{{"t", d.t}, {"r", d.r}, {"p", d.p}}; }

template <class T>
T get_field(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + ": field '" + key + "': " + e.what());
  }
}

LevelDraw draw_from_json(const json& j, const char* where) {
  LevelDraw d;
  d.t = get_field<int>(j, "t", where);
  d.r = get_field<double>(j, "r", where);
  d.p = get_field<std::vector<double>>(j, "p", where);
  return d;
}

json ratio_to_json(const RatioRule& rule) {
  if (const auto* fr = std::get_if<FixedRatio>(&rule)) {
    return json{{"kind", "PointMass"}, {"r", fr->r}};
  }
  json j{{"kind", "UniformInterval"}};
  if (const auto& ur = std::get<UniformRatio>(rule); ur.upper) j["upper"] = *ur.upper;
  return j;
}

json probs_to_json(const ProbabilityRule& rule) {
  if (const auto* fp = std::get_if<FixedProbabilities>(&rule)) {
    return json{{"kind", "PointMass"}, {"p", fp->p}};
  }
  if (std::holds_alternative<UniformSimplex>(rule)) return json{{"kind", "UniformSimplex"}};
  json atoms = json::array();
  for (const auto& a : std::get<DiscreteProbabilities>(rule).atoms) {
    atoms.push_back(json{{"weight", a.weight}, {"p", a.p}});
  }
  return json{{"kind", "DiscreteSet"}, {"atoms", atoms}};
}

RatioRule ratio_from_json(const json& j) {
  const auto kind = get_field<std::string>(j, "kind", "r_dist");
  if (kind == "PointMass") return FixedRatio{get_field<double>(j, "r", "r_dist")};
  if (kind == "UniformInterval") {
    UniformRatio ur;
    if (j.contains("upper")) ur.upper = get_field<double>(j, "upper", "r_dist");
    return ur;
  }
  throw ConfigError("r_dist: unknown kind '" + kind + "'");
}

ProbabilityRule probs_from_json(const json& j) {
  const auto kind = get_field<std::string>(j, "kind", "p_dist");
  if (kind == "PointMass") return FixedProbabilities{get_field<std::vector<double>>(j, "p", "p_dist")};
  if (kind == "UniformSimplex") return UniformSimplex{};
  if (kind == "DiscreteSet") {
    DiscreteProbabilities ds;
    const auto atoms = get_field<json>(j, "atoms", "p_dist");
    if (!atoms.is_array()) throw ConfigError("p_dist: 'atoms' must be an array");
    for (const auto& a : atoms) {
      ds.atoms.push_back({get_field<double>(a, "weight", "p_dist atom"),
                          get_field<std::vector<double>>(a, "p", "p_dist atom")});
    }
    return ds;
  }
  throw ConfigError("p_dist: unknown kind '" + kind + "'");
}

}  // namespace

std::string spec_to_json(const DistributionSpec& spec, int indent) {
  json j;
  j["tau"] = spec.tau();
  if (!spec.name().empty()) j["name"] = spec.name();
  j["variant"] = spec.variant_name();
  const auto& v = spec.variant();
  if (const auto* pm = std::get_if<PointMass>(&v)) {
    j["draw"] = draw_to_json(pm->draw);
  } else if (const auto* pf = std::get_if<ProductForm>(&v)) {
    json td = json::array();
    for (const auto& [t, w] : pf->t_dist) td.push_back(json{{"t", t}, {"weight", w}});
    j["t_dist"] = td;
    j["r_dist"] = ratio_to_json(pf->r_rule);
    j["p_dist"] = probs_to_json(pf->p_rule);
  } else {
    const auto& mix = std::get<DiscreteMixture>(v);
    json atoms = json::array();
    for (const auto& a : mix.atoms) {
      json aj = draw_to_json(a.draw);
      aj["weight"] = a.weight;
      atoms.push_back(aj);
    }
    j["atoms"] = atoms;
    if (mix.truncated_at) j["truncated_at"] = *mix.truncated_at;
  }
  return j.dump(indent);
}

DistributionSpec spec_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("spec: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("spec: expected a JSON object");
  const double tau = get_field<double>(j, "tau", "spec");
  const std::string name = j.value("name", std::string{});
  const auto variant = get_field<std::string>(j, "variant", "spec");

  if (variant == "PointMass") {
    return DistributionSpec(PointMass{draw_from_json(get_field<json>(j, "draw", "spec"), "draw")},
                            tau, name);
  }
  if (variant == "ProductForm") {
    ProductForm pf;
    const auto td = get_field<json>(j, "t_dist", "spec");
    if (!td.is_array()) throw ConfigError("spec: 't_dist' must be an array");
    for (const auto& e : td) {
      pf.t_dist.push_back({get_field<int>(e, "t", "t_dist"), get_field<double>(e, "weight", "t_dist")});
    }
    pf.r_rule = ratio_from_json(get_field<json>(j, "r_dist", "spec"));
    pf.p_rule = probs_from_json(get_field<json>(j, "p_dist", "spec"));
    return DistributionSpec(std::move(pf), tau, name);
  }
  if (variant == "DiscreteMixture") {
    if (j.contains("inverse_square")) {
      return inverse_square_mixture(get_field<int>(j.at("inverse_square"), "t_max", "inverse_square"),
                                    tau, name);
    }
    DiscreteMixture mix;
    const auto atoms = get_field<json>(j, "atoms", "spec");
    if (!atoms.is_array()) throw ConfigError("spec: 'atoms' must be an array");
    for (const auto& a : atoms) {
      mix.atoms.push_back({get_field<double>(a, "weight", "atom"), draw_from_json(a, "atom")});
    }
    if (j.contains("truncated_at")) mix.truncated_at = get_field<int>(j, "truncated_at", "spec");
    return DistributionSpec(std::move(mix), tau, name);
  }
  throw ConfigError("spec: unknown variant '" + variant + "'");
}

}  // namespace phidim
