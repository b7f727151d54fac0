#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "phidim/errors.hpp"
#include "phidim/fixtures.hpp"
#include "phidim/spec_io.hpp"

namespace phidim::cli {

namespace {

using nlohmann::json;

template <class T>
T field(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

const json& object_at(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_object()) throw ConfigError(where + "." + key + " must be an object");
  return v;
}

DimensionFunction phi_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("phi must be an object");
  const auto kind = field<std::string>(j, "kind", "", "phi");
  DimensionFunction f = [&] {
    if (kind == "Constant") return DimensionFunction::constant(field<double>(j, "delta", 0.0, "phi"));
    if (kind == "ThetaSpectrum") {
      return DimensionFunction::theta_spectrum(field<double>(j, "theta", 0.0, "phi"));
    }
    if (kind == "LogLogMultiple") return DimensionFunction::loglog_multiple(field<double>(j, "c", 0.0, "phi"));
    if (kind == "Tabulated") {
      return DimensionFunction::tabulated(
          field<std::vector<std::pair<double, double>>>(j, "grid", {}, "phi"));
    }
    throw ConfigError("phi.kind must be Constant, ThetaSpectrum, LogLogMultiple or Tabulated");
  }();
  if (j.contains("regime")) f = f.with_regime(regime_from_string(field<std::string>(j, "regime", "", "phi")));
  return f;
}

DistributionSpec spec_of(const json& root) {
  if (root.contains("fixture")) {
    return fixtures::by_name(field<std::string>(root, "fixture", "", "config"));
  }
  if (!root.contains("spec")) throw ConfigError("config needs either 'spec' or 'fixture'");
  return spec_from_json(root.at("spec").dump());
}

}  // namespace

DimensionFunction phi_from_json_text(std::string_view text) {
  try {
    return phi_from_json(json::parse(text, nullptr, true, true));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("phi: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("phi: ") + e.what());
  }
}

RunConfig parse_run_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg(spec_of(root));
  cfg.name = field<std::string>(root, "name", cfg.spec.name().empty() ? "run" : cfg.spec.name(), "config");
  cfg.replicates = field<std::size_t>(root, "replicates", cfg.replicates, "config");
  cfg.seed = field<std::uint64_t>(root, "seed", cfg.seed, "config");
  cfg.sample_depth = field<std::size_t>(root, "sample_depth", cfg.sample_depth, "config");

  try {
    if (root.contains("large")) {
      const json& j = object_at(root, "large", "config");
      LargeSection s;
      if (j.contains("phi")) s.phi = phi_from_json(j.at("phi"));
      const auto w = field<std::vector<std::size_t>>(j, "window", {s.window.n_min, s.window.n_max}, "large");
      if (w.size() != 2) throw ConfigError("large.window must be [N_min, N_max]");
      s.window = {w[0], w[1]};
      s.k_cap = field<std::size_t>(j, "k_cap", s.k_cap, "large");
      s.env_length = field<std::size_t>(j, "env_length", s.env_length, "large");
      cfg.large = s;
    }
    if (root.contains("small")) {
      const json& j = object_at(root, "small", "config");
      cfg.small = SmallSection{field<std::size_t>(j, "prefix", SmallSection{}.prefix, "small")};
    }
    if (root.contains("tree")) {
      const json& j = object_at(root, "tree", "config");
      cfg.tree.depth = field<int>(j, "depth", cfg.tree.depth, "tree");
      cfg.tree.policy = policy_from_string(field<std::string>(j, "policy", to_string(cfg.tree.policy), "tree"));
      cfg.tree.exact = field<bool>(j, "exact", cfg.tree.exact, "tree");
    }
    if (root.contains("verify")) {
      const json& j = object_at(root, "verify", "config");
      auto& v = cfg.verify;
      v.environments = field<std::size_t>(j, "environments", v.environments, "verify");
      v.queries = field<std::size_t>(j, "queries", v.queries, "verify");
      v.depth = field<int>(j, "depth", v.depth, "verify");
      v.leaf_budget = field<std::size_t>(j, "leaf_budget", v.leaf_budget, "verify");
      if (j.contains("tau_check")) v.tau_check = field<double>(j, "tau_check", 0.0, "verify");
      v.identities_max = field<int>(j, "identities_max", v.identities_max, "verify");
      v.cdf_T = field<std::vector<int>>(j, "cdf_T", v.cdf_T, "verify");
      v.cdf_samples = field<std::size_t>(j, "cdf_samples", v.cdf_samples, "verify");
    }
    if (root.contains("mc")) {
      const json& j = object_at(root, "mc", "config");
      cfg.mc.T = field<std::vector<int>>(j, "T", cfg.mc.T, "mc");
      cfg.mc.samples = field<std::size_t>(j, "samples", cfg.mc.samples, "mc");
      cfg.mc.sigmas = field<double>(j, "sigmas", cfg.mc.sigmas, "mc");
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace phidim::cli
