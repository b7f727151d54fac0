#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "phidim/environment.hpp"
#include "phidim/errors.hpp"
#include "phidim/experiments.hpp"
#include "phidim/identities.hpp"
#include "phidim/moran.hpp"
#include "phidim/rng.hpp"
#include "phidim/simplex.hpp"
#include "phidim/spec_io.hpp"
#include "phidim/theory.hpp"
#include "run_config.hpp"

namespace phidim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Inputs named on the command line but not found.
class MissingInputs : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  unsigned workers = 0;
  int verbosity = 1;
  // subcommand extras
  std::optional<std::size_t> depth;
  std::optional<std::string> policy;
  bool exact = false;
  std::optional<double> tau_check;
};

std::string num(double v, int digits = 12) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "unavailable"; }

json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return num(*v);
  return *v;
}

std::string value_flag(const std::optional<double>& v) {
  if (!v) return "undetermined";
  if (std::isinf(*v)) return "infinite";
  if (*v == 0.0) return "zero";
  return "finite";
}

RunConfig load(const Options& o) {
  RunConfig cfg = load_run_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

/// Opens <out_dir>/<file> for writing, creating the directory.
std::ofstream open_output(const Options& o, const std::string& file) {
  fs::create_directories(o.out_dir);
  const auto path = fs::path(o.out_dir) / file;
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  return f;
}

void note(const Options& o, std::ostream& err, const std::string& msg) {
  if (o.verbosity > 0) err << msg << '\n';
}

// ---------------------------------------------------------------- theory

int cmd_theory(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load(o);
  const TheoryReport th = moments(cfg.spec);

  std::ostringstream text;
  auto row = [&](const std::string& k, const std::string& v) {
    text << std::left << std::setw(14) << k << v << '\n';
  };
  row("fixture", cfg.name);
  row("spec_id", cfg.spec.id());
  row("E(X)", opt_num(th.ex));
  row("E(Y)", opt_num(th.ey));
  row("E(Z)", opt_num(th.ez));
  row("d_lower", opt_num(th.d_lower));
  row("d_upper", opt_num(th.d_upper));
  row("alpha", opt_num(th.alpha) + "  [" + value_flag(th.alpha) + "]");
  row("beta", opt_num(th.beta) + "  [" + value_flag(th.beta) + "]");
  row("mgf", "X=" + to_string(th.mgf.x) + " Y=" + to_string(th.mgf.y) + " Z=" + to_string(th.mgf.z));
  row("truncated_at", th.truncated_at ? std::to_string(*th.truncated_at) : "-");
  for (const auto& n : th.notes) row("note", n);
  for (const auto& s : cfg.spec.separation_issues()) row("separation", s);
  out << text.str();

  if (!o.out_dir.empty()) {
    json j{{"format", "phidim-theory v1"},
           {"fixture", cfg.name},
           {"spec_id", cfg.spec.id()},
           {"EX", opt_json(th.ex)},
           {"EY", opt_json(th.ey)},
           {"EZ", opt_json(th.ez)},
           {"d_lower", opt_json(th.d_lower)},
           {"d_upper", opt_json(th.d_upper)},
           {"alpha", opt_json(th.alpha)},
           {"beta", opt_json(th.beta)},
           {"flags", {{"alpha", value_flag(th.alpha)}, {"beta", value_flag(th.beta)}}},
           {"mgf", {{"X", to_string(th.mgf.x)}, {"Y", to_string(th.mgf.y)}, {"Z", to_string(th.mgf.z)}}},
           {"truncated_at", th.truncated_at ? json(*th.truncated_at) : json(nullptr)}};
    open_output(o, cfg.name + ".theory.json") << j.dump(2) << '\n';
    note(o, err, "wrote " + (fs::path(o.out_dir) / (cfg.name + ".theory.json")).string());
  }
  return kOk;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load(o);
  const std::size_t depth = o.depth.value_or(cfg.sample_depth);
  const auto env = sample_environment(cfg.spec, cfg.seed, depth);
  std::ostringstream csv;
  csv << "# phidim-environment v1 spec_id=" << env.spec_id() << " seed=" << env.seed() << '\n';
  csv << "level,t,r,p\n";
  for (std::size_t n = 1; n <= env.length(); ++n) {
    const auto& d = env.level(n);
    csv << n << ',' << d.t << ',' << num(d.r, 17) << ',';
    for (std::size_t i = 0; i < d.p.size(); ++i) csv << (i ? ";" : "") << num(d.p[i], 17);
    csv << '\n';
  }
  if (o.out_dir.empty()) {
    out << csv.str();
  } else {
    open_output(o, cfg.name + ".env.csv") << csv.str();
    out << "levels " << env.length() << " seed " << env.seed() << '\n';
    note(o, err, "wrote " + (fs::path(o.out_dir) / (cfg.name + ".env.csv")).string());
  }
  return kOk;
}

// ---------------------------------------------------------------- build

template <class Coord>
int emit_tree(const Options& o, const RunConfig& cfg, const MoranTree<Coord>& tree,
              std::ostream& out, std::ostream& err) {
  const double tau_check = o.tau_check.value_or(cfg.spec.tau());
  const auto sep = separation_violations(tree, tau_check);
  const auto structural = structural_violations(tree);
  if (o.out_dir.empty()) {
    write_tree(out, tree);
  } else {
    auto f = open_output(o, cfg.name + ".tree.txt");
    write_tree(f, tree);
    out << "depth " << tree.depth() << " nodes " << tree.nodes().size() << " leaves "
        << tree.leaf_count() << " L " << tree.gap_constant() << '\n';
  }
  for (const auto& v : sep) {
    err << "separation violation (" << v.rule << ") level " << v.level << " parent " << v.parent
        << ": gap " << num(v.gap) << " < " << num(v.required) << '\n';
  }
  for (const auto& s : structural) err << "structural violation: " << s << '\n';
  return sep.empty() && structural.empty() ? kOk : kCheckFailed;
}

int cmd_build(const Options& o, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load(o);
  if (o.depth) cfg.tree.depth = static_cast<int>(*o.depth);
  if (o.policy) cfg.tree.policy = policy_from_string(*o.policy);
  if (o.exact) cfg.tree.exact = true;
  const auto env = sample_environment(cfg.spec, cfg.seed, std::max(1, cfg.tree.depth));
  if (cfg.tree.exact) {
    return emit_tree(o, cfg, build_exact_tree(env, cfg.spec.tau(), cfg.tree.policy, cfg.tree.depth), out, err);
  }
  return emit_tree(o, cfg, build_tree(env, cfg.spec.tau(), cfg.tree.policy, cfg.tree.depth), out, err);
}

// ---------------------------------------------------------------- estimate

ExperimentConfig experiment(const RunConfig& cfg, const Options& o, Regime regime) {
  ExperimentConfig ec(cfg.spec);
  ec.regime = regime;
  ec.replicates = cfg.replicates;
  ec.base_seed = cfg.seed;
  ec.workers = o.workers;
  if (regime == Regime::Large) {
    ec.phi = cfg.large->phi;
    ec.window = cfg.large->window;
    ec.k_cap = cfg.large->k_cap;
    ec.env_length = cfg.large->env_length;
  } else {
    ec.prefix = cfg.small->prefix;
    ec.env_length = cfg.small->prefix;
  }
  return ec;
}

void print_summary_header(std::ostream& out) {
  out << std::left << std::setw(8) << "regime" << std::setw(7) << "stat" << std::setw(15) << "target"
      << std::setw(15) << "median" << std::setw(15) << "delta" << std::setw(15) << "mean"
      << std::setw(15) << "sd" << std::setw(15) << "q05" << "q95\n";
}

void print_summary(std::ostream& out, const SummaryTable& t) {
  auto line = [&](const char* stat, const ColumnSummary& s) {
    out << std::left << std::setw(8) << to_string(t.regime) << std::setw(7) << stat << std::setw(15)
        << (s.target ? num(*s.target) : "-") << std::setw(15) << num(s.q50) << std::setw(15)
        << (s.delta ? num(*s.delta) : "-") << std::setw(15) << num(s.mean) << std::setw(15)
        << num(s.sd) << std::setw(15) << num(s.q05) << num(s.q95) << '\n';
  };
  line("upper", t.upper);
  line("lower", t.lower);
}

int cmd_estimate(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load(o);
  if (!cfg.large && !cfg.small) throw ConfigError("config has neither a 'large' nor a 'small' section");
  std::optional<SummaryTable> large, small;
  if (cfg.large) large = run_replicated(experiment(cfg, o, Regime::Large));
  if (cfg.small) small = run_replicated(experiment(cfg, o, Regime::Small));

  out << "fixture " << cfg.name << "  replicates " << cfg.replicates << "  seed " << cfg.seed << '\n';
  print_summary_header(out);
  for (const auto* t : {large ? &*large : nullptr, small ? &*small : nullptr}) {
    if (!t) continue;
    print_summary(out, *t);
    if (!o.out_dir.empty()) {
      const std::string stem = cfg.name + "." + (t->regime == Regime::Large ? "large" : "small");
      SummaryTable named = *t;
      named.fixture = cfg.name;
      auto csv = open_output(o, stem + ".csv");
      write_replicates_csv(csv, named);
      open_output(o, stem + ".summary.json") << summary_to_json(named);
      note(o, err, "wrote " + (fs::path(o.out_dir) / (stem + ".csv")).string());
    }
  }

  if (large && small) {
    std::size_t bad = 0;
    for (std::size_t r = 0; r < large->rows.size(); ++r) {
      const auto v = sanity_chain(small->rows[r].report, large->rows[r].report);
      if (!v.empty()) {
        ++bad;
        err << "sanity chain: replicate " << r << ": " << v.front().relation << " fails by "
            << num(v.front().margin) << '\n';
      }
    }
    out << "sanity chain: " << (bad == 0 ? "ok" : std::to_string(bad) + " replicates violate") << '\n';
    if (cfg.small->prefix < cfg.large->window.n_max + cfg.large->k_cap) {
      note(o, err, "note: small prefix shorter than N_max + k_cap; the chain is not guaranteed");
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- verify-lemmas

struct CheckLine {
  std::string name;
  bool pass;
  std::string detail;
};

/// Deepest depth <= max_depth whose leaf count fits the budget.
int fitting_depth(const Environment& env, int max_depth, std::size_t budget) {
  double leaves = 1.0;
  int d = 0;
  while (d < max_depth) {
    leaves *= env.level(static_cast<std::size_t>(d + 1)).t;
    if (leaves > static_cast<double>(budget)) break;
    ++d;
  }
  return d;
}

std::vector<CheckLine> sandwich_checks(const RunConfig& cfg, double tau_check) {
  const auto& v = cfg.verify;
  std::vector<CheckLine> lines;
  std::size_t queries = 0, failures = 0, envs_used = 0, sep_bad = 0, struct_bad = 0;
  std::string first_sep;
  for (std::size_t e = 0; e < v.environments; ++e) {
    const auto env = sample_environment(cfg.spec, derive_seed(cfg.seed, e), static_cast<std::size_t>(v.depth));
    const int depth = fitting_depth(env, v.depth, v.leaf_budget);
    const auto tree = build_exact_tree(env, cfg.spec.tau(), cfg.tree.policy, depth);
    const auto sep = separation_violations(tree, tau_check);
    sep_bad += sep.size();
    if (!sep.empty() && first_sep.empty()) {
      first_sep = "env " + std::to_string(e) + " level " + std::to_string(sep.front().level) + " gap " +
                  num(sep.front().gap) + " < " + num(sep.front().required);
    }
    struct_bad += structural_violations(tree).size();
    if (depth <= tree.gap_constant()) continue;
    ++envs_used;
    const std::size_t count = v.queries / v.environments + (e < v.queries % v.environments ? 1 : 0);
    const auto qs = random_sandwich_queries(tree, count, derive_seed(cfg.seed ^ 0x5a5dULL, e));
    const auto report = verify_sandwich<Rational>(tree, qs);
    queries += qs.size();
    failures += report.failures;
  }
  lines.push_back({"sandwich", envs_used > 0 && failures == 0,
                   std::to_string(queries) + " queries over " + std::to_string(envs_used) +
                       " environments, " + std::to_string(failures) + " failures"});
  lines.push_back({"separation", sep_bad == 0,
                   "tau_check " + num(tau_check) + ", " + std::to_string(sep_bad) + " violations" +
                       (first_sep.empty() ? "" : " (first: " + first_sep + ")")});
  lines.push_back({"structure", struct_bad == 0, std::to_string(struct_bad) + " violations"});
  return lines;
}

std::vector<CheckLine> identity_checks(int max_n) {
  std::size_t evaluated = 0, nonzero = 0;
  std::string first;
  auto record = [&](const Rational& residual, const std::string& what) {
    ++evaluated;
    if (residual != 0) {
      ++nonzero;
      if (first.empty()) first = what + " residual " + to_string(residual);
    }
  };
  const Rational lambdas[] = {Rational(1, 2), Rational(-1, 3), Rational(7, 4)};
  for (int n = 1; n <= max_n; ++n) {
    record(melzak_reciprocal_residual(n), "reciprocal n=" + std::to_string(n));
    record(melzak_reciprocal_square_residual(n), "reciprocal-square n=" + std::to_string(n));
    for (const auto& lam : lambdas) {
      record(melzak_shifted_residual(n, lam), "shifted n=" + std::to_string(n) + " lambda=" + to_string(lam));
    }
  }
  for (int T = 2; T <= max_n; ++T) {
    for (int j = 1; j < T; ++j) {
      record(euler_difference_residual(T, j), "euler T=" + std::to_string(T) + " j=" + std::to_string(j));
    }
    record(harmonic_alternating_residual(T), "harmonic T=" + std::to_string(T));
  }
  return {{"identities", nonzero == 0,
           std::to_string(evaluated) + " exact residuals, " + std::to_string(nonzero) + " nonzero" +
               (first.empty() ? "" : " (first: " + first + ")")}};
}

std::vector<CheckLine> cdf_checks(const RunConfig& cfg) {
  std::vector<CheckLine> lines;
  for (int T : cfg.verify.cdf_T) {
    const auto c = cdf_band_check(T, cfg.verify.cdf_samples, derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(T)));
    lines.push_back({"cdf-band T=" + std::to_string(T), c.pass(),
                     "KS(min) " + num(c.ks_min, 6) + ", KS(max) " + num(c.ks_max, 6) + ", band " +
                         num(c.epsilon, 6)});
  }
  return lines;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load(o);
  const double tau_check = o.tau_check.value_or(cfg.verify.tau_check.value_or(cfg.spec.tau()));
  std::vector<CheckLine> lines = sandwich_checks(cfg, tau_check);
  for (auto& l : identity_checks(cfg.verify.identities_max)) lines.push_back(std::move(l));
  for (auto& l : cdf_checks(cfg)) lines.push_back(std::move(l));

  const CheckLine* first_fail = nullptr;
  for (const auto& l : lines) {
    out << (l.pass ? "PASS " : "FAIL ") << std::left << std::setw(16) << l.name << l.detail << '\n';
    if (!l.pass && !first_fail) first_fail = &l;
  }
  if (first_fail) {
    err << "first failing check: " << first_fail->name << ": " << first_fail->detail << '\n';
    return kCheckFailed;
  }
  return kOk;
}

// ---------------------------------------------------------------- mc-check

int cmd_mc(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load(o);
  bool ok = true;
  out << std::left << std::setw(4) << "T" << std::setw(14) << "EX" << std::setw(14) << "EX_hat"
      << std::setw(10) << "z_X" << std::setw(14) << "EY" << std::setw(14) << "EY_hat" << std::setw(10)
      << "z_Y" << "verdict\n";
  for (int T : cfg.mc.T) {
    const auto m = mc_moment_oracle(T, cfg.mc.samples, derive_seed(cfg.seed, static_cast<std::uint64_t>(T)));
    const double ex = closed_form_ex(T), ey = closed_form_ey(T);
    const double zx = (m.ex_hat - ex) / m.se_x, zy = (m.ey_hat - ey) / m.se_y;
    const bool pass = std::abs(zx) <= cfg.mc.sigmas && std::abs(zy) <= cfg.mc.sigmas;
    ok = ok && pass;
    out << std::left << std::setw(4) << T << std::setw(14) << num(ex, 9) << std::setw(14) << num(m.ex_hat, 9)
        << std::setw(10) << num(zx, 3) << std::setw(14) << num(ey, 9) << std::setw(14) << num(m.ey_hat, 9)
        << std::setw(10) << num(zy, 3) << (pass ? "PASS" : "FAIL") << '\n';
  }
  if (!ok) err << "mc-check: a closed form lies outside " << num(cfg.mc.sigmas) << " standard errors\n";
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- report

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out_dir.empty()) throw ConfigError("report needs --out naming the directory of prior outputs");
  std::vector<fs::path> inputs;
  std::vector<std::string> missing;
  if (!o.config.empty()) {
    const RunConfig cfg = load(o);
    std::vector<std::string> want;
    if (cfg.large) want.push_back(cfg.name + ".large.summary.json");
    if (cfg.small) want.push_back(cfg.name + ".small.summary.json");
    for (const auto& w : want) {
      const auto p = fs::path(o.out_dir) / w;
      if (fs::exists(p)) inputs.push_back(p); else missing.push_back(p.string());
    }
  } else if (fs::is_directory(o.out_dir)) {
    for (const auto& entry : fs::directory_iterator(o.out_dir)) {
      const auto name = entry.path().filename().string();
      if (name.size() > 13 && name.ends_with(".summary.json")) inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) missing.push_back((fs::path(o.out_dir) / "*.summary.json").string());
  } else {
    missing.push_back(o.out_dir);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += "\n  " + m;
    throw MissingInputs("report inputs missing:" + list);
  }

  std::ostringstream csv, text;
  csv << "# phidim-report v1\n"
         "fixture,regime,theory_upper,estimate_upper,delta_upper,theory_lower,estimate_lower,delta_lower\n";
  text << std::left << std::setw(18) << "fixture" << std::setw(8) << "regime";
  for (const char* h : {"theory_up", "estimate_up", "delta_up", "theory_lo", "estimate_lo", "delta_lo"}) {
    text << std::setw(14) << h;
  }
  text << '\n';
  for (const auto& path : inputs) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
      j = json::parse(ss.str());
    } catch (const json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    csv << j.value("fixture", std::string("?")) << ',' << j.value("regime", std::string("?"));
    text << std::left << std::setw(18) << j.value("fixture", std::string("?")) << std::setw(8)
         << j.value("regime", std::string("?"));
    for (const char* stat : {"upper", "lower"}) {
      const json& c = j.at(stat);
      std::string theory = "-";
      if (c["target"].is_string()) theory = c["target"].get<std::string>();
      if (c["target"].is_number()) theory = num(c["target"].get<double>());
      const std::string delta = c["delta"].is_number() ? num(c["delta"].get<double>()) : "-";
      for (const auto& cell : {theory, num(c.at("q50").get<double>()), delta}) {
        csv << ',' << cell;
        text << std::setw(14) << cell;
      }
    }
    csv << '\n';
    text << '\n';
  }
  open_output(o, "report.csv") << csv.str();
  open_output(o, "report.txt") << text.str();
  out << text.str();
  note(o, err, "wrote report.txt and report.csv in " + o.out_dir);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"phidim: random Moran constructions and their Phi-dimensions"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("-c,--config", o.config, "Experiment config file (JSON, comments allowed)");
    if (config_required) c->required();
    sub->add_option("--seed", o.seed, "Override the config seed");
    sub->add_option("-o,--out", o.out_dir, "Output directory");
    sub->add_option("-j,--workers", o.workers, "Worker threads (0 = all cores)");
    sub->add_flag_callback("-v,--verbose", [&o] { o.verbosity = 2; }, "More diagnostics on stderr");
    sub->add_flag_callback("-q,--quiet", [&o] { o.verbosity = 0; }, "No diagnostics on stderr");
  };

  auto* theory = app.add_subcommand("theory", "Closed-form d_lower, d_upper, alpha, beta");
  common(theory, true);
  auto* sample = app.add_subcommand("sample", "Draw an environment");
  common(sample, true);
  sample->add_option("--depth", o.depth, "Number of levels");
  auto* build = app.add_subcommand("build", "Build a truncated Moran tree and export it");
  common(build, true);
  build->add_option("--depth", o.depth, "Tree depth");
  build->add_option("--policy", o.policy, "EquallySpaced | LeftPackedRightAnchored | ExtremeChildIsolated");
  build->add_flag("--exact", o.exact, "Exact rational geometry");
  build->add_option("--tau-check", o.tau_check, "Separation constant for the gap test");
  auto* estimate = app.add_subcommand("estimate", "Replicated large/small regime estimates");
  common(estimate, true);
  auto* verify = app.add_subcommand("verify-lemmas", "Sandwich lemma, identities and CDF bands");
  common(verify, true);
  verify->add_option("--tau-check", o.tau_check, "Separation constant for the gap test");
  auto* mc = app.add_subcommand("mc-check", "Monte Carlo check of the simplex moment formulas");
  common(mc, true);
  auto* report = app.add_subcommand("report", "Theory vs estimate table from prior outputs");
  common(report, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*theory) return cmd_theory(o, out, err);
    if (*sample) return cmd_sample(o, out, err);
    if (*build) return cmd_build(o, out, err);
    if (*estimate) return cmd_estimate(o, out, err);
    if (*verify) return cmd_verify(o, out, err);
    if (*mc) return cmd_mc(o, out, err);
    if (*report) return cmd_report(o, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidSpec& e) {
    err << "invalid spec (" << e.invariant() << "): " << e.what() << '\n';
    return kInvalidSpec;
  } catch (const MissingInputs& e) {
    err << e.what() << '\n';
    return kMissingInputs;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}

}  // namespace phidim::cli
