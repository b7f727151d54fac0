#include "phidim/experiments.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "format.hpp"
#include "parallel.hpp"
#include "phidim/environment.hpp"
#include "phidim/errors.hpp"
#include "phidim/rng.hpp"
#include "phidim/simplex.hpp"
#include "phidim/theory.hpp"

namespace phidim {

namespace {

using nlohmann::json;

constexpr const char* kCsvVersion = "# phidim-replicates v1";
constexpr const char* kCsvColumns = "replicate,seed,regime,upper,lower,n_min,n_max,k_cap,env_length,phi";
// Oracle draws are split into fixed-size chunks with one counter stream each.
constexpr std::size_t kOracleChunk = 1u << 16;

std::string num_token(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return detail::fmt_num(v, 17);
}

double parse_num(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("not an unsigned integer: '" + s + "'");
}

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return v[lo];
  return v[lo] + frac * (v[hi] - v[lo]);
}

std::vector<double> uniform_simplex_point(CounterRng& rng, int T) {
  std::vector<double> p(static_cast<std::size_t>(T));
  double sum = 0.0;
  for (auto& v : p) {
    v = rng.exponential();
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return p;
}

/// Calls fn(min p, max p) for each draw, chunked by stream.
template <class Fn>
void for_each_simplex_draw(int T, std::size_t samples, std::uint64_t seed, Fn&& fn) {
  if (T < 2) throw DomainError("simplex sampling needs T >= 2");
  for (std::size_t chunk = 0; chunk * kOracleChunk < samples; ++chunk) {
    CounterRng rng(seed, chunk);
    const std::size_t end = std::min(samples, (chunk + 1) * kOracleChunk);
    for (std::size_t i = chunk * kOracleChunk; i < end; ++i) {
      const auto p = uniform_simplex_point(rng, T);
      const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
      fn(*lo, *hi);
    }
  }
}

json summary_json(const ColumnSummary& s) {
  json j{{"mean", s.mean}, {"sd", s.sd},   {"min", s.min}, {"max", s.max},
         {"q05", s.q05},   {"q50", s.q50}, {"q95", s.q95}};
  if (s.target) {
    j["target"] = std::isinf(*s.target) ? json(num_token(*s.target)) : json(*s.target);
  } else {
    j["target"] = nullptr;
  }
  j["delta"] = s.delta ? json(*s.delta) : json(nullptr);
  return j;
}

bool close(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

void check_column(const json& stored, const ColumnSummary& fresh, const char* name) {
  const std::pair<const char*, double> fields[] = {
      {"mean", fresh.mean}, {"sd", fresh.sd},   {"min", fresh.min}, {"max", fresh.max},
      {"q05", fresh.q05},   {"q50", fresh.q50}, {"q95", fresh.q95}};
  for (const auto& [key, value] : fields) {
    if (!stored.contains(key) || !stored[key].is_number()) {
      throw ConfigError(std::string("summary column ") + name + " lacks '" + key + "'");
    }
    if (!close(stored[key].get<double>(), value)) {
      throw ConfigError(std::string("summary column ") + name + "." + key + " = " +
                        detail::fmt_num(stored[key].get<double>(), 17) +
                        " does not match the recomputed " + detail::fmt_num(value, 17));
    }
  }
}

std::optional<double> target_from_json(const json& j) {
  if (!j.contains("target") || j["target"].is_null()) return std::nullopt;
  if (j["target"].is_string()) return parse_num(j["target"].get<std::string>());
  return j["target"].get<double>();
}

}  // namespace

std::uint64_t replicate_seed(const ExperimentConfig& config, std::size_t r) {
  return derive_seed(config.base_seed, r);
}

EstimateReport run_replicate(const ExperimentConfig& config, std::size_t r) {
  const std::uint64_t seed = replicate_seed(config, r);
  if (config.regime == Regime::Large) {
    const auto env = sample_environment(config.spec, seed, config.env_length);
    return large_estimates(env, config.phi, config.window, config.k_cap);
  }
  if (config.regime == Regime::Small) {
    const auto env = sample_environment(config.spec, seed, std::max(config.prefix, config.env_length));
    return small_estimates(env, config.prefix);
  }
  throw ConfigError("experiments run only the Large or Small regime, not " +
                    to_string(config.regime));
}

ColumnSummary summarize(std::span<const double> values, std::optional<double> target) {
  if (values.empty()) throw DomainError("summarize: no values");
  ColumnSummary s;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  s.min = sorted.front();
  s.max = sorted.back();
  s.q05 = quantile_sorted(sorted, 0.05);
  s.q50 = quantile_sorted(sorted, 0.50);
  s.q95 = quantile_sorted(sorted, 0.95);
  s.target = target;
  if (target && std::isfinite(*target)) s.delta = s.q50 - *target;
  return s;
}

namespace {

void fill_summaries(SummaryTable& table, std::optional<double> upper_target,
                    std::optional<double> lower_target) {
  std::vector<double> up, lo;
  for (const auto& row : table.rows) {
    up.push_back(row.report.upper);
    lo.push_back(row.report.lower);
  }
  table.upper = summarize(up, upper_target);
  table.lower = summarize(lo, lower_target);
}

}  // namespace

SummaryTable run_replicated(const ExperimentConfig& config) {
  if (config.replicates == 0) throw ConfigError("replicates must be positive");
  std::vector<EstimateReport> reports(config.replicates);
  const auto errors = detail::parallel_for(config.replicates, config.workers,
                                           [&](std::size_t r) { reports[r] = run_replicate(config, r); });
  for (std::size_t r = 0; r < errors.size(); ++r) {
    if (!errors[r]) continue;
    std::string what = "unknown error";
    try {
      std::rethrow_exception(errors[r]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    const auto seed = replicate_seed(config, r);
    throw ReplicateError("replicate " + std::to_string(r) + " (seed " + std::to_string(seed) +
                             ") failed: " + what,
                         r, seed);
  }

  SummaryTable table;
  table.fixture = config.spec.name();
  table.spec_id = config.spec.id();
  table.regime = config.regime;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    table.rows.push_back({r, replicate_seed(config, r), reports[r]});
  }
  std::optional<double> up_target, lo_target;
  if (config.regime == Regime::Large) {
    const auto th = moments(config.spec);
    up_target = th.d_upper;
    lo_target = th.d_lower;
  } else {
    const auto ex = extremes(config.spec);
    up_target = ex.alpha;
    lo_target = ex.beta;
  }
  fill_summaries(table, up_target, lo_target);
  return table;
}

void write_replicates_csv(std::ostream& out, const SummaryTable& table) {
  out << kCsvVersion << '\n' << kCsvColumns << '\n';
  for (const auto& row : table.rows) {
    const auto& r = row.report;
    out << row.replicate << ',' << row.seed << ',' << to_string(r.regime) << ','
        << num_token(r.upper) << ',' << num_token(r.lower) << ',' << r.window.n_min << ','
        << r.window.n_max << ',' << r.k_cap << ',' << r.env_length << ',' << r.phi_id << '\n';
  }
}

std::vector<ReplicateRow> read_replicates_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvVersion) {
    throw ConfigError("replicate CSV: expected header '" + std::string(kCsvVersion) + "'");
  }
  if (!std::getline(in, line) || line != kCsvColumns) {
    throw ConfigError("replicate CSV: unexpected column line");
  }
  std::vector<ReplicateRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    // phi descriptors may contain commas; they are the last column
    for (int i = 0; i < 9 && std::getline(ss, cell, ','); ++i) f.push_back(cell);
    std::getline(ss, cell);
    f.push_back(cell);
    if (f.size() != 10) throw ConfigError("replicate CSV: malformed row '" + line + "'");
    ReplicateRow row;
    row.replicate = static_cast<std::size_t>(parse_u64(f[0]));
    row.seed = parse_u64(f[1]);
    row.report.regime = regime_from_string(f[2]);
    row.report.upper = parse_num(f[3]);
    row.report.lower = parse_num(f[4]);
    row.report.window = {static_cast<std::size_t>(parse_u64(f[5])),
                         static_cast<std::size_t>(parse_u64(f[6]))};
    row.report.k_cap = static_cast<std::size_t>(parse_u64(f[7]));
    row.report.env_length = static_cast<std::size_t>(parse_u64(f[8]));
    row.report.phi_id = f[9];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_to_json(const SummaryTable& table) {
  json j{{"format", "phidim-summary v1"},
         {"fixture", table.fixture},
         {"spec_id", table.spec_id},
         {"regime", to_string(table.regime)},
         {"replicates", table.rows.size()},
         {"upper", summary_json(table.upper)},
         {"lower", summary_json(table.lower)}};
  return j.dump(2) + "\n";
}

SummaryTable load_summary(std::istream& csv, const std::string& summary_json_text) {
  json j;
  try {
    j = json::parse(summary_json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("summary JSON: ") + e.what());
  }
  SummaryTable table;
  table.rows = read_replicates_csv(csv);
  if (table.rows.empty()) throw ConfigError("replicate CSV has no rows");
  try {
    table.fixture = j.at("fixture").get<std::string>();
    table.spec_id = j.at("spec_id").get<std::string>();
    table.regime = regime_from_string(j.at("regime").get<std::string>());
    if (j.at("replicates").get<std::size_t>() != table.rows.size()) {
      throw ConfigError("summary counts " + std::to_string(j.at("replicates").get<std::size_t>()) +
                        " replicates, CSV holds " + std::to_string(table.rows.size()));
    }
    fill_summaries(table, target_from_json(j.at("upper")), target_from_json(j.at("lower")));
    check_column(j.at("upper"), table.upper, "upper");
    check_column(j.at("lower"), table.lower, "lower");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("summary JSON: ") + e.what());
  }
  return table;
}

MomentOracle mc_moment_oracle(int T, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw DomainError("mc_moment_oracle needs at least 2 samples");
  // Welford running moments
  double mean_x = 0.0, m2_x = 0.0, mean_y = 0.0, m2_y = 0.0;
  std::size_t n = 0;
  for_each_simplex_draw(T, samples, seed, [&](double lo, double hi) {
    ++n;
    const double x = -std::log(hi);
    const double y = -std::log(lo);
    const double dx = x - mean_x;
    mean_x += dx / static_cast<double>(n);
    m2_x += dx * (x - mean_x);
    const double dy = y - mean_y;
    mean_y += dy / static_cast<double>(n);
    m2_y += dy * (y - mean_y);
  });
  const double nn = static_cast<double>(n);
  return {mean_x, mean_y, std::sqrt(m2_x / (nn - 1.0) / nn), std::sqrt(m2_y / (nn - 1.0) / nn), n};
}

SimplexExtremes sample_simplex_extremes(int T, std::size_t samples, std::uint64_t seed) {
  SimplexExtremes out;
  out.min_p.reserve(samples);
  out.max_p.reserve(samples);
  for_each_simplex_draw(T, samples, seed, [&](double lo, double hi) {
    out.min_p.push_back(lo);
    out.max_p.push_back(hi);
  });
  return out;
}

double dkw_epsilon(std::size_t n, double confidence) {
  if (n == 0 || !(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("dkw_epsilon needs n > 0 and confidence in (0,1)");
  }
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n)));
}

CdfBandCheck cdf_band_check(int T, std::size_t samples, std::uint64_t seed, double confidence) {
  auto ext = sample_simplex_extremes(T, samples, seed);
  CdfBandCheck out;
  out.T = T;
  out.epsilon = dkw_epsilon(samples, confidence);
  out.ks_min = ks_distance(std::move(ext.min_p), [T](double z) { return min_cdf(T, z); });
  out.ks_max = ks_distance(std::move(ext.max_p), [T](double z) { return max_cdf(T, z); });
  return out;
}

std::vector<ThresholdRow> depth_threshold_study(const DistributionSpec& spec,
                                                const DimensionFunction& f, double g_value,
                                                double h_value, std::span<const std::size_t> n_grid,
                                                std::size_t replicates, std::uint64_t seed,
                                                std::size_t extra_levels, unsigned workers) {
  if (n_grid.empty() || replicates == 0) throw ConfigError("threshold study needs N values and replicates");
  const auto th = moments(spec);
  if (!th.ez) throw ConfigError("threshold study needs a closed-form E(Z)");
  const std::size_t n_max = *std::max_element(n_grid.begin(), n_grid.end());

  // per replicate, per grid point: -1 truncated, else bit 0 = below zeta, bit 1 = above chi
  std::vector<std::vector<int>> outcome(replicates, std::vector<int>(n_grid.size(), 0));
  const auto errors = detail::parallel_for(replicates, workers, [&](std::size_t r) {
    const auto env = sample_environment(spec, derive_seed(seed, r), n_max + extra_levels);
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
      const std::size_t n = n_grid[g];
      try {
        const auto k = static_cast<double>(depth(env.z(), f, n, extra_levels));
        int bits = 0;
        if (k < zeta_threshold(g_value, n, *th.ez)) bits |= 1;
        if (k > chi_threshold(h_value, n, *th.ez)) bits |= 2;
        outcome[r][g] = bits;
      } catch (const TruncationError&) {
        outcome[r][g] = -1;
      }
    }
  });
  for (std::size_t r = 0; r < errors.size(); ++r) {
    if (errors[r]) std::rethrow_exception(errors[r]);
  }

  std::vector<ThresholdRow> rows;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    ThresholdRow row;
    row.n = n_grid[g];
    row.zeta = zeta_threshold(g_value, row.n, *th.ez);
    row.chi = chi_threshold(h_value, row.n, *th.ez);
    std::size_t below = 0, above = 0;
    for (std::size_t r = 0; r < replicates; ++r) {
      const int o = outcome[r][g];
      if (o < 0) {
        ++row.truncated;
        continue;
      }
      ++row.counted;
      below += (o & 1) ? 1 : 0;
      above += (o & 2) ? 1 : 0;
    }
    if (row.counted > 0) {
      row.freq_below_zeta = static_cast<double>(below) / static_cast<double>(row.counted);
      row.freq_above_chi = static_cast<double>(above) / static_cast<double>(row.counted);
    }
    rows.push_back(row);
  }
  return rows;
}

bool non_increasing_from(std::span<const double> values, std::size_t start, double slack) {
  for (std::size_t i = start; i + 1 < values.size(); ++i) {
    if (values[i + 1] > values[i] + slack) return false;
  }
  return true;
}

}  // namespace phidim
