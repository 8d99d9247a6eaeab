#include "qrchain/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "qrchain/exact.hpp"
#include "qrchain/monte_carlo.hpp"
#include "qrchain/skr_optimizer.hpp"
#include "qrchain/three_node.hpp"

namespace qrchain {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string format_cell(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::to_string(std::get<long long>(cell));
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    std::string t = trim(text);
    if (t == "inf" || t == "infinity") return kInfinity;
    const double value = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' is not a number: " + text);
  }
}

struct GridSpec {
  std::vector<double> values;
};

// "lo:hi:step", "lo:hi" (integer step 1), a comma list, or "none".
GridSpec parse_grid(const std::string& key, const std::string& text) {
  GridSpec grid;
  const std::string t = trim(text);
  if (t.empty() || t == "none") return grid;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 2 && parts.size() != 3)
      throw ConfigError("config: '" + key + "' must be lo:hi[:step]");
    const double lo = parse_double(key, parts[0]);
    const double hi = parse_double(key, parts[1]);
    const double step = parts.size() == 3 ? parse_double(key, parts[2]) : 1.0;
    if (!(step > 0.0) || hi < lo) throw ConfigError("config: bad range in '" + key + "'");
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= count; ++i) grid.values.push_back(lo + static_cast<double>(i) * step);
    return grid;
  }
  std::stringstream ss(t);
  std::string part;
  while (std::getline(ss, part, ',')) grid.values.push_back(parse_double(key, part));
  return grid;
}

ChainParams params_from(const RunConfig& config) {
  ChainParams params;
  params.n_node = static_cast<int>(config.get_int("n-node", 3));
  params.p_g = config.get_double("p-g", 0.1);
  params.p_s = config.get_double("p-s", 1.0);
  params.tau_coh = config.get_double("tau-coh", 20.0);
  params.w0 = config.get_double("w0", 1.0);
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return params;
}

struct EvalMode {
  bool monte_carlo = false;
  McProtocol protocol;
};

EvalMode mode_from(const RunConfig& config) {
  EvalMode mode;
  const std::string text = config.get_string("mode", "exact");
  if (text == "mc" || text == "monte-carlo") {
    mode.monte_carlo = true;
  } else if (text != "exact") {
    throw ConfigError("config: mode must be exact or mc");
  }
  mode.protocol.n_samples = static_cast<int>(config.get_int("n-samples", 100));
  mode.protocol.n_batches = static_cast<int>(config.get_int("n-batches", 20));
  mode.protocol.seed = static_cast<std::uint64_t>(config.get_int("seed", 1));
  return mode;
}

ChainPerformance point_performance(const ChainParams& params, const CutoffPolicy& policy,
                                   const EvalMode& mode, std::uint64_t salt) {
  if (!mode.monte_carlo) return exact_performance(params, policy);
  return estimate_performance(params, policy, mode.protocol.n_samples, mode.protocol.n_batches,
                              mix_seed(mode.protocol.seed, salt))
      .mean;
}

// Bisections for matching deterministic rate / threshold fidelity with the
// probabilistic policy; fidelity rises and rate falls as p_c grows.
double pc_matching_rate(const ChainParams& params, double target_rate) {
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (exact_performance(params, Probabilistic{mid}).rate >= target_rate)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double pc_meeting_fidelity(const ChainParams& params, double f_min) {
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (exact_performance(params, Probabilistic{mid}).fidelity >= f_min)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

bool RunConfig::has(const std::string& key) const { return get(key).has_value(); }

std::optional<std::string> RunConfig::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto value = get(key);
  return value ? parse_double(key, *value) : fallback;
}

long long RunConfig::get_int(const std::string& key, long long fallback) const {
  const auto value = get(key);
  if (!value) return fallback;
  const double d = parse_double(key, *value);
  if (d != std::floor(d)) throw ConfigError("config: '" + key + "' must be an integer");
  return static_cast<long long>(d);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  const auto value = get(key);
  if (!value) return fallback;
  const std::string t = trim(*value);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("config: '" + key + "' must be a boolean");
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig config;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ConfigError("config: expected 'key = value': " + line);
    config.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table, const RunConfig& config) {
  nlohmann::ordered_json root;
  root["meta"]["version"] = kVersion;
  nlohmann::ordered_json echo;
  for (const auto& [k, v] : config.entries()) echo[k] = v;
  root["meta"]["config"] = std::move(echo);
  root["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
    for (const Cell& cell : row) {
      if (const auto* s = std::get_if<std::string>(&cell))
        jrow.push_back(*s);
      else if (const auto* d = std::get_if<double>(&cell))
        jrow.push_back(*d);
      else
        jrow.push_back(std::get<long long>(cell));
    }
    rows.push_back(std::move(jrow));
  }
  root["rows"] = std::move(rows);
  return root.dump(2) + "\n";
}

CommandResult cmd_rate_fidelity(const RunConfig& config) {
  const ChainParams params = params_from(config);
  const EvalMode mode = mode_from(config);
  if (!mode.monte_carlo && params.n_node > 5)
    throw ConfigError("config: exact mode covers n-node in {3,4,5}; use mode = mc");

  const GridSpec pc_grid = parse_grid("pc-grid", config.get_string("pc-grid", "0:1:0.01"));
  const GridSpec tc_grid = parse_grid("tc-grid", config.get_string("tc-grid", "0:10"));
  const bool with_e2e = config.get_bool("e2e", false);

  CommandResult result;
  result.table.columns = {"policy",          "param_value", "rate",
                          "fidelity",        "expected_werner",
                          "expected_delivery_time"};
  std::uint64_t salt = 0;
  const auto emit = [&](const std::string& name, double param, const ChainPerformance& perf) {
    result.table.rows.push_back({name, param, perf.rate, perf.fidelity, perf.expected_werner,
                                 perf.expected_delivery_time});
  };
  for (const double p_c : pc_grid.values)
    emit("probabilistic", p_c, point_performance(params, Probabilistic{p_c}, mode, salt++));
  for (const double t_c : tc_grid.values)
    emit("deterministic", t_c, point_performance(params, Deterministic{t_c}, mode, salt++));
  if (with_e2e)
    for (const double t_c : tc_grid.values)
      emit("deterministic_e2e", t_c, point_performance(params, DeterministicE2e{t_c}, mode, salt++));
  return result;
}

CommandResult cmd_skr_sweep(const RunConfig& config) {
  const EvalMode mode = mode_from(config);
  const GridSpec pg_list =
      parse_grid("pg-list", config.get_string("pg-list", config.get_string("p-g", "0.1")));
  const GridSpec nnode_list =
      parse_grid("nnode-list", config.get_string("nnode-list", config.get_string("n-node", "3")));

  CommandResult result;
  result.table.columns = {"n_node",    "p_g",     "tau_coh", "p_s",
                          "policy",    "best_param", "max_skr", "skr_std",
                          "trivial_pc0_skr", "trivial_pc1_skr"};

  for (const double n_node : nnode_list.values) {
    for (const double p_g : pg_list.values) {
      RunConfig point = config;
      point.set("n-node", format_double(n_node));
      point.set("p-g", format_double(p_g));
      const ChainParams params = params_from(point);
      if (!mode.monte_carlo && params.n_node > 5)
        throw ConfigError("config: exact mode covers n-node in {3,4,5}; use mode = mc");

      std::optional<McProtocol> mc;
      if (mode.monte_carlo) {
        mc = mode.protocol;
        mc->seed = mix_seed(mode.protocol.seed, static_cast<std::uint64_t>(result.table.rows.size()));
      }
      std::optional<int> t_c_max;
      if (config.has("tc-max")) t_c_max = static_cast<int>(config.get_int("tc-max", 0));

      const OptimizationResult prob = maximize_skr_over_pc(params, mc);
      const OptimizationResult det = maximize_skr_over_tc(params, t_c_max, mc);
      if (det.certificate_checked && !det.certificate_ok) result.certificate_failure = true;

      const EvalMode trivial_mode = mode;
      const double pc0 = point_performance(params, Probabilistic{0.0}, trivial_mode, 0xa0).skr;
      const double pc1 = point_performance(params, Probabilistic{1.0}, trivial_mode, 0xa1).skr;

      const auto emit = [&](const std::string& name, const OptimizationResult& opt) {
        result.table.rows.push_back({static_cast<long long>(params.n_node), params.p_g,
                                     params.tau_coh, params.p_s, name, opt.best_param,
                                     opt.best_skr, opt.best_skr_std, pc0, pc1});
      };
      emit("probabilistic", prob);
      emit("deterministic", det);
    }
  }
  return result;
}

CommandResult cmd_skr_max(const RunConfig& config) {
  const ChainParams params = params_from(config);
  const EvalMode mode = mode_from(config);
  if (!mode.monte_carlo && params.n_node > 5)
    throw ConfigError("config: exact mode covers n-node in {3,4,5}; use mode = mc");

  std::optional<McProtocol> mc;
  if (mode.monte_carlo) mc = mode.protocol;
  std::optional<int> t_c_max;
  if (config.has("tc-max")) t_c_max = static_cast<int>(config.get_int("tc-max", 0));

  const OptimizationResult prob = maximize_skr_over_pc(params, mc);
  const OptimizationResult det = maximize_skr_over_tc(params, t_c_max, mc);

  CommandResult result;
  result.table.columns = {"n_node",     "p_g",        "tau_coh",       "p_s",
                          "policy",     "best_param", "max_skr",       "skr_std",
                          "evaluations", "certificate_checked", "certificate_ok",
                          "certificate_bound"};
  const auto emit = [&](const std::string& name, const OptimizationResult& opt) {
    result.table.rows.push_back(
        {static_cast<long long>(params.n_node), params.p_g, params.tau_coh, params.p_s, name,
         opt.best_param, opt.best_skr, opt.best_skr_std, static_cast<long long>(opt.evaluations),
         static_cast<long long>(opt.certificate_checked ? 1 : 0),
         static_cast<long long>(opt.certificate_ok ? 1 : 0), opt.certificate_bound});
  };
  emit("probabilistic", prob);
  emit("deterministic", det);
  if (det.certificate_checked && !det.certificate_ok) result.certificate_failure = true;
  return result;
}

CommandResult cmd_mc_simulate(const RunConfig& config) {
  const ChainParams params = params_from(config);
  const std::string policy_text = config.get_string("policy", "probabilistic");
  CutoffPolicy policy;
  if (policy_text == "probabilistic")
    policy = Probabilistic{config.get_double("p-c", 0.0)};
  else if (policy_text == "deterministic")
    policy = Deterministic{config.get_double("t-c", kInfinity)};
  else if (policy_text == "deterministic-e2e" || policy_text == "deterministic_e2e")
    policy = DeterministicE2e{config.get_double("t-c", kInfinity)};
  else
    throw ConfigError("config: unknown policy: " + policy_text);
  try {
    validate(policy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  const int n_samples = static_cast<int>(config.get_int("n-samples", 100));
  const int n_batches = static_cast<int>(config.get_int("n-batches", 20));
  const auto seed = static_cast<std::uint64_t>(config.get_int("seed", 1));
  McOptions options;
  options.max_steps_per_episode = config.get_int("max-steps", options.max_steps_per_episode);

  const McEstimate estimate =
      estimate_performance(params, policy, n_samples, n_batches, seed, options);

  CommandResult result;
  if (config.get_bool("batches", false)) {
    result.table.columns = {"batch", "t_hat", "w_hat", "skr_hat"};
    for (std::size_t j = 0; j < estimate.batches.size(); ++j)
      result.table.rows.push_back({static_cast<long long>(j + 1), estimate.batches[j].t_hat,
                                   estimate.batches[j].w_hat, estimate.batches[j].skr_hat});
    return result;
  }
  result.table.columns = {"n_node", "p_g",  "tau_coh", "p_s",   "policy", "param",
                          "n_samples", "n_batches", "seed", "t_hat", "rate",  "w_hat",
                          "fidelity", "skr", "skr_std"};
  result.table.rows.push_back(
      {static_cast<long long>(params.n_node), params.p_g, params.tau_coh, params.p_s,
       policy_name(policy), policy_param(policy), static_cast<long long>(n_samples),
       static_cast<long long>(n_batches), static_cast<long long>(seed),
       estimate.mean.expected_delivery_time, estimate.mean.rate, estimate.mean.expected_werner,
       estimate.mean.fidelity, estimate.mean.skr, estimate.skr_std});
  return result;
}

CommandResult cmd_crossover(const RunConfig& config) {
  const ChainParams params = params_from(config);
  if (params.n_node > 5)
    throw ConfigError("config: crossover requires exact solvers, n-node in {3,4,5}");
  const GridSpec tc_grid = parse_grid("tc-grid", config.get_string("tc-grid", "0:10"));
  const bool has_f_min = config.has("f-min");
  const double f_min = config.get_double("f-min", 0.25);

  CommandResult result;
  result.table.columns = {"t_c",      "p_c_star",     "rate_det", "rate_prob",
                          "fidelity_det", "fidelity_prob"};
  if (has_f_min) {
    const char* extra[] = {"f_min", "max_rate_det", "max_rate_prob", "rate_gain"};
    result.table.columns.insert(result.table.columns.end(), std::begin(extra), std::end(extra));
  }

  double max_rate_det = 0.0, max_rate_prob = 0.0, gain = 0.0;
  if (has_f_min) {
    if (params.n_node == 3) {
      const ThresholdRates rates = three_node_threshold_rates(params, f_min);
      max_rate_det = rates.rate_det;
      max_rate_prob = rates.rate_prob;
      gain = rates.gain;
    } else {
      // Scan feasible cutoff times (fidelity decreases, rate increases) and
      // bisect the probabilistic boundary.
      bool any = false;
      for (const double t_c : tc_grid.values) {
        const ChainPerformance perf = exact_performance(params, Deterministic{t_c});
        if (perf.fidelity >= f_min) {
          max_rate_det = std::max(max_rate_det, perf.rate);
          any = true;
        } else {
          break;
        }
      }
      if (!any) throw ConfigError("config: f-min infeasible for the deterministic policy");
      const ChainPerformance at_zero = exact_performance(params, Probabilistic{0.0});
      if (at_zero.fidelity >= f_min) {
        max_rate_prob = at_zero.rate;
      } else {
        const double p_c = pc_meeting_fidelity(params, f_min);
        max_rate_prob = exact_performance(params, Probabilistic{p_c}).rate;
      }
      gain = max_rate_prob / max_rate_det;
    }
  }

  for (const double t_c : tc_grid.values) {
    const ChainPerformance det = exact_performance(params, Deterministic{t_c});
    double p_c_star;
    if (params.n_node == 3)
      p_c_star = crossover_pc(params.p_g, t_c);
    else
      p_c_star = pc_matching_rate(params, det.rate);
    const ChainPerformance prob = exact_performance(params, Probabilistic{p_c_star});
    std::vector<Cell> row{t_c,      p_c_star,     det.rate,    prob.rate,
                          det.fidelity, prob.fidelity};
    if (has_f_min) {
      row.push_back(f_min);
      row.push_back(max_rate_det);
      row.push_back(max_rate_prob);
      row.push_back(gain);
    }
    result.table.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace qrchain
