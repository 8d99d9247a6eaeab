#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qrchain/monte_carlo.hpp"
#include "qrchain/numerics.hpp"
#include "qrchain/report.hpp"

namespace {

using qrchain::CommandResult;
using qrchain::RunConfig;

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFailure = 3;
constexpr int kExitEpisodeCap = 4;

// Flags override values from --config; only flags the user actually passed
// are applied.
struct FlagSpec {
  const char* key;
  const char* description;
};

const std::vector<FlagSpec> kCommonFlags = {
    {"n-node", "number of nodes (>= 3)"},
    {"p-g", "elementary link generation probability"},
    {"p-s", "swap success probability"},
    {"tau-coh", "coherence time in time steps (inf allowed)"},
    {"w0", "Werner parameter of a fresh link"},
    {"mode", "exact | mc"},
    {"n-samples", "Monte Carlo samples per batch"},
    {"n-batches", "Monte Carlo batches"},
    {"seed", "master RNG seed"},
    {"format", "csv | json"},
    {"output", "output file (default: stdout; relative paths join QRCHAIN_OUT_DIR)"},
};

const std::vector<FlagSpec> kCommandFlags[] = {
    // rate-fidelity
    {{"pc-grid", "p_c sweep, lo:hi:step or comma list or none"},
     {"tc-grid", "t_c sweep, lo:hi[:step] or comma list or none"},
     {"e2e", "also emit the deterministic policy with e2e cutoff"}},
    // skr-sweep
    {{"pg-list", "p_g values, comma list or lo:hi:step"},
     {"nnode-list", "n_node values, comma list"},
     {"tc-max", "cutoff-time scan bound"}},
    // skr-max
    {{"tc-max", "cutoff-time scan bound"}},
    // mc-simulate
    {{"policy", "probabilistic | deterministic | deterministic-e2e"},
     {"p-c", "cutoff probability"},
     {"t-c", "cutoff time (inf allowed)"},
     {"batches", "emit the per-batch table instead of the summary row"},
     {"max-steps", "episode step cap"}},
    // crossover
    {{"tc-grid", "t_c values to compare at equal rate"},
     {"f-min", "minimum fidelity threshold for the rate comparison"}},
};

void write_output(const RunConfig& config, const CommandResult& result) {
  const std::string format = config.get_string("format", "csv");
  std::string payload;
  if (format == "csv")
    payload = qrchain::to_csv(result.table);
  else if (format == "json")
    payload = qrchain::to_json(result.table, config);
  else
    throw qrchain::ConfigError("config: format must be csv or json");

  const std::string output = config.get_string("output", "");
  if (output.empty()) {
    std::cout << payload;
    return;
  }
  std::string path = output;
  const char* out_dir = std::getenv("QRCHAIN_OUT_DIR");
  if (out_dir && *out_dir && path.front() != '/') path = std::string(out_dir) + "/" + path;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw qrchain::ConfigError("config: cannot open output file: " + path);
  file << payload;
}

int run(int argc, char** argv) {
  CLI::App app{"Exact and simulated rates, fidelities and secret-key rates for "
               "homogeneous swap-asap quantum repeater chains with probabilistic or "
               "deterministic cutoffs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qrchain::kVersion);

  struct Pending {
    CLI::App* sub = nullptr;
    std::string config_path;
    std::map<std::string, std::string> overrides;
    CommandResult (*command)(const RunConfig&) = nullptr;
  };
  const std::pair<const char*, CommandResult (*)(const RunConfig&)> commands[] = {
      {"rate-fidelity", qrchain::cmd_rate_fidelity},
      {"skr-sweep", qrchain::cmd_skr_sweep},
      {"skr-max", qrchain::cmd_skr_max},
      {"mc-simulate", qrchain::cmd_mc_simulate},
      {"crossover", qrchain::cmd_crossover},
  };

  std::vector<std::unique_ptr<Pending>> pending;
  for (std::size_t c = 0; c < std::size(commands); ++c) {
    auto entry = std::make_unique<Pending>();
    entry->command = commands[c].second;
    entry->sub = app.add_subcommand(commands[c].first, "");
    entry->sub->add_option("--config", entry->config_path, "key = value configuration file");
    const auto add_flags = [&entry](const std::vector<FlagSpec>& flags) {
      for (const FlagSpec& flag : flags) {
        const std::string key = flag.key;
        entry->sub
            ->add_option_function<std::string>(
                "--" + key,
                [raw = entry.get(), key](const std::string& value) {
                  raw->overrides[key] = value;
                },
                flag.description)
            ->expected(1);
      }
    };
    add_flags(kCommonFlags);
    add_flags(std::vector<FlagSpec>(std::begin(kCommandFlags[c]), std::end(kCommandFlags[c])));
    pending.push_back(std::move(entry));
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& entry : pending) {
    if (!entry->sub->parsed()) continue;
    RunConfig config;
    if (!entry->config_path.empty()) {
      std::ifstream file(entry->config_path);
      if (!file) throw qrchain::ConfigError("config: cannot read " + entry->config_path);
      std::stringstream buffer;
      buffer << file.rdbuf();
      config = RunConfig::parse(buffer.str());
    }
    for (const auto& [key, value] : entry->overrides) config.set(key, value);
    const CommandResult result = entry->command(config);
    write_output(config, result);
    if (result.certificate_failure) {
      std::cerr << "qrchain: cutoff-time search certificate failed; the reported maximum may "
                   "not bound t_c beyond the scanned range\n";
      return kExitNumericalFailure;
    }
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qrchain::ConfigError& e) {
    std::cerr << "{\"error\":\"config\",\"message\":\"" << e.what() << "\"}\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "{\"error\":\"config\",\"message\":\"" << e.what() << "\"}\n";
    return kExitConfigError;
  } catch (const qrchain::EpisodeCapError& e) {
    std::cerr << "{\"error\":\"episode_cap\",\"message\":\"" << e.what() << "\"}\n";
    return kExitEpisodeCap;
  } catch (const qrchain::SingularMatrixError& e) {
    std::cerr << "{\"error\":\"numerical\",\"message\":\"" << e.what() << "\"}\n";
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"internal\",\"message\":\"" << e.what() << "\"}\n";
    return 1;
  }
}
