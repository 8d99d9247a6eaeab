#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Declarative run configuration and machine-readable result tables backing
// the command-line interface. Commands are implemented against RunConfig so
// every emitted row can be re-derived through direct library calls.

namespace qrchain {

inline constexpr const char* kVersion = "qrchain 0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key = value configuration; insertion order is preserved so the
/// serialized echo is byte-stable.
class RunConfig {
 public:
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// One "key = value" line per entry.
  std::string serialize() const;
  static RunConfig parse(const std::string& text);

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

using Cell = std::variant<std::string, double, long long>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct CommandResult {
  Table table;
  bool certificate_failure = false;  // maps to the numerical-failure exit code
};

/// CSV with '.' decimals and 17 significant digits for doubles.
std::string to_csv(const Table& table);

/// The same rows wrapped with a provenance header (version + config echo).
std::string to_json(const Table& table, const RunConfig& config);

CommandResult cmd_rate_fidelity(const RunConfig& config);
CommandResult cmd_skr_sweep(const RunConfig& config);
CommandResult cmd_skr_max(const RunConfig& config);
CommandResult cmd_mc_simulate(const RunConfig& config);
CommandResult cmd_crossover(const RunConfig& config);

}  // namespace qrchain
