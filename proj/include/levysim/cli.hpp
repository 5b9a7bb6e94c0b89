#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace levysim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitAcceptanceFailure = 3;

// Raised for any configuration problem; the message names the field.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Flat key=value configuration: file first, then flag overrides (flag wins).
class Config {
  public:
    Config() = default;

    // Parses `key = value` lines; '#' starts a comment. Throws ConfigError.
    static Config from_file(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    // Typed range-checked getters; all throw ConfigError with the field name.
    double get_double(const std::string& key, double def, double lo, double hi) const;
    std::int64_t get_int(const std::string& key, std::int64_t def, std::int64_t lo,
                         std::int64_t hi) const;
    bool get_bool(const std::string& key, bool def) const;
    std::string get_string(const std::string& key, const std::string& def) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& def) const;

    // Rejects any key not in `known` (common keys are always allowed).
    void require_known(const std::vector<std::string>& known) const;

    std::uint64_t seed() const;
    std::filesystem::path out_dir() const;
    int workers() const;

  private:
    std::map<std::string, std::string> values_;
};

// One threshold check evaluated by a command or the selftest suite.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; // "measured=... bound=..."
};

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks);
bool all_pass(const std::vector<CheckResult>& checks);

// Subcommand drivers. Each validates its configuration fully before any
// simulation, writes CSV artifacts into the output directory, prints a
// PASS/FAIL summary, and returns a process exit code.
int cmd_sweep_width(const Config& config, std::ostream& log);
int cmd_two_mode(const Config& config, std::ostream& log);
int cmd_gauss_convergence(const Config& config, std::ostream& log);
int cmd_merton(const Config& config, std::ostream& log);
int cmd_nig(const Config& config, std::ostream& log);
int cmd_cgmy(const Config& config, std::ostream& log);
int cmd_selftest(const Config& config, std::ostream& log);

// The invariant suite behind `selftest` (alias chi-square, SF no-repeat,
// discrete detailed balance, histogram merge, determinism, lambda vs
// quadrature), exposed so the acceptance tests can reuse it.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

} // namespace levysim::cli
