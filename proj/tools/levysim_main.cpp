#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levysim/cli.hpp"

namespace {

using levysim::cli::Config;

struct CommonFlags {
    std::string config_path;
    std::string seed;
    std::string out;
    std::string workers;
    std::vector<std::string> overrides; // KEY=VALUE pairs
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "flat key=value configuration file");
    cmd->add_option("--seed", flags.seed, "master seed (expanded into named streams)");
    cmd->add_option("--out", flags.out, "output directory for CSV artifacts");
    cmd->add_option("--workers", flags.workers, "path-sharding worker count");
    cmd->add_option("--set", flags.overrides, "override a config key, KEY=VALUE")
        ->type_name("KEY=VALUE");
}

// File first, then flags: a flag always wins over a config-file entry.
Config assemble(const CommonFlags& flags) {
    Config config;
    if (!flags.config_path.empty()) config = Config::from_file(flags.config_path);
    for (const std::string& kv : flags.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw levysim::cli::ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!flags.seed.empty()) config.set("seed", flags.seed);
    if (!flags.out.empty()) config.set("out", flags.out);
    if (!flags.workers.empty()) config.set("workers", flags.workers);
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Levy process simulation: Metropolis/Hastings and stochastic "
                 "step-function samplers with exact-distribution benchmarks"};
    app.require_subcommand(1);

    struct Entry {
        const char* name;
        const char* help;
        std::function<int(const Config&, std::ostream&)> run;
        CommonFlags flags;
    };
    std::vector<Entry> entries = {
        {"sweep-width", "local MH correlation vs proposal width on the unit normal",
         levysim::cli::cmd_sweep_width, {}},
        {"two-mode", "local MH vs local SF mixing on the two-mode density",
         levysim::cli::cmd_two_mode, {}},
        {"gauss-convergence", "histogram convergence of all four samplers on the unit normal",
         levysim::cli::cmd_gauss_convergence, {}},
        {"merton", "jump-diffusion with Gaussian jumps against the exact series density",
         levysim::cli::cmd_merton, {}},
        {"nig", "NIG jump-diffusion approximation against the closed-form density",
         levysim::cli::cmd_nig, {}},
        {"cgmy", "CGMY jump-diffusion approximation against the cf-inverted density",
         levysim::cli::cmd_cgmy, {}},
        {"selftest", "run the invariant suite (exit 3 on failure)",
         levysim::cli::cmd_selftest, {}},
    };
    for (Entry& e : entries) add_common(app.add_subcommand(e.name, e.help), e.flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    for (Entry& e : entries) {
        if (!app.got_subcommand(e.name)) continue;
        try {
            const Config config = assemble(e.flags);
            return e.run(config, std::cout);
        } catch (const levysim::cli::ConfigError& err) {
            std::cerr << "config error: " << err.what() << "\n";
            return levysim::cli::kExitConfigError;
        } catch (const std::exception& err) {
            std::cerr << "error: " << err.what() << "\n";
            return 1;
        }
    }
    return levysim::cli::kExitConfigError;
}
