#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "tauq/experiments.hpp"
#include "tauq/parallel.hpp"

namespace {

struct CommandArgs {
    std::string config_path;
    std::string out_path;
};

int run_command(const CommandArgs& args, int threads,
                const std::function<std::string(const tauq::ExperimentConfig&)>& driver) {
    try {
        if (threads > 0) tauq::set_max_threads(threads);
        const tauq::ExperimentConfig cfg = tauq::load_config(args.config_path);
        const std::string out = !args.out_path.empty() ? args.out_path : cfg.out;
        if (out.empty())
            throw tauq::ConfigError("no output path: pass --out or set \"out\" in the config");
        const std::string csv = driver(cfg);
        std::ofstream file(out, std::ios::binary);
        if (!file) throw tauq::ConfigError("cannot write " + out);
        file << csv;
        return 0;
    } catch (const tauq::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const tauq::NumericalGuard& e) {
        std::fprintf(stderr, "numerical guard: %s\n", e.what());
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolution semigroup approximation by iterated one-step kernels:\n"
                 "convergence sweeps, quantization comparisons, Monte Carlo and\n"
                 "phase-space cross-checks. Results are written as CSV."};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker cap (default: all cores; results independent of it)");

    struct Sub {
        const char* name;
        const char* help;
        std::function<std::string(const tauq::ExperimentConfig&)> driver;
    };
    const Sub subs[] = {
        {"converge", "iteration sweep against a reference solution", tauq::run_converge},
        {"tau-compare", "gaps between quantizations and the rewritten qp-symbol", tauq::run_tau_compare},
        {"mc-validate", "Monte Carlo estimators against the grid solution", tauq::run_mc_validate},
        {"norm-growth", "empirical L1 growth exponents vs the potential bound", tauq::run_norm_growth},
        {"hff-check", "phase-space evaluation against the kernel iteration", tauq::run_hff_check},
    };

    int exit_code = 0;
    for (const auto& sub : subs) {
        auto* cmd = app.add_subcommand(sub.name, sub.help);
        cmd->fallthrough();  // let --threads appear after the subcommand
        auto args = std::make_shared<CommandArgs>();
        cmd->add_option("--config", args->config_path, "JSON experiment config")->required();
        cmd->add_option("--out", args->out_path, "CSV output path (overrides config \"out\")");
        auto driver = sub.driver;
        cmd->callback([args, driver, &threads, &exit_code] {
            exit_code = run_command(*args, threads, driver);
        });
    }

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
