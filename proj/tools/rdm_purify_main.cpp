#include <CLI11.hpp>
#include <iostream>

#include "rdmpurify/experiments.hpp"
#include "rdmpurify/version.hpp"

using namespace rdmpurify;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitSolverFailure = 3;

int run(ExperimentKind kind, const std::string& config_path, const std::string& out_dir,
        int seeds, int threads) {
    try {
        ExperimentConfig cfg = load_experiment_config(config_path);
        if (cfg.experiment != kind) {
            std::cerr << "config error at experiment: config declares `"
                      << to_string(cfg.experiment) << "` but the `" << to_string(kind)
                      << "` subcommand was invoked\n";
            return kExitConfigError;
        }
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (seeds > 0) cfg.seeds = seeds;
        if (threads > 0) cfg.threads = threads;
        ExperimentOutput out = run_experiment(cfg);
        std::cout << "wrote " << out.csv_path << "\n";
        std::cout << "wrote " << out.report_path << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolverFailure;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rdm-purify: correlated purification of noisy 2-RDMs"};
    app.set_version_flag("--version", std::string("rdm-purify ") + kVersion);
    app.require_subcommand(1);

    struct Args {
        std::string config;
        std::string out;
        int seeds = 0;
        int threads = 0;
    };

    std::vector<std::pair<ExperimentKind, CLI::App*>> subs;
    std::map<const CLI::App*, Args> args;
    for (auto kind :
         {ExperimentKind::weight_sweep, ExperimentKind::size_sweep, ExperimentKind::excited,
          ExperimentKind::dissociation, ExperimentKind::spectra,
          ExperimentKind::purify_once}) {
        CLI::App* sub = app.add_subcommand(to_string(kind));
        auto& a = args[sub];
        sub->add_option("--config", a.config, "experiment config (JSON)")
            ->required();
        sub->add_option("--out", a.out, "output directory (overrides config)");
        sub->add_option("--seeds", a.seeds, "seed count (overrides config)");
        sub->add_option("--threads", a.threads,
                        "worker threads (overrides config and RDM_PURIFY_THREADS)");
        subs.emplace_back(kind, sub);
    }

    CLI11_PARSE(app, argc, argv);

    for (auto& [kind, sub] : subs)
        if (sub->parsed()) {
            const Args& a = args[sub];
            return run(kind, a.config, a.out, a.seeds, a.threads);
        }
    return kExitConfigError;
}
