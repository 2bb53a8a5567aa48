#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sokofm/experiment.hpp"

namespace {

struct GlobalFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::string> out_dir;
};

sokofm::ExperimentConfig resolve_config(const GlobalFlags& flags) {
    sokofm::ExperimentConfig config =
        flags.config_path.empty() ? sokofm::default_config()
                                  : sokofm::load_config(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.jobs) config.jobs = *flags.jobs;
    if (flags.out_dir) config.out_dir = *flags.out_dir;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local forward-model learning and planning on Sokoban"};
    app.require_subcommand(1);
    app.fallthrough();  // allow --config etc. after the subcommand

    GlobalFlags flags;
    app.add_option("--config", flags.config_path, "JSON experiment configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", flags.seed, "Master seed (overrides the config)");
    app.add_option("--jobs", flags.jobs, "Worker thread cap, 0 = all cores");
    app.add_option("--out", flags.out_dir, "Output directory (overrides the config)");

    auto* collect = app.add_subcommand(
        "collect", "Record random-agent transitions for the train/easy/hard level sets");
    auto* train =
        app.add_subcommand("train", "Train the configured model grid from the train dataset");
    auto* eval = app.add_subcommand("eval", "One-step prediction accuracy on the test datasets");
    auto* play =
        app.add_subcommand("play", "Playing performance of the RHEA agent per forward model");
    auto* tune = app.add_subcommand("tune", "NTBEA tuning of the agent parameters");
    auto* bench = app.add_subcommand("bench", "Engine throughput benchmark");
    auto* run = app.add_subcommand("run", "Full pipeline: collect, train, eval, play");
    auto* show_config =
        app.add_subcommand("config", "Print the effective configuration as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = resolve_config(flags);
        auto& log = std::cerr;
        if (collect->parsed()) {
            sokofm::run_collect(config, log);
        } else if (train->parsed()) {
            sokofm::run_train(config, log);
        } else if (eval->parsed()) {
            sokofm::run_eval(config, log);
        } else if (play->parsed()) {
            sokofm::run_play(config, log);
        } else if (tune->parsed()) {
            sokofm::run_tune(config, log);
        } else if (bench->parsed()) {
            sokofm::run_bench(config, log);
        } else if (run->parsed()) {
            sokofm::run_experiment(config, log);
        } else if (show_config->parsed()) {
            std::cout << sokofm::config_to_json(config);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
