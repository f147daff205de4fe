// adabo: experiment harness for adaptive Bayesian optimization.
//
//   adabo run        --config exp.cfg --out results/
//   adabo compare    --problem multi_combined --variant adaptive,original --runs 30
//   adabo stability  --config exp.cfg
//   adabo tune       --problem robust_1d --seed 7
//
// Exit codes: 0 success, 1 configuration error, 2 runtime or numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "adabo/bench/commands.hpp"
#include "adabo/bench/config.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::string> seed;
    std::optional<std::string> runs;
    std::optional<std::string> iters;
    std::optional<std::string> variant;
    std::optional<std::string> problem;
    std::optional<std::string> jobs;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "key = value config file");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "base seed");
    cmd->add_option("--runs", o.runs, "independent runs per variant");
    cmd->add_option("--iters", o.iters, "BayesOpt iterations per run");
    cmd->add_option("--variant", o.variant, "variant or comma-separated variants");
    cmd->add_option("--problem", o.problem,
                    "robust_1d | multi_combined | multi_decoupled | quadratic_test");
    cmd->add_option("--jobs", o.jobs, "worker threads");
}

adabo::bench::ExperimentConfig build_config(const Overrides& o) {
    using adabo::bench::set_config_value;
    adabo::bench::ExperimentConfig config =
        o.config_path.empty() ? adabo::bench::ExperimentConfig{}
                              : adabo::bench::load_config(o.config_path);
    if (o.problem) set_config_value(config, "problem", *o.problem);
    if (o.variant) set_config_value(config, "variants", *o.variant);
    if (o.seed) set_config_value(config, "base_seed", *o.seed);
    if (o.runs) set_config_value(config, "runs", *o.runs);
    if (o.iters) set_config_value(config, "iterations", *o.iters);
    if (o.jobs) set_config_value(config, "jobs", *o.jobs);
    if (o.out) set_config_value(config, "output_dir", *o.out);
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive Bayesian optimization benchmark harness"};
    app.require_subcommand(1);

    Overrides overrides;
    auto* run_cmd = app.add_subcommand("run", "run batches and write traces");
    auto* compare_cmd = app.add_subcommand("compare", "paired comparison of two variants");
    auto* stability_cmd = app.add_subcommand("stability", "stability check over run counts");
    auto* tune_cmd = app.add_subcommand("tune", "kernel hyperparameter meta-tuning");
    for (auto* cmd : {run_cmd, compare_cmd, stability_cmd, tune_cmd}) {
        add_common_flags(cmd, overrides);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    adabo::bench::ExperimentConfig config;
    try {
        config = build_config(overrides);
    } catch (const adabo::bench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        adabo::bench::CommandOutput output;
        if (run_cmd->parsed()) {
            output = adabo::bench::cmd_run(config);
        } else if (compare_cmd->parsed()) {
            output = adabo::bench::cmd_compare(config);
        } else if (stability_cmd->parsed()) {
            output = adabo::bench::cmd_stability(config);
        } else {
            output = adabo::bench::cmd_tune(config);
        }
        adabo::bench::write_outputs(output, config.output_dir);
        for (const auto& [path, content] : output.files) {
            std::cout << "wrote " << (std::filesystem::path(config.output_dir) / path).string()
                      << '\n';
        }
        for (const auto& note : output.notes) std::cout << note << '\n';
        for (const auto& failure : output.failures) std::cerr << "run failed: " << failure << '\n';
        return output.failures.empty() ? 0 : kExitRuntime;
    } catch (const adabo::bench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
