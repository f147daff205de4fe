#include "adabo/bench/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "adabo/bench/report_io.hpp"
#include "adabo/stats.hpp"

namespace adabo::bench {

namespace {

std::string run_file_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "trace_run%03zu.csv", k);
    return buf;
}

std::vector<BatchEntry> batch(const ExperimentConfig& config, Variant variant) {
    const OptimizationConfig base = config.optimization_config(variant, config.base_seed);
    return run_batch_with(config.runs, config.base_seed, config.jobs, [&](std::uint64_t seed) {
        OptimizationConfig cfg = base;
        cfg.seed = seed;
        return config.run_one(cfg);
    });
}

void collect_failures(const std::vector<BatchEntry>& entries, Variant variant,
                      std::vector<std::string>& failures) {
    for (const auto& e : entries) {
        if (!e.ok()) {
            failures.push_back(to_string(variant) + " seed " + std::to_string(e.seed) + ": " +
                               e.error);
        }
    }
}

}  // namespace

const std::string& CommandOutput::file(const std::filesystem::path& rel) const {
    for (const auto& [path, content] : files) {
        if (path == rel) return content;
    }
    throw std::out_of_range("no output file " + rel.string());
}

CommandOutput cmd_run(const ExperimentConfig& config) {
    config.validate();
    CommandOutput out;
    for (Variant v : config.variants) {
        const auto entries = batch(config, v);
        const std::filesystem::path dir = to_string(v);
        for (std::size_t k = 0; k < entries.size(); ++k) {
            if (entries[k].ok()) out.files.emplace_back(dir / run_file_name(k), trace_csv(*entries[k].trace));
        }
        out.files.emplace_back(dir / "summary.csv", summary_csv(entries));
        collect_failures(entries, v, out.failures);
    }
    return out;
}

CommandOutput cmd_compare(const ExperimentConfig& config) {
    config.validate();
    if (config.variants.size() != 2) {
        throw ConfigError("compare needs exactly two variants", 0, "variants");
    }
    const Variant va = config.variants[0];
    const Variant vb = config.variants[1];
    // Both variants see the same run seeds.
    const auto runs_a = batch(config, va);
    const auto runs_b = batch(config, vb);

    CommandOutput out;
    collect_failures(runs_a, va, out.failures);
    collect_failures(runs_b, vb, out.failures);

    std::vector<double> best_a;
    std::vector<double> best_b;
    std::vector<std::uint64_t> seeds;
    for (std::size_t k = 0; k < runs_a.size(); ++k) {
        if (!runs_a[k].ok() || !runs_b[k].ok()) continue;
        seeds.push_back(runs_a[k].seed);
        best_a.push_back(runs_a[k].trace->best_y);
        best_b.push_back(runs_b[k].trace->best_y);
    }

    std::vector<double> score_a(best_a.size());
    std::vector<double> score_b(best_b.size());
    for (std::size_t i = 0; i < best_a.size(); ++i) {
        score_a[i] = -best_a[i];
        score_b[i] = -best_b[i];
    }

    nlohmann::ordered_json j;
    j["problem"] = to_string(config.problem);
    j["mode"] = to_string(config.mode());
    j["n_runs"] = seeds.size();
    j["score_convention"] = "negated_final_best";
    try {
        const ComparisonReport report =
            compare(score_a, score_b, to_string(va), to_string(vb));
        const nlohmann::ordered_json stats = comparison_json(report);
        for (const auto& [key, value] : stats.items()) j[key] = value;
        j["favors"] = report.cliffs_delta > 0.0   ? report.label_a
                      : report.cliffs_delta < 0.0 ? report.label_b
                                                  : "neither";
        if (report.cliffs_delta <= 0.0 && va == Variant::adaptive && vb == Variant::original) {
            out.notes.push_back("finding: Cliff's delta does not favor the adaptive variant (" +
                                format_number(report.cliffs_delta) + ")");
        }
    } catch (const std::exception& e) {
        j["label_a"] = to_string(va);
        j["label_b"] = to_string(vb);
        for (const char* key : {"t_stat", "p_value", "df", "cohens_d", "hedges_g", "hedges_d",
                                "cliffs_delta"}) {
            j[key] = nullptr;
        }
        j["error"] = e.what();
        out.notes.push_back(std::string("statistics undefined: ") + e.what());
    }
    j["seeds"] = seeds;
    j["final_best_a"] = best_a;
    j["final_best_b"] = best_b;
    j["failures"] = out.failures;
    out.files.emplace_back("compare.json", j.dump(2) + "\n");
    return out;
}

CommandOutput cmd_stability(const ExperimentConfig& config) {
    config.validate();
    StabilityTable table;
    const StabilitySeeds seeds{config.base_seed, config.base_seed + config.stability_seed_offset};
    for (Variant v : config.variants) {
        const OptimizationConfig base = config.optimization_config(v, config.base_seed);
        const StabilityTable part = stability_check(
            base, [&](const OptimizationConfig& cfg) { return config.run_one(cfg); },
            config.run_counts, seeds, config.jobs);
        table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
    }
    CommandOutput out;
    out.files.emplace_back("stability.csv", stability_csv(table));
    return out;
}

CommandOutput cmd_tune(const ExperimentConfig& config) {
    config.validate();
    if (config.problem == Problem::multi_decoupled) {
        throw ConfigError("tune supports scalar problems only", 0, "problem");
    }
    const OptimizationConfig inner = config.optimization_config(Variant::original, config.base_seed);
    const TunedHyperparameters tuned =
        tune_kernel_hyperparameters(config.tune_outer_iterations, inner, config.scalar_objective());

    nlohmann::ordered_json j;
    j["variance"] = tuned.variance;
    j["lengthscale"] = tuned.lengthscale;
    j["score"] = tuned.score;
    auto trials = nlohmann::ordered_json::array();
    for (const auto& t : tuned.trials) {
        nlohmann::ordered_json row;
        row["variance"] = t.variance;
        row["lengthscale"] = t.lengthscale;
        row["score"] = std::isfinite(t.score) ? nlohmann::ordered_json(t.score)
                                              : nlohmann::ordered_json(nullptr);
        trials.push_back(row);
    }
    j["trials"] = trials;

    CommandOutput out;
    out.files.emplace_back("tune.json", j.dump(2) + "\n");
    return out;
}

void write_outputs(const CommandOutput& output, const std::filesystem::path& out_dir) {
    for (const auto& [rel, content] : output.files) {
        const auto path = out_dir / rel;
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw OutputError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw OutputError("cannot write " + path.string());
        f << content;
        if (!f) throw OutputError("write failed for " + path.string());
    }
}

}  // namespace adabo::bench
