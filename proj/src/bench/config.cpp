#include "adabo/bench/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace adabo::bench {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ConfigError("key '" + std::string(key) + "': expected a finite number, got '" +
                              std::string(v) + "'",
                          0, std::string(key));
    }
    return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || v.empty()) {
        throw ConfigError("key '" + std::string(key) + "': expected a non-negative integer, got '" +
                              std::string(v) + "'",
                          0, std::string(key));
    }
    return out;
}

std::size_t parse_size(std::string_view key, std::string_view v) {
    return static_cast<std::size_t>(parse_u64(key, v));
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

std::string to_string(Problem p) {
    switch (p) {
        case Problem::robust_1d: return "robust_1d";
        case Problem::multi_combined: return "multi_combined";
        case Problem::multi_decoupled: return "multi_decoupled";
        case Problem::quadratic_test: return "quadratic_test";
    }
    return "unknown";
}

Problem parse_problem(std::string_view name) {
    for (Problem p : {Problem::robust_1d, Problem::multi_combined, Problem::multi_decoupled,
                      Problem::quadratic_test}) {
        if (name == to_string(p)) return p;
    }
    throw ConfigError("unknown problem '" + std::string(name) + "'", 0, "problem");
}

Variant parse_variant(std::string_view name) {
    if (name == "adaptive") return Variant::adaptive;
    if (name == "original") return Variant::original;
    throw ConfigError("unknown variant '" + std::string(name) + "'", 0, "variants");
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
    const std::string k(key);
    if (k == "problem") {
        c.problem = parse_problem(value);
    } else if (k == "variants") {
        c.variants.clear();
        for (auto v : split_list(value)) c.variants.push_back(parse_variant(v));
    } else if (k == "iterations") {
        c.iterations = parse_size(key, value);
    } else if (k == "initial_design_size") {
        c.initial_design_size = parse_size(key, value);
    } else if (k == "runs") {
        c.runs = parse_size(key, value);
    } else if (k == "base_seed") {
        c.base_seed = parse_u64(key, value);
    } else if (k == "dim") {
        c.dim = parse_size(key, value);
    } else if (k == "bounds.lower") {
        c.lower = parse_double(key, value);
    } else if (k == "bounds.upper") {
        c.upper = parse_double(key, value);
    } else if (k == "kernel.variance") {
        c.kernel_variance = parse_double(key, value);
    } else if (k == "kernel.lengthscale") {
        c.kernel_lengthscale = parse_double(key, value);
    } else if (k == "kernel.noise_variance") {
        if (value == "auto") {
            c.noise_variance.reset();
        } else {
            c.noise_variance = parse_double(key, value);
        }
    } else if (k == "kernel.diag_jitter") {
        c.diag_jitter = parse_double(key, value);
    } else if (k == "gp.mean_constant") {
        c.mean_constant = parse_double(key, value);
    } else if (k == "schedule.constant_value") {
        c.schedule.constant_value = parse_double(key, value);
    } else if (k == "schedule.conditioning_decay") {
        c.schedule.conditioning_decay = parse_double(key, value);
    } else if (k == "schedule.jitter_base") {
        c.schedule.jitter_base = parse_double(key, value);
    } else if (k == "schedule.jitter_decay") {
        c.schedule.jitter_decay = parse_double(key, value);
    } else if (k == "objective.threshold") {
        c.objective.threshold = parse_double(key, value);
    } else if (k == "objective.penalty_weight") {
        c.objective.penalty_weight = parse_double(key, value);
    } else if (k == "objective.sample_count") {
        c.objective.sample_count = parse_size(key, value);
    } else if (k == "objective.demand_sd") {
        c.objective.demand_sd = parse_double(key, value);
    } else if (k == "acquisition.candidates") {
        c.acquisition.candidates = parse_size(key, value);
    } else if (k == "acquisition.refine_top") {
        c.acquisition.refine_top = parse_size(key, value);
    } else if (k == "acquisition.refine_iterations") {
        c.acquisition.refine_iterations = parse_size(key, value);
    } else if (k == "stability.run_counts") {
        c.run_counts.clear();
        for (auto v : split_list(value)) c.run_counts.push_back(parse_size(key, v));
    } else if (k == "stability.seed_offset") {
        c.stability_seed_offset = parse_u64(key, value);
    } else if (k == "tune.outer_iterations") {
        c.tune_outer_iterations = parse_size(key, value);
    } else if (k == "jobs") {
        c.jobs = parse_size(key, value);
    } else if (k == "output_dir") {
        if (value.empty()) throw ConfigError("key 'output_dir': empty path", 0, k);
        c.output_dir = std::string(value);
    } else {
        throw ConfigError("unknown key '" + k + "'", 0, k);
    }
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& what, const std::string& key) {
        throw ConfigError(what, 0, key);
    };
    if (variants.empty()) fail("at least one variant is required", "variants");
    if (iterations < 1) fail("iterations must be >= 1", "iterations");
    if (initial_design_size < 1) fail("initial_design_size must be >= 1", "initial_design_size");
    if (runs < 1) fail("runs must be >= 1", "runs");
    if (dim < 1) fail("dim must be >= 1", "dim");
    if (problem != Problem::quadratic_test && dim != 1) {
        fail("problem " + to_string(problem) + " is one-dimensional", "dim");
    }
    if (!(lower < upper)) fail("bounds.lower must be below bounds.upper", "bounds.lower");
    if (run_counts.empty()) fail("stability.run_counts is empty", "stability.run_counts");
    std::size_t largest = 0;
    for (std::size_t n : run_counts) {
        if (n < 2) fail("every stability run count must be >= 2", "stability.run_counts");
        largest = std::max(largest, n);
    }
    if (stability_seed_offset < largest) {
        fail("stability.seed_offset must be >= the largest run count so batch seeds are disjoint",
             "stability.seed_offset");
    }
    if (tune_outer_iterations < 1) fail("tune.outer_iterations must be >= 1", "tune.outer_iterations");
    if (jobs < 1) fail("jobs must be >= 1", "jobs");
    auto positive = [&](double v, const char* key) {
        if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(key) + " must be positive", key);
    };
    auto non_negative = [&](double v, const char* key) {
        if (!(v >= 0.0) || !std::isfinite(v)) fail(std::string(key) + " must be non-negative", key);
    };
    positive(kernel_variance, "kernel.variance");
    positive(kernel_lengthscale, "kernel.lengthscale");
    if (noise_variance) non_negative(*noise_variance, "kernel.noise_variance");
    non_negative(diag_jitter, "kernel.diag_jitter");
    non_negative(schedule.conditioning_decay, "schedule.conditioning_decay");
    positive(schedule.jitter_base, "schedule.jitter_base");
    non_negative(schedule.jitter_decay, "schedule.jitter_decay");
    non_negative(objective.penalty_weight, "objective.penalty_weight");
    positive(objective.demand_sd, "objective.demand_sd");
    if (objective.sample_count < 1) fail("objective.sample_count must be >= 1", "objective.sample_count");
    if (acquisition.candidates < 1) fail("acquisition.candidates must be >= 1", "acquisition.candidates");
    try {
        optimization_config(variants.front(), base_seed).validate();
        objective_spec().validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what(), {});
    }
}

double ExperimentConfig::effective_noise_variance() const {
    if (noise_variance) return *noise_variance;
    return problem == Problem::quadratic_test ? 1e-8 : 1e-2;
}

Mode ExperimentConfig::mode() const {
    switch (problem) {
        case Problem::multi_combined: return Mode::combined_multi;
        case Problem::multi_decoupled: return Mode::decoupled_multi;
        default: return Mode::single;
    }
}

ObjectiveSpec ExperimentConfig::objective_spec() const {
    ObjectiveSpec spec = objective;
    spec.bounds.assign(dim, Interval{lower, upper});
    return spec;
}

OptimizationConfig ExperimentConfig::optimization_config(Variant variant, std::uint64_t seed) const {
    OptimizationConfig c;
    c.bounds.assign(dim, Interval{lower, upper});
    c.iterations = iterations;
    c.initial_design_size = initial_design_size;
    c.variant = variant;
    c.mode = mode();
    c.kernel = KernelParams{kernel_variance, kernel_lengthscale, effective_noise_variance(),
                            diag_jitter};
    c.mean_constant = mean_constant;
    c.schedule = schedule;
    c.acquisition = acquisition;
    c.seed = seed;
    return c;
}

ScalarObjective ExperimentConfig::scalar_objective() const {
    if (problem == Problem::quadratic_test) {
        return [](std::span<const double> x, std::uint64_t) {
            double acc = 0.0;
            for (double v : x) acc += (v - 1.0) * (v - 1.0);
            return acc;
        };
    }
    return make_objective(mode(), objective_spec());
}

RunTrace ExperimentConfig::run_one(const OptimizationConfig& config) const {
    if (problem == Problem::multi_decoupled) return run_decoupled(config, objective_spec());
    return run(config, scalar_objective());
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::map<std::string, std::size_t, std::less<>> key_lines;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value", line_no);
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key", line_no);
        }
        if (!key_lines.emplace(std::string(key), line_no).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                                  std::string(key) + "'",
                              line_no, std::string(key));
        }
        try {
            set_config_value(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what(), line_no, e.key());
        }
    }
    try {
        config.validate();
    } catch (const ConfigError& e) {
        const auto it = key_lines.find(e.key());
        if (it == key_lines.end()) throw;
        throw ConfigError("line " + std::to_string(it->second) + ": " + e.what(), it->second, e.key());
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    auto put = [&](std::string_view key, const std::string& value) {
        out << key << " = " << value << '\n';
    };
    auto num = [](double v) { return format_double(v); };
    auto join = [](const auto& items, auto fmt) {
        std::string s;
        for (const auto& item : items) {
            if (!s.empty()) s += ',';
            s += fmt(item);
        }
        return s;
    };

    put("problem", to_string(c.problem));
    put("variants", join(c.variants, [](Variant v) { return adabo::to_string(v); }));
    put("iterations", std::to_string(c.iterations));
    put("initial_design_size", std::to_string(c.initial_design_size));
    put("runs", std::to_string(c.runs));
    put("base_seed", std::to_string(c.base_seed));
    put("dim", std::to_string(c.dim));
    put("bounds.lower", num(c.lower));
    put("bounds.upper", num(c.upper));
    put("kernel.variance", num(c.kernel_variance));
    put("kernel.lengthscale", num(c.kernel_lengthscale));
    put("kernel.noise_variance", c.noise_variance ? num(*c.noise_variance) : "auto");
    put("kernel.diag_jitter", num(c.diag_jitter));
    put("gp.mean_constant", num(c.mean_constant));
    put("schedule.constant_value", num(c.schedule.constant_value));
    put("schedule.conditioning_decay", num(c.schedule.conditioning_decay));
    put("schedule.jitter_base", num(c.schedule.jitter_base));
    put("schedule.jitter_decay", num(c.schedule.jitter_decay));
    put("objective.threshold", num(c.objective.threshold));
    put("objective.penalty_weight", num(c.objective.penalty_weight));
    put("objective.sample_count", std::to_string(c.objective.sample_count));
    put("objective.demand_sd", num(c.objective.demand_sd));
    put("acquisition.candidates", std::to_string(c.acquisition.candidates));
    put("acquisition.refine_top", std::to_string(c.acquisition.refine_top));
    put("acquisition.refine_iterations", std::to_string(c.acquisition.refine_iterations));
    put("stability.run_counts",
        join(c.run_counts, [](std::size_t n) { return std::to_string(n); }));
    put("stability.seed_offset", std::to_string(c.stability_seed_offset));
    put("tune.outer_iterations", std::to_string(c.tune_outer_iterations));
    put("jobs", std::to_string(c.jobs));
    put("output_dir", c.output_dir);
    return out.str();
}

}  // namespace adabo::bench
