#include "adabo/bench/report_io.hpp"

#include <charconv>
#include <sstream>

namespace adabo::bench {

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, ptr);
}

std::string trace_csv(const RunTrace& trace) {
    std::ostringstream out;
    out << "iteration,x,y,best_so_far,offset,jitter,combined_value\n";
    for (const auto& r : trace.records) {
        out << r.iteration << ',';
        for (std::size_t j = 0; j < r.x.size(); ++j) {
            if (j > 0) out << ';';
            out << format_number(r.x[j]);
        }
        out << ',' << format_number(r.y) << ',' << format_number(r.best_so_far) << ','
            << format_number(r.offset) << ',' << format_number(r.jitter) << ','
            << format_number(r.combined_value) << '\n';
    }
    return out.str();
}

std::string summary_csv(const std::vector<BatchEntry>& runs) {
    std::ostringstream out;
    out << "run,seed,iteration,best_so_far,improvement_rate,cumulative_distribution\n";
    for (std::size_t k = 0; k < runs.size(); ++k) {
        if (!runs[k].ok()) continue;
        const auto& records = runs[k].trace->records;
        std::vector<double> best;
        best.reserve(records.size());
        for (const auto& r : records) best.push_back(r.best_so_far);
        const auto rate = best.size() >= 2 ? improvement_rate(best) : std::vector<double>{};
        const auto cdf = cumulative_distribution(best.size());
        for (std::size_t i = 0; i < best.size(); ++i) {
            out << k << ',' << runs[k].seed << ',' << records[i].iteration << ','
                << format_number(best[i]) << ',';
            if (i > 0) out << format_number(rate[i - 1]);
            out << ',' << format_number(cdf[i]) << '\n';
        }
    }
    return out.str();
}

std::string stability_csv(const StabilityTable& table) {
    std::ostringstream out;
    out << "variant,mode,run_count,t_stat,p_value\n";
    for (const auto& r : table.rows) {
        out << r.variant << ',' << r.mode << ',' << r.run_count << ',' << format_number(r.t_stat)
            << ',' << format_number(r.p_value) << '\n';
    }
    return out.str();
}

nlohmann::ordered_json comparison_json(const ComparisonReport& r) {
    nlohmann::ordered_json j;
    j["label_a"] = r.label_a;
    j["label_b"] = r.label_b;
    j["n_a"] = r.n_a;
    j["n_b"] = r.n_b;
    j["t_stat"] = r.t_stat;
    j["p_value"] = r.p_value;
    j["df"] = r.df;
    j["cohens_d"] = r.cohens_d;
    j["hedges_g"] = r.hedges_g;
    j["hedges_d"] = r.hedges_g;
    j["cliffs_delta"] = r.cliffs_delta;
    return j;
}

}  // namespace adabo::bench
