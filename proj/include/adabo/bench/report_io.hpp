#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "adabo/optimizer.hpp"
#include "adabo/stats.hpp"

namespace adabo::bench {

/// Nine significant digits, '.' decimal point, locale independent.
std::string format_number(double v);

/// Columns: iteration,x,y,best_so_far,offset,jitter,combined_value. Multi-
/// dimensional x is joined with ';'.
std::string trace_csv(const RunTrace& trace);

/// Per-run convergence table: best_so_far per record, its first difference
/// (empty on the first row) and the cumulative fraction of the budget.
std::string summary_csv(const std::vector<BatchEntry>& runs);

/// Columns: variant,mode,run_count,t_stat,p_value.
std::string stability_csv(const StabilityTable& table);

nlohmann::ordered_json comparison_json(const ComparisonReport& report);

}  // namespace adabo::bench
