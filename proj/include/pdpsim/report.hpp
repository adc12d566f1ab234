#pragma once

#include <string>
#include <vector>

namespace pdpsim {

/// Merge summary.json files into a human-readable table, pooling rows that
/// share an engine and config hash (same experiment, different seeds) with
/// combined standard errors. Optionally writes the same table as CSV.
/// Throws on unknown schema versions.
std::string merge_report(const std::vector<std::string>& summary_paths,
                         const std::string& csv_out_path = "");

}  // namespace pdpsim
