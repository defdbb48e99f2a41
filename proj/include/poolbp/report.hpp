#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "poolbp/config.hpp"
#include "poolbp/harness.hpp"

namespace poolbp {

// Columns: rep, worst_rank_A, worst_rank_B, converged, iterations, status.
// status is "ok" or "failed: <reason>".
void write_records_csv(std::ostream& out, const std::vector<RankRecord>& records);
void write_summary_table(std::ostream& out, const RankSummary& summary);

nlohmann::json to_json(const RankSummary& summary);
nlohmann::json to_json(const RankRecord& record);
nlohmann::json to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& j);

/// Writes one experiment into `dir` (created if needed):
///   table -> summary.txt
///   csv   -> records.csv, summary.txt
///   json  -> results.json
/// Throws IoError if a file cannot be written.
void emit_results(const ExperimentResult& result, OutputFormat format, const std::filesystem::path& dir);

/// Summary grid: one row pair (A, B) per design, one 99%/95% column pair
/// per defective count.
void write_grid_table(std::ostream& out, const std::vector<GridCell>& cells);
void write_grid_csv(std::ostream& out, const std::vector<GridCell>& cells);
nlohmann::json to_json(const std::vector<GridCell>& cells);

/// Sweep output into `dir`: the grid summary in the chosen format plus one
/// records CSV per cell (k<k>_count<c>.csv).
void emit_grid(const std::vector<GridCell>& cells, OutputFormat format, const std::filesystem::path& dir);

/// Per-item posterior dump for a single decoded replication.
void write_marginals_csv(std::ostream& out, const Marginals& marginals, const GroundTruth* truth);
nlohmann::json marginals_to_json(const Marginals& marginals, const GroundTruth* truth);

}  // namespace poolbp
