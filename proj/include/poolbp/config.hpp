#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poolbp/harness.hpp"

namespace poolbp {

enum class OutputFormat { Table, Csv, Json };

OutputFormat parse_format(const std::string& name);

// Flat key=value settings. Keys are the CLI flag names without leading
// dashes; underscores and dashes are interchangeable.
using ConfigMap = std::map<std::string, std::string>;

std::string canonical_key(std::string key);

/// One `key = value` per line; blank lines and text after `#` are ignored.
/// Throws ValidationError on a line without '='.
ConfigMap parse_config(std::istream& in);
ConfigMap load_config(const std::filesystem::path& path);

/// Entries of `overrides` replace those of `base`.
ConfigMap merge_config(ConfigMap base, const ConfigMap& overrides);

/// "0,1,2" -> {0, 1, 2}; "" -> {}; "3-6" expands to {3, 4, 5, 6}.
std::vector<std::uint32_t> parse_index_list(const std::string& text);

/// Everything the `experiment` command needs. A non-empty grid_k or
/// grid_counts selects a sweep over split designs; otherwise the single
/// design and counts in `config` are run.
struct ExperimentPlan {
  ExperimentConfig config;
  std::vector<std::uint32_t> grid_k;
  std::vector<std::size_t> grid_counts;
  OutputFormat format = OutputFormat::Table;
  std::optional<std::filesystem::path> out;

  bool is_grid() const { return !grid_k.empty(); }
};

/// Builds a plan from settings, rejecting unknown keys. With no design or
/// count keys at all, the plan is the full sweep k = 1..6 by counts
/// 2, 4, ..., 12 at q = 7.
ExperimentPlan plan_from_config(const ConfigMap& settings);

}  // namespace poolbp
