#include "poolbp/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "poolbp/errors.hpp"

namespace poolbp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    // GCC 11 lacks floating-point from_chars.
    std::istringstream in(t);
    in >> value;
    if (t.empty() || !in || !in.eof()) throw ValidationError(key + ": '" + text + "' is not a number");
  } else {
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
      throw ValidationError(key + ": '" + text + "' is not a non-negative integer");
    }
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ValidationError(key + ": '" + text + "' is not a boolean");
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "table") return OutputFormat::Table;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ValidationError("unknown output format '" + name + "' (expected table, csv or json)");
}

std::string canonical_key(std::string key) {
  key = trim(key);
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  for (auto& c : key) {
    c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return key;
}

ConfigMap parse_config(std::istream& in) {
  ConfigMap out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = canonical_key(line.substr(0, eq));
    if (key.empty()) throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigMap load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_config(in);
}

ConfigMap merge_config(ConfigMap base, const ConfigMap& overrides) {
  for (const auto& [k, v] : overrides) base[canonical_key(k)] = v;
  return base;
}

std::vector<std::uint32_t> parse_index_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    if (auto dash = item.find('-'); dash != std::string::npos && dash > 0) {
      const auto lo = parse_number<std::uint32_t>("range", item.substr(0, dash));
      const auto hi = parse_number<std::uint32_t>("range", item.substr(dash + 1));
      if (hi < lo) throw ValidationError("descending range '" + item + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_number<std::uint32_t>("index list", item));
    }
  }
  return out;
}

ExperimentPlan plan_from_config(const ConfigMap& raw) {
  ConfigMap settings;
  for (const auto& [k, v] : raw) settings[canonical_key(k)] = v;

  static const std::set<std::string> known = {
      "q",     "ka",          "kb",          "kab",     "design",  "count-a", "count-b",
      "bernoulli", "sensitivity", "specificity", "prior-a", "prior-b", "reps",    "seed",
      "eps",   "max-iter",    "threads",     "format",  "out",     "k",       "counts"};
  for (const auto& [k, v] : settings) {
    if (!known.contains(k)) throw ValidationError("unknown setting '" + k + "'");
  }

  ExperimentPlan plan;
  ExperimentConfig& c = plan.config;
  auto has = [&](const char* k) { return settings.contains(k); };
  auto get = [&](const char* k) { return settings.at(k); };

  if (has("q")) c.q = parse_number<std::uint32_t>("q", get("q"));
  if (has("ka")) c.k_a = parse_index_list(get("ka"));
  if (has("kb")) c.k_b = parse_index_list(get("kb"));
  if (has("kab")) c.k_ab = parse_index_list(get("kab"));
  if (has("design")) c.design_path = get("design");
  if (has("count-a")) c.count_a = parse_number<std::size_t>("count-a", get("count-a"));
  if (has("count-b")) c.count_b = parse_number<std::size_t>("count-b", get("count-b"));
  if (has("bernoulli")) c.bernoulli = parse_bool("bernoulli", get("bernoulli"));
  if (has("sensitivity")) c.noise.sensitivity = parse_number<double>("sensitivity", get("sensitivity"));
  if (has("specificity")) c.noise.specificity = parse_number<double>("specificity", get("specificity"));
  if (has("prior-a")) c.priors.p_a = parse_number<double>("prior-a", get("prior-a"));
  if (has("prior-b")) c.priors.p_b = parse_number<double>("prior-b", get("prior-b"));
  if (has("reps")) c.replications = parse_number<std::size_t>("reps", get("reps"));
  if (has("seed")) c.seed = parse_number<std::uint64_t>("seed", get("seed"));
  if (has("eps")) c.bp.epsilon = parse_number<double>("eps", get("eps"));
  if (has("max-iter")) c.bp.max_iterations = parse_number<int>("max-iter", get("max-iter"));
  if (has("threads")) c.threads = parse_number<unsigned>("threads", get("threads"));
  if (has("format")) plan.format = parse_format(trim(get("format")));
  if (has("out")) plan.out = get("out");
  if (has("k")) plan.grid_k = parse_index_list(get("k"));
  if (has("counts")) {
    for (auto v : parse_index_list(get("counts"))) plan.grid_counts.push_back(v);
  }

  const bool single = has("ka") || has("kb") || has("kab") || has("design") || has("count-a") ||
                      has("count-b") || has("bernoulli");
  const bool grid = has("k") || has("counts");
  if (single && grid) {
    throw ValidationError("k/counts (sweep) cannot be combined with ka/kb/kab/design/count settings");
  }
  if (!single) {
    if (plan.grid_k.empty()) plan.grid_k = {1, 2, 3, 4, 5, 6};
    if (plan.grid_counts.empty()) plan.grid_counts = {2, 4, 6, 8, 10, 12};
    for (auto k : plan.grid_k) {
      if (k > c.q) throw ValidationError("sweep k = " + std::to_string(k) + " exceeds q");
    }
  }
  c.validate();
  return plan;
}

}  // namespace poolbp
