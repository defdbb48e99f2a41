#include "poolbp/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "poolbp/errors.hpp"

namespace poolbp {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<RankRecord>& records) {
  out << "rep,worst_rank_A,worst_rank_B,converged,iterations,status\n";
  for (const auto& r : records) {
    out << r.rep << ',' << r.worst_rank_a << ',' << r.worst_rank_b << ',' << (r.converged ? 1 : 0)
        << ',' << r.iterations << ',' << (r.error ? csv_escape("failed: " + *r.error) : "ok") << '\n';
  }
}

void write_summary_table(std::ostream& out, const RankSummary& s) {
  out << "replications      " << s.replications << " (failed " << s.failures << ")\n";
  out << "convergence rate  " << std::fixed << std::setprecision(4) << s.convergence_rate << '\n';
  out << "mean iterations   " << std::setprecision(2) << s.mean_iterations << '\n';
  out.unsetf(std::ios::floatfield);
  out << "type  99%  95%  included\n";
  out << "A     " << std::setw(4) << std::left << s.a.q99 << ' ' << std::setw(4) << s.a.q95 << ' '
      << s.a.included << '\n';
  out << "B     " << std::setw(4) << s.b.q99 << ' ' << std::setw(4) << s.b.q95 << ' ' << s.b.included
      << '\n';
  out << std::right;
}

nlohmann::json to_json(const RankSummary& s) {
  auto type = [](const TypeSummary& t) {
    return nlohmann::json{{"q95", t.q95}, {"q99", t.q99}, {"included", t.included}};
  };
  return {{"A", type(s.a)},
          {"B", type(s.b)},
          {"replications", s.replications},
          {"failures", s.failures},
          {"convergence_rate", s.convergence_rate},
          {"mean_iterations", s.mean_iterations}};
}

nlohmann::json to_json(const RankRecord& r) {
  nlohmann::json j{{"rep", r.rep},
                   {"worst_rank_A", r.worst_rank_a},
                   {"worst_rank_B", r.worst_rank_b},
                   {"converged", r.converged},
                   {"iterations", r.iterations}};
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : result.records) records.push_back(to_json(r));
  return {{"summary", to_json(result.summary)}, {"records", std::move(records)}};
}

ExperimentResult result_from_json(const nlohmann::json& j) {
  try {
    ExperimentResult result;
    const auto& s = j.at("summary");
    auto type = [](const nlohmann::json& t) {
      return TypeSummary{t.at("q95").get<std::size_t>(), t.at("q99").get<std::size_t>(),
                         t.at("included").get<std::size_t>()};
    };
    result.summary.a = type(s.at("A"));
    result.summary.b = type(s.at("B"));
    result.summary.replications = s.at("replications").get<std::size_t>();
    result.summary.failures = s.at("failures").get<std::size_t>();
    result.summary.convergence_rate = s.at("convergence_rate").get<double>();
    result.summary.mean_iterations = s.at("mean_iterations").get<double>();
    for (const auto& r : j.at("records")) {
      RankRecord rec;
      rec.rep = r.at("rep").get<std::size_t>();
      rec.worst_rank_a = r.at("worst_rank_A").get<std::size_t>();
      rec.worst_rank_b = r.at("worst_rank_B").get<std::size_t>();
      rec.converged = r.at("converged").get<bool>();
      rec.iterations = r.at("iterations").get<int>();
      if (r.contains("error") && !r.at("error").is_null()) rec.error = r.at("error").get<std::string>();
      result.records.push_back(std::move(rec));
    }
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed results JSON: ") + e.what());
  }
}

void emit_results(const ExperimentResult& result, OutputFormat format, const std::filesystem::path& dir) {
  prepare_dir(dir);
  if (format == OutputFormat::Json) {
    const auto path = dir / "results.json";
    auto out = open_out(path);
    out << to_json(result).dump(2) << '\n';
    finish(out, path);
    return;
  }
  if (format == OutputFormat::Csv) {
    const auto path = dir / "records.csv";
    auto out = open_out(path);
    write_records_csv(out, result.records);
    finish(out, path);
  }
  const auto path = dir / "summary.txt";
  auto out = open_out(path);
  write_summary_table(out, result.summary);
  finish(out, path);
}

void write_grid_table(std::ostream& out, const std::vector<GridCell>& cells) {
  std::vector<std::size_t> counts;
  std::map<std::uint32_t, std::map<std::size_t, const GridCell*>> by_design;
  for (const auto& c : cells) {
    if (std::find(counts.begin(), counts.end(), c.count) == counts.end()) counts.push_back(c.count);
    by_design[c.k][c.count] = &c;
  }
  std::sort(counts.begin(), counts.end());

  out << std::left << std::setw(26) << "# of defectives";
  for (auto n : counts) out << '|' << std::setw(7) << n << std::setw(7) << ' ';
  out << '\n' << std::setw(26) << "design / screening prob.";
  for (std::size_t i = 0; i < counts.size(); ++i) out << '|' << std::setw(7) << "99%" << std::setw(7) << "95%";
  out << '\n';
  for (const auto& [k, row] : by_design) {
    const GridCell& any = *row.begin()->second;
    std::ostringstream label_a;
    std::ostringstream label_b;
    label_a << "(" << k << ") m_A=m_B=" << any.m_individual;
    label_b << "    m_AB=" << any.m_joint;
    for (int t = 0; t < 2; ++t) {
      out << std::setw(26) << (t == 0 ? label_a.str() : label_b.str());
      for (auto n : counts) {
        auto it = row.find(n);
        if (it == row.end()) {
          out << '|' << std::setw(14) << ' ';
          continue;
        }
        const auto& ts = t == 0 ? it->second->result.summary.a : it->second->result.summary.b;
        const char* tag = t == 0 ? "A:" : "B:";
        out << '|' << std::setw(7) << (tag + std::to_string(ts.q99)) << std::setw(7)
            << (tag + std::to_string(ts.q95));
      }
      out << '\n';
    }
  }
  out << std::right;
}

void write_grid_csv(std::ostream& out, const std::vector<GridCell>& cells) {
  out << "k,m_A,m_AB,count,q99_A,q95_A,q99_B,q95_B,convergence_rate,failures\n";
  for (const auto& c : cells) {
    const auto& s = c.result.summary;
    out << c.k << ',' << c.m_individual << ',' << c.m_joint << ',' << c.count << ',' << s.a.q99 << ','
        << s.a.q95 << ',' << s.b.q99 << ',' << s.b.q95 << ',' << s.convergence_rate << ',' << s.failures
        << '\n';
  }
}

nlohmann::json to_json(const std::vector<GridCell>& cells) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json j = to_json(c.result);
    j["k"] = c.k;
    j["m_A"] = c.m_individual;
    j["m_AB"] = c.m_joint;
    j["count"] = c.count;
    arr.push_back(std::move(j));
  }
  return arr;
}

void emit_grid(const std::vector<GridCell>& cells, OutputFormat format, const std::filesystem::path& dir) {
  prepare_dir(dir);
  for (const auto& c : cells) {
    const auto path = dir / ("k" + std::to_string(c.k) + "_count" + std::to_string(c.count) + ".csv");
    auto out = open_out(path);
    write_records_csv(out, c.result.records);
    finish(out, path);
  }
  std::filesystem::path path;
  switch (format) {
    case OutputFormat::Table: path = dir / "summary.txt"; break;
    case OutputFormat::Csv: path = dir / "summary.csv"; break;
    case OutputFormat::Json: path = dir / "results.json"; break;
  }
  auto out = open_out(path);
  switch (format) {
    case OutputFormat::Table: write_grid_table(out, cells); break;
    case OutputFormat::Csv: write_grid_csv(out, cells); break;
    case OutputFormat::Json: out << to_json(cells).dump(2) << '\n'; break;
  }
  finish(out, path);
}

void write_marginals_csv(std::ostream& out, const Marginals& m, const GroundTruth* truth) {
  out << "item,p00,p01,p10,p11,p_A,p_B";
  if (truth) out << ",true_A,true_B";
  out << '\n' << std::setprecision(17);
  for (std::size_t c = 0; c < m.n_items(); ++c) {
    const auto& j = m.joint[c];
    out << c << ',' << j[0] << ',' << j[1] << ',' << j[2] << ',' << j[3] << ',' << m.prob_a(c) << ','
        << m.prob_b(c);
    if (truth) out << ',' << int{truth->x_a[c]} << ',' << int{truth->x_b[c]};
    out << '\n';
  }
}

nlohmann::json marginals_to_json(const Marginals& m, const GroundTruth* truth) {
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t c = 0; c < m.n_items(); ++c) {
    nlohmann::json j{{"item", c},
                     {"joint", m.joint[c]},
                     {"p_A", m.prob_a(c)},
                     {"p_B", m.prob_b(c)}};
    if (truth) {
      j["true_A"] = truth->x_a[c];
      j["true_B"] = truth->x_b[c];
    }
    items.push_back(std::move(j));
  }
  return items;
}

}  // namespace poolbp
