#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "poolbp/config.hpp"
#include "poolbp/errors.hpp"
#include "poolbp/harness.hpp"
#include "poolbp/report.hpp"

using namespace poolbp;

namespace {

Marginals from_probs(const std::vector<double>& pa, const std::vector<double>& pb) {
  Marginals m;
  for (std::size_t c = 0; c < pa.size(); ++c) {
    m.joint.push_back({(1 - pa[c]) * (1 - pb[c]), (1 - pa[c]) * pb[c], pa[c] * (1 - pb[c]), pa[c] * pb[c]});
  }
  return m;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("poolbp_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("rank_items") {
  const auto m = from_probs({0.2, 0.9, 0.5}, {0.5, 0.5, 0.5});
  CHECK(rank_items(m, DefectType::A) == std::vector<Index>{1, 2, 0});
  CHECK(rank_items(m, DefectType::B) == std::vector<Index>{0, 1, 2});
}

TEST_CASE("worst_rank") {
  GroundTruth t{{0, 1, 1, 0}, {0, 0, 0, 0}};
  CHECK(worst_rank({1, 2, 0, 3}, t, DefectType::A) == 2);
  CHECK(worst_rank({1, 0, 3, 2}, t, DefectType::A) == 4);
  CHECK(worst_rank({0, 1, 2, 3}, t, DefectType::B) == 0);
  CHECK_THROWS_AS(worst_rank({0, 1}, t, DefectType::A), ValidationError);
}

TEST_CASE("order statistic quantiles") {
  std::vector<std::size_t> v(200);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 200 - i;  // 1..200, shuffled order irrelevant
  CHECK(order_statistic_quantile(v, 0.95) == 190);
  CHECK(order_statistic_quantile(v, 0.99) == 198);
  CHECK(order_statistic_quantile(v, 1.0) == 200);
  CHECK(order_statistic_quantile({7}, 0.95) == 7);
  CHECK(order_statistic_quantile({3, 1, 2}, 0.5) == 2);
  CHECK_THROWS_AS(order_statistic_quantile({}, 0.5), ValidationError);
  CHECK_THROWS_AS(order_statistic_quantile({1}, 0.0), ValidationError);
  CHECK(order_statistic_quantile(v, 0.95) <= order_statistic_quantile(v, 0.99));
}

TEST_CASE("summaries skip failures and empty types") {
  std::vector<RankRecord> recs = {
      {0, 3, 0, true, 5, std::nullopt},
      {1, 7, 2, false, 200, std::nullopt},
      {2, 0, 0, false, 0, std::string("boom")},
  };
  const auto s = summarize(recs);
  CHECK(s.replications == 3);
  CHECK(s.failures == 1);
  CHECK(s.a.included == 2);
  CHECK(s.b.included == 1);
  CHECK(s.a.q99 == 7);
  CHECK(s.b.q95 == 2);
  CHECK(s.convergence_rate == 0.5);
  CHECK(s.mean_iterations == 102.5);
}

TEST_CASE("config parsing") {
  std::istringstream in("# comment\nq = 5\nka=0,1\n kab = 2-4 # trailing\n\nreps=10\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.at("q") == "5");
  CHECK(cfg.at("kab") == "2-4");
  std::istringstream bad("q 5\n");
  CHECK_THROWS_AS(parse_config(bad), ValidationError);

  CHECK(parse_index_list("") == std::vector<std::uint32_t>{});
  CHECK(parse_index_list("0, 2") == std::vector<std::uint32_t>{0, 2});
  CHECK(parse_index_list("3-6") == std::vector<std::uint32_t>{3, 4, 5, 6});
  CHECK_THROWS_AS(parse_index_list("6-3"), ValidationError);
  CHECK_THROWS_AS(parse_index_list("x"), ValidationError);

  CHECK(canonical_key("--Count_A") == "count-a");
  CHECK(parse_format("json") == OutputFormat::Json);
  CHECK_THROWS_AS(parse_format("xml"), ValidationError);
}

TEST_CASE("experiment plans") {
  SUBCASE("defaults to the full sweep") {
    const auto plan = plan_from_config({});
    CHECK(plan.is_grid());
    CHECK(plan.grid_k == std::vector<std::uint32_t>{1, 2, 3, 4, 5, 6});
    CHECK(plan.grid_counts == std::vector<std::size_t>{2, 4, 6, 8, 10, 12});
    CHECK(plan.config.q == 7);
    CHECK(plan.config.replications == 1000);
  }
  SUBCASE("single design with overrides") {
    const auto base = ConfigMap{{"q", "5"}, {"ka", "0"}, {"kb", "1"}, {"kab", "2,3,4"}, {"reps", "10"}};
    const auto plan = plan_from_config(merge_config(base, {{"reps", "20"}, {"count_a", "1"}}));
    CHECK_FALSE(plan.is_grid());
    CHECK(plan.config.replications == 20);
    CHECK(plan.config.count_a == 1);
    CHECK(plan.config.k_ab == PlaneSet{2, 3, 4});
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(plan_from_config({{"bogus", "1"}}), ValidationError);
    CHECK_THROWS_AS(plan_from_config({{"k", "3"}, {"ka", "0"}}), ValidationError);
    CHECK_THROWS_AS(plan_from_config({{"q", "6"}, {"ka", "0"}}), ValidationError);
    CHECK_THROWS_AS(plan_from_config({{"reps", "0"}, {"ka", "0"}}), ValidationError);
    CHECK_THROWS_AS(plan_from_config({{"sensitivity", "1.5"}, {"ka", "0"}}), ValidationError);
  }
}

TEST_CASE("records CSV") {
  std::ostringstream empty;
  write_records_csv(empty, {});
  CHECK(empty.str() == "rep,worst_rank_A,worst_rank_B,converged,iterations,status\n");

  std::vector<RankRecord> recs = {{0, 3, 4, true, 5, std::nullopt},
                                  {1, 1, 2, false, 200, std::nullopt},
                                  {2, 0, 0, false, 0, std::string("bad")}};
  std::ostringstream out;
  write_records_csv(out, recs);
  std::istringstream lines(out.str());
  std::vector<std::string> rows;
  for (std::string l; std::getline(lines, l);) rows.push_back(l);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1] == "0,3,4,1,5,ok");
  CHECK(rows[3].rfind("2,0,0,0,0,failed", 0) == 0);
}

TEST_CASE("JSON round trip") {
  ExperimentResult r;
  r.records = {{0, 3, 4, true, 5, std::nullopt}, {1, 9, 2, false, 200, std::string("x")}};
  r.summary = summarize(r.records);
  const auto back = result_from_json(nlohmann::json::parse(to_json(r).dump()));
  CHECK(back.records == r.records);
  CHECK(back.summary == r.summary);
}

TEST_CASE("emit_results writes the expected files") {
  ExperimentResult r;
  r.records = {{0, 1, 1, true, 3, std::nullopt}};
  r.summary = summarize(r.records);
  const auto dir = scratch_dir("emit");
  emit_results(r, OutputFormat::Csv, dir);
  CHECK(std::filesystem::exists(dir / "records.csv"));
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  emit_results(r, OutputFormat::Json, dir);
  std::ifstream js(dir / "results.json");
  CHECK(result_from_json(nlohmann::json::parse(js)).records == r.records);
  std::filesystem::remove_all(dir);

  const auto blocker = scratch_dir("blocker");
  std::ofstream(blocker.string()) << "file";
  CHECK_THROWS_AS(emit_results(r, OutputFormat::Csv, blocker / "sub"), IoError);
  std::filesystem::remove(blocker);
}

TEST_CASE("experiments are deterministic across thread counts") {
  ExperimentConfig cfg;
  cfg.q = 5;
  cfg.k_a = {0, 1};
  cfg.k_b = {0, 1};
  cfg.k_ab = {2, 3, 4};
  cfg.count_a = 3;
  cfg.count_b = 3;
  cfg.replications = 24;
  cfg.seed = 11;
  std::string reference;
  for (unsigned threads : {1u, 2u, 5u}) {
    cfg.threads = threads;
    std::ostringstream out;
    write_records_csv(out, run_experiment(cfg).records);
    if (reference.empty()) reference = out.str();
    CHECK(out.str() == reference);
  }
  cfg.seed = 12;
  std::ostringstream other;
  write_records_csv(other, run_experiment(cfg).records);
  CHECK(other.str() != reference);
}

TEST_CASE("experiment validation") {
  ExperimentConfig cfg;
  cfg.replications = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ValidationError);
  cfg.replications = 1;
  cfg.q = 2;
  cfg.k_a = {0};
  cfg.k_b = {0};
  cfg.k_ab = {1};
  cfg.count_a = 17;
  CHECK_THROWS_AS(run_experiment(cfg), ValidationError);
}

TEST_CASE("noiseless single defectives are ranked first") {
  ExperimentConfig cfg;
  cfg.q = 5;
  cfg.k_a = {0, 1};
  cfg.k_b = {0, 1};
  cfg.k_ab = {2, 3, 4};
  cfg.count_a = 1;
  cfg.count_b = 1;
  cfg.noise = NoiseModel::noiseless();
  cfg.replications = 20;
  const auto res = run_experiment(cfg);
  CHECK(res.summary.failures == 0);
  for (const auto& r : res.records) {
    CHECK(r.worst_rank_a == 1);
    CHECK(r.worst_rank_b == 1);
  }
}

TEST_CASE("grid sweep") {
  ExperimentConfig cfg;
  cfg.q = 3;
  cfg.replications = 5;
  const auto cells = run_grid(cfg, {1, 2}, {1, 2});
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].m_individual == 9);
  CHECK(cells[0].m_joint == 18);
  CHECK(cells[3].k == 2);
  CHECK(cells[3].count == 2);
  std::ostringstream table;
  write_grid_table(table, cells);
  CHECK(table.str().find("(2)") != std::string::npos);
}
