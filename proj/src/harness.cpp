#include "poolbp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "poolbp/errors.hpp"
#include "poolbp/field.hpp"
#include "poolbp/matrix_io.hpp"

namespace poolbp {

std::vector<Index> rank_items(const Marginals& marginals, DefectType type) {
  const auto prob = type == DefectType::A ? marginals.defective_a() : marginals.defective_b();
  std::vector<Index> order(prob.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return prob[i] > prob[j]; });
  return order;
}

std::size_t worst_rank(const std::vector<Index>& ranking, const GroundTruth& truth, DefectType type) {
  const auto& x = type == DefectType::A ? truth.x_a : truth.x_b;
  if (ranking.size() != x.size()) throw ValidationError("ranking and ground truth sizes differ");
  std::size_t worst = 0;
  for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
    if (x[ranking[pos]]) worst = pos + 1;
  }
  return worst;
}

std::size_t order_statistic_quantile(std::vector<std::size_t> values, double alpha) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("quantile level must lie in (0, 1]");
  // The small slack absorbs representation error, e.g. 0.95 * 200.
  const double target = std::ceil(alpha * static_cast<double>(values.size()) - 1e-9);
  const auto rank = std::clamp<std::size_t>(static_cast<std::size_t>(target), 1, values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  return values[rank - 1];
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw ValidationError("replications must be at least 1");
  noise.validate();
  priors.validate();
  bp.validate();
  if (!design_path) {
    if (!is_prime(q)) throw ValidationError("q = " + std::to_string(q) + " is not prime");
  }
}

PoolingDesign ExperimentConfig::make_design() const {
  if (design_path) return import_design(*design_path);
  return build_design(q, k_a, k_b, k_ab);
}

RankRecord run_replication(const PoolingDesign& design, const ExperimentConfig& config, std::size_t rep) {
  RankRecord record;
  record.rep = rep;
  try {
    Rng rng = Rng::for_replication(config.seed, rep);
    const std::size_t n = design.n_items();
    const GroundTruth truth = config.bernoulli ? plant_bernoulli(n, config.priors, rng)
                                               : plant_fixed(n, config.count_a, config.count_b, rng);
    const Observations obs = observe(design, truth, config.noise, rng);
    const BpResult bp = run_bp(design, obs, config.priors, config.noise, config.bp);
    record.converged = bp.converged;
    record.iterations = bp.iterations;
    record.worst_rank_a = worst_rank(rank_items(bp.marginals, DefectType::A), truth, DefectType::A);
    record.worst_rank_b = worst_rank(rank_items(bp.marginals, DefectType::B), truth, DefectType::B);
  } catch (const std::exception& e) {
    record.error = e.what();
  }
  return record;
}

RankSummary summarize(const std::vector<RankRecord>& records) {
  RankSummary summary;
  summary.replications = records.size();
  std::vector<std::size_t> ranks_a;
  std::vector<std::size_t> ranks_b;
  std::size_t converged = 0;
  double iterations = 0.0;
  for (const auto& r : records) {
    if (r.error) {
      ++summary.failures;
      continue;
    }
    if (r.converged) ++converged;
    iterations += r.iterations;
    if (r.worst_rank_a > 0) ranks_a.push_back(r.worst_rank_a);
    if (r.worst_rank_b > 0) ranks_b.push_back(r.worst_rank_b);
  }
  auto fill = [](TypeSummary& t, const std::vector<std::size_t>& ranks) {
    t.included = ranks.size();
    if (!ranks.empty()) {
      t.q95 = order_statistic_quantile(ranks, 0.95);
      t.q99 = order_statistic_quantile(ranks, 0.99);
    }
  };
  fill(summary.a, ranks_a);
  fill(summary.b, ranks_b);
  const std::size_t decoded = records.size() - summary.failures;
  if (decoded > 0) {
    summary.convergence_rate = static_cast<double>(converged) / static_cast<double>(decoded);
    summary.mean_iterations = iterations / static_cast<double>(decoded);
  }
  return summary;
}

ExperimentResult run_experiment(const PoolingDesign& design, const ExperimentConfig& config) {
  config.validate();
  design.validate();
  if (!config.bernoulli && (config.count_a > design.n_items() || config.count_b > design.n_items())) {
    throw ValidationError("defective counts exceed the number of items");
  }
  ExperimentResult result;
  result.records.resize(config.replications);

  unsigned workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(config.replications));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t rep = next++; rep < config.replications; rep = next++) {
      result.records[rep] = run_replication(design, config, rep);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  result.summary = summarize(result.records);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_experiment(config.make_design(), config);
}

std::vector<GridCell> run_grid(const ExperimentConfig& base, const std::vector<std::uint32_t>& ks,
                               const std::vector<std::size_t>& counts) {
  base.validate();
  std::vector<GridCell> cells;
  for (auto k : ks) {
    const PoolingDesign design = build_split_design(base.q, k);
    for (auto count : counts) {
      ExperimentConfig cfg = base;
      cfg.count_a = count;
      cfg.count_b = count;
      cells.push_back({k, design.m_a.n_rows(), design.m_ab.n_rows(), count, run_experiment(design, cfg)});
    }
  }
  return cells;
}

}  // namespace poolbp
