#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "poolbp/bp.hpp"
#include "poolbp/pooling.hpp"
#include "poolbp/sim.hpp"

namespace poolbp {

enum class DefectType { A, B };

/// Items ordered by posterior probability of being defective for `type`,
/// highest first; ties keep ascending item order.
std::vector<Index> rank_items(const Marginals& marginals, DefectType type);

/// 1-based position of the lowest-ranked true defective of `type`, or 0
/// when there are none.
std::size_t worst_rank(const std::vector<Index>& ranking, const GroundTruth& truth, DefectType type);

/// The ceil(alpha * R)-th smallest of R values. Throws on an empty sample
/// or alpha outside (0, 1].
std::size_t order_statistic_quantile(std::vector<std::size_t> values, double alpha);

struct ExperimentConfig {
  // Design: built from plane sets unless design_path is given.
  std::uint32_t q = 7;
  PlaneSet k_a = {0, 1, 2};
  PlaneSet k_b = {0, 1, 2};
  PlaneSet k_ab = {3, 4, 5, 6};
  std::optional<std::filesystem::path> design_path;

  // Planting: fixed counts per type, or Bernoulli draws at the priors.
  std::size_t count_a = 6;
  std::size_t count_b = 6;
  bool bernoulli = false;

  // The same channel generates the observations and is assumed by the decoder.
  NoiseModel noise{0.97, 0.99};
  Priors priors{0.002, 0.002};
  BpSettings bp{};

  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
  /// Loads design_path if set, otherwise stacks the plane sets.
  PoolingDesign make_design() const;
};

struct RankRecord {
  std::size_t rep = 0;
  std::size_t worst_rank_a = 0;
  std::size_t worst_rank_b = 0;
  bool converged = false;
  int iterations = 0;
  // Set when the replication aborted; ranks are then meaningless.
  std::optional<std::string> error;

  friend bool operator==(const RankRecord&, const RankRecord&) = default;
};

struct TypeSummary {
  std::size_t q95 = 0;
  std::size_t q99 = 0;
  // Replications that entered the quantiles for this type.
  std::size_t included = 0;

  friend bool operator==(const TypeSummary&, const TypeSummary&) = default;
};

struct RankSummary {
  TypeSummary a;
  TypeSummary b;
  std::size_t replications = 0;
  std::size_t failures = 0;
  double convergence_rate = 0.0;
  double mean_iterations = 0.0;

  friend bool operator==(const RankSummary&, const RankSummary&) = default;
};

struct ExperimentResult {
  RankSummary summary;
  std::vector<RankRecord> records;
};

/// Decodes one replication: plant, evaluate pools, corrupt, run BP, rank.
RankRecord run_replication(const PoolingDesign& design, const ExperimentConfig& config, std::size_t rep);

/// Aggregates records into quantiles. Failed replications and types with
/// no planted defectives are left out of the quantiles; non-converged
/// replications are kept.
RankSummary summarize(const std::vector<RankRecord>& records);

/// Runs all replications, in parallel when threads allow. Each replication
/// draws from its own stream keyed by (seed, rep), so records do not depend
/// on the thread count.
ExperimentResult run_experiment(const PoolingDesign& design, const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace poolbp

namespace poolbp {

/// One cell of a split-design sweep: design k at a given count of
/// defectives per type.
struct GridCell {
  std::uint32_t k = 0;
  std::size_t m_individual = 0;  // pools per individual type, k q^2
  std::size_t m_joint = 0;       // AB pools, (q - k) q^2
  std::size_t count = 0;
  ExperimentResult result;
};

/// Sweeps K_A = K_B = {0..k-1}, K_AB = {k..q-1} over `ks` and equal
/// per-type counts over `counts`. Other settings come from `base`.
std::vector<GridCell> run_grid(const ExperimentConfig& base, const std::vector<std::uint32_t>& ks,
                               const std::vector<std::size_t>& counts);

}  // namespace poolbp
