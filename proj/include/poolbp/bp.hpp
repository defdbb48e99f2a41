#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "poolbp/pooling.hpp"
#include "poolbp/sim.hpp"

namespace poolbp {

/// A distribution (or unnormalized weight) over the joint state (x, y) of
/// (X^A, X^B) for one item. Index 2x + y: (0,0), (0,1), (1,0), (1,1).
using JointDist = std::array<double, 4>;

constexpr std::size_t joint_index(int x, int y) { return static_cast<std::size_t>(2 * x + y); }

/// Sum of the four entries, grouped as (00 + 11) + (01 + 10) so that
/// exchanging the roles of A and B leaves the result bit-identical.
inline double joint_total(const JointDist& d) { return (d[0] + d[3]) + (d[1] + d[2]); }

/// Pr(X^A = x) Pr(X^B = y).
JointDist prior_product(const Priors& priors);

enum class PoolType : std::uint8_t { A, B, AB };

/// The three item/pool bipartite graphs merged into one edge list. Pools are
/// numbered A pools first, then B, then AB, each family in row order; edges
/// are numbered pool by pool.
struct EdgeSet {
  std::size_t n_items = 0;
  std::vector<PoolType> pool_type;
  // Edges of pool p are [pool_begin[p], pool_begin[p + 1]).
  std::vector<std::size_t> pool_begin;
  std::vector<Index> edge_item;
  std::vector<Index> edge_pool;
  // Edges at item c are item_edges[item_begin[c] .. item_begin[c + 1]), in
  // ascending edge order.
  std::vector<std::size_t> item_begin;
  std::vector<std::size_t> item_edges;

  static EdgeSet from_design(const PoolingDesign& design);

  std::size_t n_pools() const noexcept { return pool_type.size(); }
  std::size_t n_edges() const noexcept { return edge_item.size(); }
};

struct MessageState {
  // Normalized item-to-pool messages, one per edge.
  std::vector<JointDist> q;
  // Pool-to-item messages as produced by the pool update, not normalized.
  std::vector<JointDist> r;
  int iteration = 0;
};

/// Per-item normalized posterior over the joint state.
struct Marginals {
  std::vector<JointDist> joint;

  std::size_t n_items() const noexcept { return joint.size(); }
  double prob_a(std::size_t c) const { return joint[c][2] + joint[c][3]; }
  double prob_b(std::size_t c) const { return joint[c][1] + joint[c][3]; }
  std::vector<double> defective_a() const;
  std::vector<double> defective_b() const;
};

struct BpSettings {
  double epsilon = 1e-6;
  int max_iterations = 200;

  void validate() const;
};

struct BpResult {
  Marginals marginals;
  bool converged = false;
  int iterations = 0;
};

/// Two-type belief propagation over a pooling design with fixed observations.
///
/// The decoder is stateful: init_messages() sets the item-to-pool messages
/// to the prior, then each round runs update_r() and update_q(). Updates
/// are synchronous, so every message of a round is computed from the
/// previous round's messages.
///
/// Products over neighbours are taken in ascending order of the factor
/// values, which makes the result independent of how items and pool
/// families are labelled, down to the last bit.
class BpDecoder {
 public:
  /// Throws ValidationError if observation lengths differ from the pool
  /// counts or a model parameter is out of range.
  BpDecoder(const PoolingDesign& design, Observations observations, NoiseModel noise,
            Priors priors);

  const EdgeSet& edges() const noexcept { return edges_; }
  const MessageState& state() const noexcept { return state_; }
  MessageState& state() noexcept { return state_; }

  void init_messages();

  /// Pool-to-item messages from the current item-to-pool messages. Only the
  /// product-bearing states depend on the neighbours; the rest equal
  /// p(s_G | 1).
  void update_r();

  /// Item-to-pool messages from the current pool messages, each pool
  /// message first scaled to sum to one. Returns the largest absolute
  /// change of any message entry. Throws NumericDegeneracy if a message
  /// vanishes in all four states.
  double update_q();

  /// Posterior marginals from the current pool messages. Items in no pool
  /// get the prior.
  Marginals marginals() const;

  /// Iterates until the largest change drops below epsilon or the iteration
  /// cap is hit; in the latter case the marginals of the last round are
  /// returned with converged = false.
  BpResult run(const BpSettings& settings);

 private:
  // Pool messages arriving at `item`, each scaled to sum to one.
  void scaled_pool_messages(std::size_t item, std::vector<JointDist>& out) const;

  EdgeSet edges_;
  std::vector<std::uint8_t> pool_obs_;
  NoiseModel noise_;
  JointDist prior_;
  MessageState state_;
};

BpResult run_bp(const PoolingDesign& design, const Observations& observations, const Priors& priors,
                const NoiseModel& noise, const BpSettings& settings = {});

/// out[i] = product of values[j] for j != i, multiplied in sorted-value
/// order so that the result depends only on the multiset of values. Equal
/// values receive identical results.
void products_excluding_each(std::span<const double> values, std::span<double> out);

/// Product of all values in sorted-value order.
double sorted_product(std::span<const double> values);

}  // namespace poolbp
