#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "poolbp/pooling.hpp"

namespace poolbp {

/// Random stream for one replication. The engine is mt19937_64, whose output
/// sequence is fixed by the standard; the distributions below are written
/// out here rather than taken from <random> so that draws are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for replication `rep` of an experiment seeded with
  /// `seed`. Streams do not depend on the order they are created in.
  static Rng for_replication(std::uint64_t seed, std::uint64_t rep);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on {0, ..., n - 1}; n > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct GroundTruth {
  std::vector<std::uint8_t> x_a;
  std::vector<std::uint8_t> x_b;

  std::size_t n_items() const noexcept { return x_a.size(); }
  std::size_t count_a() const;
  std::size_t count_b() const;
};

/// Sensitivity p(1|1) and specificity p(0|0), shared by A, B and AB pools.
struct NoiseModel {
  double sensitivity = 0.97;
  double specificity = 0.99;

  static NoiseModel noiseless() { return {1.0, 1.0}; }

  /// Throws ValidationError unless both lie in (0, 1].
  void validate() const;

  /// p(s | z) for an observed outcome s and true pool state z.
  double likelihood(bool s, bool z) const noexcept {
    if (z) return s ? sensitivity : 1.0 - sensitivity;
    return s ? 1.0 - specificity : specificity;
  }
  double false_positive_rate() const noexcept { return 1.0 - specificity; }
  double false_negative_rate() const noexcept { return 1.0 - sensitivity; }
};

/// Per-type defective rates p_A, p_B.
struct Priors {
  double p_a = 0.002;
  double p_b = 0.002;

  /// Throws ValidationError unless both lie in [0, 1].
  void validate() const;
};

/// One binary value per pool, aligned with the rows of M_A, M_B, M_AB.
struct PoolVectors {
  std::vector<std::uint8_t> a;
  std::vector<std::uint8_t> b;
  std::vector<std::uint8_t> ab;

  friend bool operator==(const PoolVectors&, const PoolVectors&) = default;
};

using PoolStates = PoolVectors;
using Observations = PoolVectors;

/// Exactly count_a type-A and count_b type-B defectives, each set drawn
/// uniformly without replacement and independently of the other. An item can
/// be defective for both types.
GroundTruth plant_fixed(std::size_t n, std::size_t count_a, std::size_t count_b, Rng& rng);

/// Every X^A_j ~ Bernoulli(p_A) and X^B_j ~ Bernoulli(p_B), independently.
GroundTruth plant_bernoulli(std::size_t n, const Priors& priors, Rng& rng);

/// Noiseless pool states: OR of x_A over each A pool, of x_B over each B
/// pool, and of x_A | x_B over each AB pool.
PoolStates true_pool_states(const PoolingDesign& design, const GroundTruth& truth);

/// Passes each pool state through the binary channel independently.
std::vector<std::uint8_t> apply_noise(const std::vector<std::uint8_t>& z, const NoiseModel& noise,
                                      Rng& rng);

/// true_pool_states followed by apply_noise on the A, B and AB families in
/// that order.
Observations observe(const PoolingDesign& design, const GroundTruth& truth, const NoiseModel& noise,
                     Rng& rng);

}  // namespace poolbp
