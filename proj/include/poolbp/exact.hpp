#pragma once

#include <array>
#include <cstdint>

#include "poolbp/bp.hpp"

namespace poolbp {

/// Exact sum of non-negative finite doubles, independent of the order the
/// terms are added in. Terms are accumulated into a fixed-point integer
/// wide enough for the whole double range, so value() is a function of the
/// multiset of terms alone.
class ExactSum {
 public:
  void add(double v);
  double value() const;

 private:
  // limbs_[i] holds bits 64*i .. 64*i+63 of the sum scaled by 2^1088.
  static constexpr int kScaleExponent = -1088;
  static constexpr std::size_t kLimbs = 36;
  std::array<std::uint64_t, kLimbs> limbs_{};
};

struct ExactBudget {
  // Bound on 4^n * (number of pools).
  std::uint64_t max_work = 400'000'000;
};

/// Posterior marginals by enumerating all 4^n joint configurations of
/// (x^A, x^B). Throws BudgetExceeded when 4^n times the pool count exceeds
/// the budget, and NumericDegeneracy if every configuration has zero weight.
Marginals exact_posterior(const PoolingDesign& design, const Observations& observations,
                          const Priors& priors, const NoiseModel& noise, ExactBudget budget = {});

}  // namespace poolbp
