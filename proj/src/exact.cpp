#include "poolbp/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "poolbp/errors.hpp"

namespace poolbp {

namespace {

__extension__ typedef unsigned __int128 u128;

double power(double base, unsigned exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

std::vector<std::uint64_t> row_masks(const IncidenceMatrix& m) {
  std::vector<std::uint64_t> masks(m.n_rows(), 0);
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    for (Index j : m.row(i)) masks[i] |= std::uint64_t{1} << j;
  }
  return masks;
}

}  // namespace

void ExactSum::add(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("ExactSum takes finite non-negative terms");
  if (v == 0.0) return;
  const auto bits = std::bit_cast<std::uint64_t>(v);
  const auto biased = static_cast<int>(bits >> 52);
  std::uint64_t mantissa = bits & ((std::uint64_t{1} << 52) - 1);
  int exponent = -1074;
  if (biased != 0) {
    mantissa |= std::uint64_t{1} << 52;
    exponent = biased - 1075;
  }
  const int position = exponent - kScaleExponent;
  std::size_t limb = static_cast<std::size_t>(position / 64);
  const int shift = position % 64;
  u128 wide = static_cast<u128>(mantissa) << shift;
  auto low = static_cast<std::uint64_t>(wide);
  auto high = static_cast<std::uint64_t>(wide >> 64);

  auto add_at = [this](std::size_t i, std::uint64_t x) {
    while (x != 0) {
      if (i >= kLimbs) throw std::overflow_error("ExactSum overflow");
      const std::uint64_t before = limbs_[i];
      limbs_[i] += x;
      x = limbs_[i] < before ? 1 : 0;
      ++i;
    }
  };
  add_at(limb, low);
  add_at(limb + 1, high);
}

double ExactSum::value() const {
  std::size_t top = kLimbs;
  while (top > 0 && limbs_[top - 1] == 0) --top;
  if (top == 0) return 0.0;
  const std::size_t h = top - 1;
  const int base = static_cast<int>(64 * h) + kScaleExponent;
  double result = std::ldexp(static_cast<double>(limbs_[h]), base);
  if (h > 0) result += std::ldexp(static_cast<double>(limbs_[h - 1]), base - 64);
  return result;
}

Marginals exact_posterior(const PoolingDesign& design, const Observations& observations,
                          const Priors& priors, const NoiseModel& noise, ExactBudget budget) {
  design.validate();
  noise.validate();
  priors.validate();
  const std::size_t n = design.n_items();
  if (observations.a.size() != design.m_a.n_rows() || observations.b.size() != design.m_b.n_rows() ||
      observations.ab.size() != design.m_ab.n_rows()) {
    throw ValidationError("observation lengths do not match the design's pool counts");
  }
  const std::uint64_t pools = std::max<std::uint64_t>(design.n_pools(), 1);
  if (n >= 32 || (std::uint64_t{1} << (2 * n)) > budget.max_work / pools) {
    throw BudgetExceeded("exact posterior over " + std::to_string(n) + " items and " +
                         std::to_string(design.n_pools()) + " pools exceeds the budget of " +
                         std::to_string(budget.max_work));
  }

  const auto mask_a = row_masks(design.m_a);
  const auto mask_b = row_masks(design.m_b);
  const auto mask_ab = row_masks(design.m_ab);
  const std::uint64_t configs = std::uint64_t{1} << n;

  // Each configuration's weight is a product of eight powers:
  // prior factors (1-p_A), p_A, (1-p_B), p_B and channel factors p(s|z).
  // The powers are multiplied in sorted order so the weight depends on the
  // counts alone, not on item or pool labels.
  const std::array<double, 4> channel = {noise.likelihood(false, false), noise.likelihood(false, true),
                                         noise.likelihood(true, false), noise.likelihood(true, true)};
  std::vector<std::array<ExactSum, 4>> sums(n);

  for (std::uint64_t xa = 0; xa < configs; ++xa) {
    for (std::uint64_t xb = 0; xb < configs; ++xb) {
      std::array<unsigned, 4> counts{};  // index 2s + z
      auto tally = [&](const std::vector<std::uint64_t>& masks, const std::vector<std::uint8_t>& s,
                       std::uint64_t x) {
        for (std::size_t i = 0; i < masks.size(); ++i) {
          const unsigned z = (masks[i] & x) != 0 ? 1u : 0u;
          ++counts[2u * (s[i] != 0) + z];
        }
      };
      tally(mask_a, observations.a, xa);
      tally(mask_b, observations.b, xb);
      tally(mask_ab, observations.ab, xa | xb);

      const auto na = static_cast<unsigned>(std::popcount(xa));
      const auto nb = static_cast<unsigned>(std::popcount(xb));
      const auto un = static_cast<unsigned>(n);
      std::array<double, 8> terms = {
          power(1.0 - priors.p_a, un - na), power(priors.p_a, na),
          power(1.0 - priors.p_b, un - nb), power(priors.p_b, nb),
          power(channel[0], counts[0]),     power(channel[1], counts[1]),
          power(channel[2], counts[2]),     power(channel[3], counts[3])};
      std::sort(terms.begin(), terms.end());
      double weight = 1.0;
      for (double t : terms) weight *= t;
      if (weight == 0.0) continue;

      for (std::size_t j = 0; j < n; ++j) {
        const int x = static_cast<int>((xa >> j) & 1u);
        const int y = static_cast<int>((xb >> j) & 1u);
        sums[j][joint_index(x, y)].add(weight);
      }
    }
  }

  Marginals out;
  out.joint.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    JointDist d;
    for (std::size_t st = 0; st < 4; ++st) d[st] = sums[j][st].value();
    const double total = joint_total(d);
    if (!(total > 0.0)) throw NumericDegeneracy("every configuration has zero posterior weight");
    for (auto& v : d) v /= total;
    out.joint[j] = d;
  }
  return out;
}

}  // namespace poolbp
