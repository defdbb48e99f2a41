#include "poolbp/sim.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "poolbp/errors.hpp"

namespace poolbp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<std::uint8_t> or_over_rows(const IncidenceMatrix& m,
                                       const std::vector<std::uint8_t>& x) {
  std::vector<std::uint8_t> z(m.n_rows(), 0);
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    for (Index j : m.row(i)) {
      if (x[j]) {
        z[i] = 1;
        break;
      }
    }
  }
  return z;
}

void mark_random_subset(std::vector<std::uint8_t>& x, std::size_t count, Rng& rng) {
  // Partial Fisher-Yates over item indices.
  std::vector<std::uint32_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0u);
  for (std::size_t i = 0; i < count; ++i) {
    const auto pick = i + rng.below(idx.size() - i);
    std::swap(idx[i], idx[pick]);
    x[idx[i]] = 1;
  }
}

}  // namespace

Rng Rng::for_replication(std::uint64_t seed, std::uint64_t rep) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(rep + 0x632be59bd9b4e019ull)));
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

std::size_t GroundTruth::count_a() const {
  return static_cast<std::size_t>(std::count(x_a.begin(), x_a.end(), 1));
}

std::size_t GroundTruth::count_b() const {
  return static_cast<std::size_t>(std::count(x_b.begin(), x_b.end(), 1));
}

void NoiseModel::validate() const {
  auto ok = [](double p) { return p > 0.0 && p <= 1.0; };
  if (!ok(sensitivity)) throw ValidationError("sensitivity must lie in (0, 1]");
  if (!ok(specificity)) throw ValidationError("specificity must lie in (0, 1]");
}

void Priors::validate() const {
  auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!ok(p_a) || !ok(p_b)) throw ValidationError("defective rates must lie in [0, 1]");
}

GroundTruth plant_fixed(std::size_t n, std::size_t count_a, std::size_t count_b, Rng& rng) {
  if (count_a > n || count_b > n) {
    throw ValidationError("cannot plant " + std::to_string(std::max(count_a, count_b)) +
                          " defectives among " + std::to_string(n) + " items");
  }
  GroundTruth truth{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0)};
  mark_random_subset(truth.x_a, count_a, rng);
  mark_random_subset(truth.x_b, count_b, rng);
  return truth;
}

GroundTruth plant_bernoulli(std::size_t n, const Priors& priors, Rng& rng) {
  priors.validate();
  GroundTruth truth{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0)};
  for (auto& v : truth.x_a) v = rng.bernoulli(priors.p_a);
  for (auto& v : truth.x_b) v = rng.bernoulli(priors.p_b);
  return truth;
}

PoolStates true_pool_states(const PoolingDesign& design, const GroundTruth& truth) {
  const std::size_t n = design.n_items();
  if (truth.x_a.size() != n || truth.x_b.size() != n) {
    throw ValidationError("ground truth has " + std::to_string(truth.x_a.size()) +
                          " items, design has " + std::to_string(n));
  }
  std::vector<std::uint8_t> either(n);
  for (std::size_t j = 0; j < n; ++j) either[j] = truth.x_a[j] | truth.x_b[j];
  return {or_over_rows(design.m_a, truth.x_a), or_over_rows(design.m_b, truth.x_b),
          or_over_rows(design.m_ab, either)};
}

std::vector<std::uint8_t> apply_noise(const std::vector<std::uint8_t>& z, const NoiseModel& noise,
                                      Rng& rng) {
  std::vector<std::uint8_t> s(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double p_positive = z[i] ? noise.sensitivity : noise.false_positive_rate();
    s[i] = rng.bernoulli(p_positive);
  }
  return s;
}

Observations observe(const PoolingDesign& design, const GroundTruth& truth, const NoiseModel& noise,
                     Rng& rng) {
  auto z = true_pool_states(design, truth);
  Observations s;
  s.a = apply_noise(z.a, noise, rng);
  s.b = apply_noise(z.b, noise, rng);
  s.ab = apply_noise(z.ab, noise, rng);
  return s;
}

}  // namespace poolbp
