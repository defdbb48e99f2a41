#include <doctest.h>

#include <cmath>

#include "poolbp/errors.hpp"
#include "poolbp/sim.hpp"

using namespace poolbp;

namespace {

// |observed - expected| within three binomial standard deviations.
bool within_3_sigma(std::size_t hits, std::size_t trials, double p) {
  const double mean = p * static_cast<double>(trials);
  const double sd = std::sqrt(static_cast<double>(trials) * p * (1.0 - p));
  return std::abs(static_cast<double>(hits) - mean) <= 3.0 * sd;
}

}  // namespace

TEST_CASE("replication streams are reproducible and distinct") {
  Rng a = Rng::for_replication(42, 3);
  Rng b = Rng::for_replication(42, 3);
  Rng c = Rng::for_replication(42, 4);
  Rng d = Rng::for_replication(43, 3);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CHECK(x != d.next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
}

TEST_CASE("plant_fixed") {
  Rng rng(9);
  auto t0 = plant_fixed(50, 0, 0, rng);
  CHECK(t0.count_a() == 0);
  CHECK(t0.count_b() == 0);
  auto tn = plant_fixed(50, 50, 50, rng);
  CHECK(tn.count_a() == 50);
  CHECK(tn.count_b() == 50);
  auto t6 = plant_fixed(2401, 6, 6, rng);
  CHECK(t6.count_a() == 6);
  CHECK(t6.count_b() == 6);
  CHECK_THROWS_AS(plant_fixed(5, 6, 0, rng), ValidationError);
}

TEST_CASE("plant_fixed picks positions uniformly") {
  Rng rng(123);
  std::vector<std::size_t> hits(10, 0);
  const std::size_t trials = 20000;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto truth = plant_fixed(10, 3, 0, rng);
    for (std::size_t j = 0; j < 10; ++j) hits[j] += truth.x_a[j];
  }
  for (auto h : hits) CHECK(within_3_sigma(h, trials, 0.3));
}

TEST_CASE("plant_bernoulli") {
  Rng rng(5);
  CHECK(plant_bernoulli(100, {0.0, 0.0}, rng).count_a() == 0);
  const auto full = plant_bernoulli(100, {1.0, 1.0}, rng);
  CHECK(full.count_a() == 100);
  CHECK(full.count_b() == 100);

  // Total over 10^4 draws of n = 2401 items is Binomial(24.01e6, 0.002).
  std::size_t total_a = 0;
  std::size_t total_b = 0;
  const std::size_t draws = 10000;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto t = plant_bernoulli(2401, {0.002, 0.002}, rng);
    total_a += t.count_a();
    total_b += t.count_b();
  }
  CHECK(within_3_sigma(total_a, 2401 * draws, 0.002));
  CHECK(within_3_sigma(total_b, 2401 * draws, 0.002));
  CHECK(std::abs(static_cast<double>(total_a) / draws - 4.802) < 0.1);
}

TEST_CASE("true pool states are ORs over pools") {
  const auto d = build_design(3, {0}, {1}, {2});
  const GroundTruth none{std::vector<std::uint8_t>(81, 0), std::vector<std::uint8_t>(81, 0)};
  const auto z0 = true_pool_states(d, none);
  CHECK(std::count(z0.a.begin(), z0.a.end(), 1) == 0);
  CHECK(std::count(z0.b.begin(), z0.b.end(), 1) == 0);
  CHECK(std::count(z0.ab.begin(), z0.ab.end(), 1) == 0);

  GroundTruth one = none;
  one.x_a[0] = 1;
  const auto z1 = true_pool_states(d, one);
  // Column weight 1 in each family.
  CHECK(std::count(z1.a.begin(), z1.a.end(), 1) == 1);
  CHECK(std::count(z1.b.begin(), z1.b.end(), 1) == 0);
  CHECK(std::count(z1.ab.begin(), z1.ab.end(), 1) == 1);
  for (Index r : d.m_a.col(0)) CHECK(z1.a[r] == 1);
  for (Index r : d.m_ab.col(0)) CHECK(z1.ab[r] == 1);

  GroundTruth wrong{std::vector<std::uint8_t>(80, 0), std::vector<std::uint8_t>(80, 0)};
  CHECK_THROWS_AS(true_pool_states(d, wrong), ValidationError);
}

TEST_CASE("pool states are monotone and AB is the OR of the type-wise evaluations") {
  const auto d = build_design(3, {0, 1}, {0}, {2});
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    auto truth = plant_fixed(81, rng.below(5), rng.below(5), rng);
    const auto before = true_pool_states(d, truth);

    // OR over AB rows of x_A alone and of x_B alone, combined.
    PoolingDesign only_ab{d.m_ab, d.m_ab, d.m_ab, std::nullopt};
    const auto split = true_pool_states(only_ab, truth);
    for (std::size_t i = 0; i < before.ab.size(); ++i) CHECK(before.ab[i] == (split.a[i] | split.b[i]));

    const auto j = rng.below(81);
    (rng.below(2) ? truth.x_a : truth.x_b)[j] = 1;
    const auto after = true_pool_states(d, truth);
    for (std::size_t i = 0; i < before.a.size(); ++i) CHECK(after.a[i] >= before.a[i]);
    for (std::size_t i = 0; i < before.b.size(); ++i) CHECK(after.b[i] >= before.b[i]);
    for (std::size_t i = 0; i < before.ab.size(); ++i) CHECK(after.ab[i] >= before.ab[i]);
  }
}

TEST_CASE("noise channel") {
  Rng rng(31);
  const std::vector<std::uint8_t> mixed = {0, 1, 1, 0, 1};
  CHECK(apply_noise(mixed, NoiseModel::noiseless(), rng) == mixed);

  const NoiseModel channel{0.97, 0.99};
  const std::size_t n = 100000;
  const auto fp = apply_noise(std::vector<std::uint8_t>(n, 0), channel, rng);
  CHECK(within_3_sigma(static_cast<std::size_t>(std::count(fp.begin(), fp.end(), 1)), n, 0.01));
  const auto fn = apply_noise(std::vector<std::uint8_t>(n, 1), channel, rng);
  CHECK(within_3_sigma(static_cast<std::size_t>(std::count(fn.begin(), fn.end(), 0)), n, 0.03));
}

TEST_CASE("model parameter validation") {
  CHECK_THROWS_AS((NoiseModel{0.0, 0.9}.validate()), ValidationError);
  CHECK_THROWS_AS((NoiseModel{0.9, 1.5}.validate()), ValidationError);
  CHECK_NOTHROW(NoiseModel::noiseless().validate());
  CHECK_THROWS_AS((Priors{-0.1, 0.2}.validate()), ValidationError);
  CHECK_NOTHROW((Priors{0.0, 1.0}.validate()));
  const NoiseModel m{0.97, 0.99};
  CHECK(m.likelihood(true, true) == 0.97);
  CHECK(m.likelihood(false, true) == doctest::Approx(0.03));
  CHECK(m.likelihood(true, false) == doctest::Approx(0.01));
  CHECK(m.likelihood(false, false) == 0.99);
}
