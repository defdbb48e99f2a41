#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "poolbp/errors.hpp"
#include "poolbp/exact.hpp"

using namespace poolbp;
using namespace poolbp::testing;

TEST_CASE("exact sum does not depend on the order of terms") {
  std::mt19937_64 gen(77);
  std::vector<double> terms;
  for (int i = 0; i < 500; ++i) {
    const double mant = uniform(gen, 0.0, 1.0);
    const int exp = std::uniform_int_distribution<int>(-300, 300)(gen);
    terms.push_back(std::ldexp(mant, exp));
  }
  terms.push_back(0.0);
  terms.push_back(std::numeric_limits<double>::denorm_min());
  ExactSum forward;
  for (double t : terms) forward.add(t);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(terms.begin(), terms.end(), gen);
    ExactSum s;
    for (double t : terms) s.add(t);
    CHECK(s.value() == forward.value());
  }
  ExactSum empty;
  CHECK(empty.value() == 0.0);
  ExactSum small;
  small.add(1.0);
  small.add(1e-30);
  small.add(0.5);
  CHECK(small.value() == 1.5);
  ExactSum cancelling;
  cancelling.add(0.1);
  cancelling.add(0.2);
  CHECK(cancelling.value() == 0.1 + 0.2);
  ExactSum bad;
  CHECK_THROWS_AS(bad.add(-1.0), ValidationError);
}

TEST_CASE("exact posterior: single item in one positive A pool") {
  // p_A = 0.01, sensitivity 0.97, specificity 0.99:
  // 0.01 * 0.97 / (0.01 * 0.97 + 0.99 * 0.01) = 0.97 / 1.96.
  PoolingDesign d{IncidenceMatrix(1, 1, {{0}}), IncidenceMatrix(0, 1, {}), IncidenceMatrix(0, 1, {}),
                  std::nullopt};
  const auto m = exact_posterior(d, {{1}, {}, {}}, {0.01, 0.3}, {0.97, 0.99});
  CHECK(m.prob_a(0) == doctest::Approx(0.4948979591836735).epsilon(1e-14));
  CHECK(m.prob_b(0) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("exact posterior: one positive AB pool over one item") {
  // Pr(x or y | s=1) with p = 0.01 each: z=1 w.p. 0.0199.
  PoolingDesign d{IncidenceMatrix(0, 1, {}), IncidenceMatrix(0, 1, {}), IncidenceMatrix(1, 1, {{0}}),
                  std::nullopt};
  const auto m = exact_posterior(d, {{}, {}, {1}}, {0.01, 0.01}, {0.97, 0.99});
  const double pos = 0.0199 * 0.97, neg = 0.9801 * 0.01;
  CHECK(m.joint[0][0] == doctest::Approx(neg / (pos + neg)).epsilon(1e-14));
  CHECK(m.joint[0][1] == m.joint[0][2]);
}

TEST_CASE("exact posterior: no pools gives the prior") {
  PoolingDesign d{IncidenceMatrix(0, 3, {}), IncidenceMatrix(0, 3, {}), IncidenceMatrix(0, 3, {}),
                  std::nullopt};
  const auto m = exact_posterior(d, {}, {0.2, 0.7}, {0.97, 0.99});
  const auto prior = prior_product({0.2, 0.7});
  for (const auto& j : m.joint) {
    for (std::size_t s = 0; s < 4; ++s) CHECK(j[s] == doctest::Approx(prior[s]).epsilon(1e-15));
  }
}

TEST_CASE("exact posterior: items sharing every pool have equal marginals") {
  PoolingDesign d{IncidenceMatrix(1, 2, {{0, 1}}), IncidenceMatrix(1, 2, {{0, 1}}),
                  IncidenceMatrix(1, 2, {{0, 1}}), std::nullopt};
  const auto m = exact_posterior(d, {{1}, {0}, {1}}, {0.1, 0.1}, {0.97, 0.99});
  CHECK(m.joint[0] == m.joint[1]);
}

TEST_CASE("exact posterior agrees with the dense brute force") {
  std::mt19937_64 gen(5);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(gen);
    const std::size_t pools = std::uniform_int_distribution<std::size_t>(0, 6)(gen);
    const auto inst = random_instance(gen, n, pools);
    const auto x = exact_posterior(inst.design, inst.obs, inst.priors, inst.noise);
    const auto y = brute_force_posterior(inst.design, inst.obs, inst.priors, inst.noise);
    worst = std::max(worst, max_abs_diff(x, y));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("exact posterior budget and limits") {
  PoolingDesign d{IncidenceMatrix(1, 10, {{0, 1}}), IncidenceMatrix(0, 10, {}), IncidenceMatrix(0, 10, {}),
                  std::nullopt};
  CHECK_THROWS_AS(exact_posterior(d, {{1}, {}, {}}, {0.1, 0.1}, {0.97, 0.99}, {1000}), BudgetExceeded);
  CHECK_NOTHROW(exact_posterior(d, {{1}, {}, {}}, {0.1, 0.1}, {0.97, 0.99}));
  CHECK_THROWS_AS(exact_posterior(d, {{1, 1}, {}, {}}, {0.1, 0.1}, {0.97, 0.99}), ValidationError);
  PoolingDesign contradiction{IncidenceMatrix(2, 1, {{0}, {0}}), IncidenceMatrix(0, 1, {}),
                              IncidenceMatrix(0, 1, {}), std::nullopt};
  CHECK_THROWS_AS(exact_posterior(contradiction, {{1, 0}, {}, {}}, {0.1, 0.1}, NoiseModel::noiseless()),
                  NumericDegeneracy);
}

TEST_CASE("exact posterior is symmetric under A/B exchange and relabelling") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = random_instance(gen, 5, 5);
    const auto x = exact_posterior(inst.design, inst.obs, inst.priors, inst.noise);
    const auto sw = swap_types(inst);
    const auto y = exact_posterior(sw.design, sw.obs, sw.priors, sw.noise);
    for (std::size_t c = 0; c < 5; ++c) CHECK(y.joint[c] == swapped(x.joint[c]));

    std::vector<Index> perm(5);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    PoolingDesign moved{inst.design.m_a.permute_columns(perm), inst.design.m_b.permute_columns(perm),
                        inst.design.m_ab.permute_columns(perm), std::nullopt};
    const auto z = exact_posterior(moved, inst.obs, inst.priors, inst.noise);
    for (std::size_t j = 0; j < 5; ++j) CHECK(z.joint[j] == x.joint[perm[j]]);
  }
}
