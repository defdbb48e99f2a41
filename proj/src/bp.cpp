#include "poolbp/bp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "poolbp/errors.hpp"

namespace poolbp {

namespace {

struct Scratch {
  std::vector<std::size_t> order;
  std::vector<double> sorted;
  std::vector<double> prefix;
  std::vector<double> suffix;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

void normalize_or_throw(JointDist& d, const char* what) {
  const double total = joint_total(d);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericDegeneracy(std::string(what) + " vanished in all four states");
  }
  for (auto& v : d) v /= total;
}

}  // namespace

JointDist prior_product(const Priors& priors) {
  const double a0 = 1.0 - priors.p_a;
  const double b0 = 1.0 - priors.p_b;
  return {a0 * b0, a0 * priors.p_b, priors.p_a * b0, priors.p_a * priors.p_b};
}

void products_excluding_each(std::span<const double> values, std::span<double> out) {
  const std::size_t m = values.size();
  Scratch& s = scratch();
  s.order.resize(m);
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  std::sort(s.order.begin(), s.order.end(),
            [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  s.sorted.resize(m);
  for (std::size_t k = 0; k < m; ++k) s.sorted[k] = values[s.order[k]];
  s.prefix.assign(m + 1, 1.0);
  s.suffix.assign(m + 1, 1.0);
  for (std::size_t k = 0; k < m; ++k) s.prefix[k + 1] = s.prefix[k] * s.sorted[k];
  for (std::size_t k = m; k-- > 0;) s.suffix[k] = s.sorted[k] * s.suffix[k + 1];
  std::size_t group = 0;
  for (std::size_t k = 0; k < m; ++k) {
    // A run of equal values all drop the run's first member.
    if (k > 0 && s.sorted[k] != s.sorted[k - 1]) group = k;
    out[s.order[k]] = s.prefix[group] * s.suffix[group + 1];
  }
}

double sorted_product(std::span<const double> values) {
  Scratch& s = scratch();
  s.sorted.assign(values.begin(), values.end());
  std::sort(s.sorted.begin(), s.sorted.end());
  double p = 1.0;
  for (double v : s.sorted) p *= v;
  return p;
}

std::vector<double> Marginals::defective_a() const {
  std::vector<double> p(joint.size());
  for (std::size_t c = 0; c < joint.size(); ++c) p[c] = prob_a(c);
  return p;
}

std::vector<double> Marginals::defective_b() const {
  std::vector<double> p(joint.size());
  for (std::size_t c = 0; c < joint.size(); ++c) p[c] = prob_b(c);
  return p;
}

void BpSettings::validate() const {
  if (!(epsilon > 0.0)) throw ValidationError("convergence threshold must be positive");
  if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
}

EdgeSet EdgeSet::from_design(const PoolingDesign& design) {
  design.validate();
  EdgeSet g;
  g.n_items = design.n_items();
  g.pool_begin.push_back(0);
  auto add_family = [&](const IncidenceMatrix& m, PoolType type) {
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
      const auto pool = static_cast<Index>(g.pool_type.size());
      g.pool_type.push_back(type);
      for (Index c : m.row(i)) {
        g.edge_item.push_back(c);
        g.edge_pool.push_back(pool);
      }
      g.pool_begin.push_back(g.edge_item.size());
    }
  };
  add_family(design.m_a, PoolType::A);
  add_family(design.m_b, PoolType::B);
  add_family(design.m_ab, PoolType::AB);

  g.item_begin.assign(g.n_items + 1, 0);
  for (Index c : g.edge_item) ++g.item_begin[c + 1];
  std::partial_sum(g.item_begin.begin(), g.item_begin.end(), g.item_begin.begin());
  g.item_edges.resize(g.n_edges());
  std::vector<std::size_t> fill(g.item_begin.begin(), g.item_begin.end() - 1);
  for (std::size_t e = 0; e < g.n_edges(); ++e) g.item_edges[fill[g.edge_item[e]]++] = e;
  return g;
}

BpDecoder::BpDecoder(const PoolingDesign& design, Observations observations, NoiseModel noise,
                     Priors priors)
    : edges_(EdgeSet::from_design(design)), noise_(noise), prior_(prior_product(priors)) {
  noise.validate();
  priors.validate();
  auto check = [](const std::vector<std::uint8_t>& s, const IncidenceMatrix& m, const char* name) {
    if (s.size() != m.n_rows()) {
      throw ValidationError(std::string(name) + " observations: expected " +
                            std::to_string(m.n_rows()) + ", got " + std::to_string(s.size()));
    }
  };
  check(observations.a, design.m_a, "A");
  check(observations.b, design.m_b, "B");
  check(observations.ab, design.m_ab, "AB");
  pool_obs_ = std::move(observations.a);
  pool_obs_.insert(pool_obs_.end(), observations.b.begin(), observations.b.end());
  pool_obs_.insert(pool_obs_.end(), observations.ab.begin(), observations.ab.end());
  init_messages();
}

void BpDecoder::scaled_pool_messages(std::size_t item, std::vector<JointDist>& out) const {
  const std::size_t begin = edges_.item_begin[item];
  const std::size_t degree = edges_.item_begin[item + 1] - begin;
  out.resize(degree);
  for (std::size_t k = 0; k < degree; ++k) {
    JointDist r = state_.r[edges_.item_edges[begin + k]];
    const double total = joint_total(r);
    if (total > 0.0) {
      for (auto& v : r) v /= total;
    }
    out[k] = r;
  }
}

void BpDecoder::init_messages() {
  state_.q.assign(edges_.n_edges(), prior_);
  state_.r.assign(edges_.n_edges(), JointDist{1.0, 1.0, 1.0, 1.0});
  state_.iteration = 0;
}

void BpDecoder::update_r() {
  std::vector<double> clear_prob;
  std::vector<double> excluded;
  for (std::size_t p = 0; p < edges_.n_pools(); ++p) {
    const std::size_t begin = edges_.pool_begin[p];
    const std::size_t end = edges_.pool_begin[p + 1];
    const std::size_t size = end - begin;
    const PoolType type = edges_.pool_type[p];

    // Probability, under each neighbour's message, that it leaves the pool
    // negative.
    clear_prob.resize(size);
    for (std::size_t k = 0; k < size; ++k) {
      const JointDist& q = state_.q[begin + k];
      switch (type) {
        case PoolType::A: clear_prob[k] = q[0] + q[1]; break;
        case PoolType::B: clear_prob[k] = q[0] + q[2]; break;
        case PoolType::AB: clear_prob[k] = q[0]; break;
      }
    }
    excluded.resize(size);
    products_excluding_each(clear_prob, excluded);

    const bool obs = pool_obs_[p] != 0;
    const double if_positive = noise_.likelihood(obs, true);
    const double if_negative = noise_.likelihood(obs, false);
    for (std::size_t k = 0; k < size; ++k) {
      const double clean = if_positive + (if_negative - if_positive) * excluded[k];
      JointDist& r = state_.r[begin + k];
      r.fill(if_positive);
      switch (type) {
        case PoolType::A: r[joint_index(0, 0)] = r[joint_index(0, 1)] = clean; break;
        case PoolType::B: r[joint_index(0, 0)] = r[joint_index(1, 0)] = clean; break;
        case PoolType::AB: r[joint_index(0, 0)] = clean; break;
      }
    }
  }
}

double BpDecoder::update_q() {
  double delta = 0.0;
  std::vector<JointDist> scaled;
  std::vector<JointDist> excl;
  std::vector<double> column;
  std::vector<double> column_out;
  for (std::size_t c = 0; c < edges_.n_items; ++c) {
    const std::size_t begin = edges_.item_begin[c];
    const std::size_t degree = edges_.item_begin[c + 1] - begin;
    if (degree == 0) continue;
    scaled_pool_messages(c, scaled);
    excl.resize(degree);
    column.resize(degree);
    column_out.resize(degree);
    for (std::size_t st = 0; st < 4; ++st) {
      for (std::size_t k = 0; k < degree; ++k) column[k] = scaled[k][st];
      products_excluding_each(column, column_out);
      for (std::size_t k = 0; k < degree; ++k) excl[k][st] = column_out[k];
    }
    for (std::size_t k = 0; k < degree; ++k) {
      JointDist next;
      for (std::size_t st = 0; st < 4; ++st) next[st] = prior_[st] * excl[k][st];
      normalize_or_throw(next, "item-to-pool message");
      JointDist& q = state_.q[edges_.item_edges[begin + k]];
      for (std::size_t st = 0; st < 4; ++st) delta = std::max(delta, std::abs(next[st] - q[st]));
      q = next;
    }
  }
  ++state_.iteration;
  return delta;
}

Marginals BpDecoder::marginals() const {
  Marginals out;
  out.joint.resize(edges_.n_items);
  std::vector<JointDist> scaled;
  std::vector<double> column;
  for (std::size_t c = 0; c < edges_.n_items; ++c) {
    const std::size_t degree = edges_.item_begin[c + 1] - edges_.item_begin[c];
    scaled_pool_messages(c, scaled);
    JointDist m;
    column.resize(degree);
    for (std::size_t st = 0; st < 4; ++st) {
      for (std::size_t k = 0; k < degree; ++k) column[k] = scaled[k][st];
      m[st] = prior_[st] * sorted_product(column);
    }
    normalize_or_throw(m, "posterior marginal");
    out.joint[c] = m;
  }
  return out;
}

BpResult BpDecoder::run(const BpSettings& settings) {
  settings.validate();
  init_messages();
  BpResult result;
  for (int t = 1; t <= settings.max_iterations; ++t) {
    update_r();
    const double delta = update_q();
    result.iterations = t;
    if (delta < settings.epsilon) {
      result.converged = true;
      break;
    }
  }
  result.marginals = marginals();
  return result;
}

BpResult run_bp(const PoolingDesign& design, const Observations& observations, const Priors& priors,
                const NoiseModel& noise, const BpSettings& settings) {
  BpDecoder decoder(design, observations, noise, priors);
  return decoder.run(settings);
}

}  // namespace poolbp
