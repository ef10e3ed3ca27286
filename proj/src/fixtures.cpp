#include "qgalloy/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "qgalloy/rng.hpp"

namespace qgalloy {

namespace {

constexpr std::uint32_t kCountingTag = 2;
constexpr std::uint32_t kSsfTag = 3;

int pick(RandomStream& rs, int lo, int hi) {
  return lo + static_cast<int>(rs.uniform01() * (hi - lo + 1));
}

MetricGraph random_shape(RandomStream& rs, int index) {
  switch (index % 4) {
    case 0:
      return make_interval(rs.uniform(0.8, 3.0));
    case 1:
      return make_star(pick(rs, 3, 5), rs.uniform(0.5, 1.0));
    case 2:
      return make_loop(rs.uniform(1.0, 3.0));
    default:
      return make_fibonacci_chain(pick(rs, 4, 5), rs.uniform(0.6, 1.2), rs.uniform(0.6, 1.2));
  }
}

ConditionFamily random_family(RandomStream& rs, const MetricGraph& g, bool allow_decoupling) {
  ConditionFamily family;
  for (VertexId v : g.vertices()) {
    const int degree = g.degree(v);
    const int rolls = allow_decoupling ? 4 : 3;
    switch (pick(rs, 0, rolls - 1)) {
      case 0:
        family.conditions.emplace(v, standard_condition(ConditionKind::dirichlet, v, degree));
        break;
      case 1:
        family.conditions.emplace(v, standard_condition(ConditionKind::kirchhoff, v, degree));
        break;
      case 2:
        family.conditions.emplace(
            v, standard_condition(ConditionKind::delta, v, degree, rs.uniform(-1.5, 1.5)));
        break;
      default:
        family.conditions.emplace(v,
                                  standard_condition(ConditionKind::neumann_decoupled, v, degree));
        break;
    }
  }
  return family;
}

PiecewiseConstant random_profile(RandomStream& rs, double length) {
  const double w = rs.uniform(-4.0, 4.0);
  if (rs.uniform01() < 0.4) return PiecewiseConstant::constant(w, length);
  const double lo = rs.uniform(0.0, 0.6) * length;
  const double hi = lo + rs.uniform(0.1, 0.9) * (length - lo);
  return PiecewiseConstant::indicator(lo, hi, length, w);
}

}  // namespace

CountingFixture random_counting_fixture(std::uint64_t seed, int index) {
  RandomStream rs(seed, static_cast<std::uint32_t>(index), 0, kCountingTag);
  MetricGraph graph = random_shape(rs, index);
  ConditionFamily family = random_family(rs, graph, true);

  PotentialField field;
  for (const Edge& e : graph.edges())
    if (rs.uniform01() < 0.7) field.per_edge.emplace(e.id, random_profile(rs, e.length));

  CountingFixture fx{std::move(graph), std::move(family), std::move(field), 0.0, 0.0};
  fx.h = (index % 4 == 1 || index % 4 == 3) ? 0.02 : 0.01;
  const double ceiling = 0.04 / (fx.h * fx.h);
  fx.probe_lambda = rs.uniform(ceiling / 8.0, ceiling / 4.0);
  return fx;
}

SsfFixture random_ssf_fixture(std::uint64_t seed, int index, bool for_decoupling) {
  RandomStream rs(seed, static_cast<std::uint32_t>(index), 1, kSsfTag);

  const int m = pick(rs, 3, 6);
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;
  for (int i = 0; i <= m; ++i) vertices.push_back(i);
  for (int i = 0; i < m; ++i) edges.push_back({i, i, i + 1, rs.uniform(0.7, 1.3)});
  MetricGraph graph(std::move(vertices), std::move(edges));

  ConditionFamily family;
  family.conditions.emplace(0, standard_condition(ConditionKind::dirichlet, 0, 1));
  family.conditions.emplace(m, standard_condition(ConditionKind::dirichlet, m, 1));
  for (int v = 1; v < m; ++v)
    family.conditions.emplace(
        v, rs.uniform01() < 0.5
               ? standard_condition(ConditionKind::kirchhoff, v, 2)
               : standard_condition(ConditionKind::delta, v, 2, rs.uniform(0.0, 1.0)));

  std::set<EdgeId> lambda_set;
  for (int e = 1; e + 1 < m; ++e) lambda_set.insert(e);
  if (lambda_set.empty()) lambda_set.insert(m / 2);

  PotentialField w1, w2;
  for (const Edge& e : graph.edges()) {
    if (rs.uniform01() < 0.5) {
      PiecewiseConstant base = random_profile(rs, e.length);
      w1.per_edge.emplace(e.id, base);
      w2.per_edge.emplace(e.id, base);
    }
  }
  const auto perturbable = [&](EdgeId e) { return !for_decoupling || lambda_set.count(e) > 0; };
  bool perturbed = false;
  for (const Edge& e : graph.edges()) {
    if (!perturbable(e.id) || rs.uniform01() >= 0.6) continue;
    PiecewiseConstant bump = random_profile(rs, e.length);
    auto it = w2.per_edge.find(e.id);
    if (it == w2.per_edge.end()) {
      w2.per_edge.emplace(e.id, bump);
    } else {
      // overlay keeps |W| <= 4 by replacing rather than stacking
      it->second = bump;
    }
    perturbed = true;
  }
  if (!perturbed) {
    const EdgeId e = *lambda_set.begin();
    const double len = graph.edge(e).length;
    w2.per_edge.insert_or_assign(e, PiecewiseConstant::indicator(0.1 * len, 0.7 * len, len, 2.0));
  }

  SsfFixture fx{std::move(graph), std::move(lambda_set), std::move(family),
                std::move(w1),    std::move(w2),         0.02,
                {}};
  const double cap = 0.04 / (fx.h * fx.h) / 4.0;
  const int points = pick(rs, 8, 12);
  for (int i = 0; i < points; ++i) fx.grid.push_back(rs.uniform(0.2, 0.9 * cap));
  std::sort(fx.grid.begin(), fx.grid.end());
  return fx;
}

}  // namespace qgalloy
