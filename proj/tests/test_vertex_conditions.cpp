#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <cstdio>
#include <random>

#include "oracles.hpp"
#include "qgalloy/conditions.hpp"
#include "qgalloy/errors.hpp"

using namespace qgalloy;
using Cplx = std::complex<double>;

TEST_CASE("is_lagrangian basic pairs") {
  const auto I2 = Eigen::MatrixXcd::Identity(2, 2);
  const auto Z2 = Eigen::MatrixXcd::Zero(2, 2);
  CHECK(is_lagrangian(I2, Z2));
  CHECK(is_lagrangian(Z2, I2));
  CHECK_FALSE(is_lagrangian(I2, Cplx(0, 1) * I2));  // A B* = -i I not Hermitian
  CHECK_FALSE(is_lagrangian(Z2, Z2));               // rank 0
  Eigen::MatrixXcd A3 = Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(is_lagrangian(A3, Z2), InputError);
}

TEST_CASE("standard conditions are Lagrangian for degrees 1..8") {
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> alpha(-3.0, 3.0);
  for (int d = 1; d <= 8; ++d) {
    for (ConditionKind kind : {ConditionKind::dirichlet, ConditionKind::neumann_decoupled,
                               ConditionKind::kirchhoff, ConditionKind::delta}) {
      VertexCondition c = standard_condition(kind, 0, d, alpha(gen));
      CHECK(is_lagrangian(c.A, c.B));
      CHECK(c.degree == d);
    }
  }
}

TEST_CASE("degree-1 kirchhoff equals neumann") {
  VertexCondition k = standard_condition(ConditionKind::kirchhoff, 0, 1);
  VertexCondition n = standard_condition(ConditionKind::neumann_decoupled, 0, 1);
  CHECK(same_condition(k, n));
}

TEST_CASE("delta(0) equals kirchhoff") {
  VertexCondition d0 = standard_condition(ConditionKind::delta, 0, 3, 0.0);
  VertexCondition k = standard_condition(ConditionKind::kirchhoff, 0, 3);
  CHECK(same_condition(d0, k));
  VertexCondition d1 = standard_condition(ConditionKind::delta, 0, 3, 1.0);
  CHECK_FALSE(same_condition(d1, k));
}

TEST_CASE("dirichlet subspace is {0} x C^d") {
  VertexCondition c = standard_condition(ConditionKind::dirichlet, 0, 2);
  VertexCondition explicit_pair{0, 2, ConditionKind::general, 0.0,
                                Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Zero(2, 2)};
  CHECK(same_condition(c, explicit_pair));
  CHECK_FALSE(same_condition(c, standard_condition(ConditionKind::neumann_decoupled, 0, 2)));
}

TEST_CASE("row scaling by invertible C preserves the subspace") {
  std::mt19937 gen(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int it = 0; it < 40; ++it) {
    const int d = 1 + it % 5;
    std::uniform_real_distribution<double> alpha(-2.0, 2.0);
    ConditionKind kinds[] = {ConditionKind::dirichlet, ConditionKind::neumann_decoupled,
                             ConditionKind::kirchhoff, ConditionKind::delta};
    VertexCondition base = standard_condition(kinds[it % 4], 0, d, alpha(gen));
    Eigen::MatrixXcd C(d, d);
    do {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) C(i, j) = Cplx(normal(gen), normal(gen));
    } while (std::abs(C.determinant()) < 1e-3);
    VertexCondition scaled{0, d, ConditionKind::general, 0.0, C * base.A, C * base.B};
    CHECK(is_lagrangian(scaled.A, scaled.B));
    CHECK(same_condition(base, scaled));
  }
}

namespace {

MetricGraph path_graph(int edges) {
  std::vector<VertexId> vs;
  std::vector<Edge> es;
  for (int v = 0; v <= edges; ++v) vs.push_back(v);
  for (int e = 0; e < edges; ++e) es.push_back({e, e, e + 1, 1.0});
  return MetricGraph(vs, es);
}

}  // namespace

TEST_CASE("dirichlet restriction on the path example") {
  MetricGraph g = path_graph(3);
  ConditionFamily family = uniform_family(g, ConditionKind::kirchhoff);
  InducedSubgraph sub = induced_subgraph(g, {1});
  ConditionFamily restricted = dirichlet_restriction(family, sub);
  REQUIRE(restricted.conditions.size() == 2);
  CHECK(restricted.conditions.at(1).kind == ConditionKind::dirichlet);
  CHECK(restricted.conditions.at(1).degree == 1);
  CHECK(restricted.conditions.at(2).kind == ConditionKind::dirichlet);
  CHECK(restricted.conditions.count(0) == 0);
}

TEST_CASE("restriction with full edge set is the identity") {
  MetricGraph g = path_graph(3);
  ConditionFamily family = uniform_family(g, ConditionKind::delta, 0.7);
  InducedSubgraph sub = induced_subgraph(g, {0, 1, 2});
  ConditionFamily restricted = dirichlet_restriction(family, sub);
  REQUIRE(restricted.conditions.size() == family.conditions.size());
  for (const auto& [v, cond] : family.conditions)
    CHECK(same_condition(cond, restricted.conditions.at(v)));
}

TEST_CASE("restriction is idempotent") {
  MetricGraph g = path_graph(4);
  ConditionFamily family = uniform_family(g, ConditionKind::kirchhoff);
  InducedSubgraph sub = induced_subgraph(g, {1, 2});
  ConditionFamily once = dirichlet_restriction(family, sub);
  ConditionFamily twice = dirichlet_restriction(once, sub);
  REQUIRE(once.conditions.size() == twice.conditions.size());
  for (const auto& [v, cond] : once.conditions) CHECK(same_condition(cond, twice.conditions.at(v)));
}

TEST_CASE("restriction of the lattice window") {
  LatticeWindow w = build_lattice_graph(1, 4);
  ConditionFamily family = uniform_family(w.graph, ConditionKind::kirchhoff);
  InducedSubgraph sub = induced_subgraph(w.graph, w.window_edges);
  ConditionFamily restricted = dirichlet_restriction(family, sub);
  for (VertexId v : sub.subgraph_vertices()) {
    const auto& cond = restricted.conditions.at(v);
    if (sub.boundary.count(v)) {
      CHECK(cond.kind == ConditionKind::dirichlet);
      CHECK(cond.degree == sub.subgraph_degree(v));
    } else {
      CHECK(cond.kind == ConditionKind::kirchhoff);
    }
  }
}

TEST_CASE("restriction requires coverage") {
  MetricGraph g = path_graph(3);
  ConditionFamily family = uniform_family(g, ConditionKind::kirchhoff);
  family.conditions.erase(1);
  InducedSubgraph sub = induced_subgraph(g, {1});
  CHECK_THROWS_AS(dirichlet_restriction(family, sub), InputError);
}

TEST_CASE("family validation checks degree") {
  MetricGraph g = path_graph(2);
  ConditionFamily family = uniform_family(g, ConditionKind::kirchhoff);
  family.conditions.at(1) = standard_condition(ConditionKind::kirchhoff, 1, 3);
  CHECK_THROWS_AS(validate_family(family, g), InputError);
}

TEST_CASE("family serialization round trip") {
  MetricGraph g = path_graph(3);
  ConditionFamily family = uniform_family(g, ConditionKind::kirchhoff);
  family.conditions.at(1) = standard_condition(ConditionKind::delta, 1, 2, -0.375);
  family.conditions.at(2) = standard_condition(ConditionKind::dirichlet, 2, 2);
  // one general entry
  VertexCondition gen = standard_condition(ConditionKind::kirchhoff, 0, 1);
  gen.kind = ConditionKind::general;
  family.conditions.at(0) = gen;

  const std::string path = "family_roundtrip_test.txt";
  save_family(family, path);
  ConditionFamily back = load_family(path);
  REQUIRE(back.conditions.size() == family.conditions.size());
  for (const auto& [v, cond] : family.conditions) {
    CHECK(back.conditions.at(v).kind == cond.kind);
    CHECK(same_condition(cond, back.conditions.at(v)));
  }
  CHECK(back.conditions.at(1).alpha == family.conditions.at(1).alpha);
  std::remove(path.c_str());
}
