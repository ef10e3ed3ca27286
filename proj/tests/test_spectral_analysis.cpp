#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qgalloy/errors.hpp"
#include "qgalloy/fixtures.hpp"
#include "qgalloy/spectral.hpp"

using namespace qgalloy;

namespace {

std::set<EdgeId> all_edges(const MetricGraph& g) {
  std::set<EdgeId> out;
  for (const auto& e : g.edges()) out.insert(e.id);
  return out;
}

DiscretizedOperator free_operator(const MetricGraph& g, const ConditionFamily& fam, double h) {
  PotentialField field;
  return assemble_field(induced_subgraph(g, all_edges(g)), fam, field, h);
}

}  // namespace

TEST_CASE("projector traces count closed-interval eigenvalues") {
  MetricGraph g = make_interval(oracle::kPi);
  auto fam = uniform_family(g, ConditionKind::dirichlet);
  DiscretizedOperator op = free_operator(g, fam, 0.005);
  CHECK(trace_projector(op, 0.5, 4.5) == 2);
  CHECK(trace_projector(op, 5.0, 8.0) == 0);
  CHECK(trace_projector(op, 0.0, 9.5) == 3);

  MetricGraph loop = make_loop(2.0 * oracle::kPi);
  DiscretizedOperator lop = free_operator(loop, uniform_family(loop, ConditionKind::kirchhoff), 0.005);
  CHECK(trace_projector(lop, -0.5, 0.5) == 1);
  CHECK(trace_projector(lop, 0.5, 1.5) == 2);
}

TEST_CASE("identical operators have vanishing shift function") {
  MetricGraph g = make_star(3, 1.0);
  auto fam = uniform_family(g, ConditionKind::kirchhoff);
  DiscretizedOperator op = free_operator(g, fam, 0.01);
  std::vector<double> grid{0.1, 1.0, 2.5, 5.0, 9.0};
  SsfSample s = ssf(op, op, grid);
  for (int v : s.xi) CHECK(v == 0);
}

TEST_CASE("constant shift reproduces the translated counting function") {
  MetricGraph g = make_interval(oracle::kPi);
  auto fam = uniform_family(g, ConditionKind::dirichlet);
  DiscretizedOperator op1 = free_operator(g, fam, 0.005);

  AlloyModel model = indicator_model(g, SingleSiteDistribution::point_mass(0.5));
  Configuration c;
  c.coupling[0] = 0.5;
  DiscretizedOperator op2 = assemble(induced_subgraph(g, {0}), fam, model, c, 0.005);

  std::vector<double> grid{0.25, 0.75, 1.25, 3.8, 4.3, 9.2, 9.7};
  std::vector<int> expected{0, 0, -1, 0, -1, -1, 0};
  SsfSample s = ssf(op1, op2, grid);
  REQUIRE(s.xi.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(s.xi[i] == expected[i]);
}

TEST_CASE("rank-one coupling change moves the shift function by at most one") {
  MetricGraph g = make_interval(oracle::kPi);
  ConditionFamily soft, hard;
  soft.conditions[0] = standard_condition(ConditionKind::delta, 0, 1, 0.0);
  soft.conditions[1] = standard_condition(ConditionKind::dirichlet, 1, 1);
  hard.conditions[0] = standard_condition(ConditionKind::delta, 0, 1, 2.0);
  hard.conditions[1] = standard_condition(ConditionKind::dirichlet, 1, 1);
  DiscretizedOperator op1 = free_operator(g, soft, 0.005);
  DiscretizedOperator op2 = free_operator(g, hard, 0.005);
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(0.05 + 9.6 * i / 99.0);
  SsfSample s = ssf(op1, op2, grid);
  bool any = false;
  for (int v : s.xi) {
    CHECK(std::abs(v) <= 1);
    any = any || v != 0;
  }
  CHECK(any);
}

TEST_CASE("decoupling bound on a chain window") {
  MetricGraph g({0, 1, 2, 3, 4},
                {{0, 0, 1, 1.0}, {1, 1, 2, 1.0}, {2, 2, 3, 1.0}, {3, 3, 4, 1.0}});
  ConditionFamily fam;
  fam.conditions[0] = standard_condition(ConditionKind::dirichlet, 0, 1);
  fam.conditions[4] = standard_condition(ConditionKind::dirichlet, 4, 1);
  for (VertexId v = 1; v <= 3; ++v)
    fam.conditions[v] = standard_condition(ConditionKind::kirchhoff, v, 2);

  PotentialField w1, w2;
  w2.per_edge[1] = PiecewiseConstant::indicator(0.2, 0.8, 1.0, 2.0);
  std::vector<double> grid{0.2, 0.7, 1.3, 2.1, 3.4, 5.0, 7.5};
  SsfDecouplingReport rep = check_ssf_decoupling(g, {1, 2}, fam, w1, w2, grid, 0.01);
  CHECK(rep.boundary_degree_sum == 4);
  CHECK(rep.pass);
  CHECK(rep.min_margin >= 0.0);

  // perturbation outside the window
  PotentialField w3;
  w3.per_edge[3] = PiecewiseConstant::indicator(0.2, 0.8, 1.0, 2.0);
  CHECK_THROWS_AS(check_ssf_decoupling(g, {1, 2}, fam, w1, w3, grid, 0.01), InputError);
}

TEST_CASE("decoupling bound on random fixtures") {
  for (int i = 0; i < 3; ++i) {
    SsfFixture fx = random_ssf_fixture(1001, i, true);
    SsfDecouplingReport rep =
        check_ssf_decoupling(fx.graph, fx.lambda_set, fx.family, fx.w1, fx.w2, fx.grid, fx.h);
    CHECK(rep.pass);
    CHECK(rep.min_margin >= 0.0);
  }
}

TEST_CASE("volume bound for the shift function") {
  MetricGraph g = make_star(3, 1.0);
  auto fam = uniform_family(g, ConditionKind::kirchhoff);
  PotentialField w1, w2;
  w2.per_edge[0] = PiecewiseConstant::constant(3.0, 1.0);
  std::vector<double> grid{0.3, 1.1, 2.4, 4.2, 6.6, 9.1};
  SsfVolumeReport rep = check_ssf_volume_bound(g, fam, w1, w2, grid, 0.01);
  CHECK(rep.bound == doctest::Approx(std::sqrt(3.0) * 3.0 / oracle::kPi + 15.0).epsilon(1e-12));
  CHECK(rep.pass);
  CHECK(rep.min_margin >= 0.0);

  for (int i = 0; i < 3; ++i) {
    SsfFixture fx = random_ssf_fixture(1002, i, false);
    SsfVolumeReport r =
        check_ssf_volume_bound(fx.graph, fx.family, fx.w1, fx.w2, fx.grid, fx.h);
    CHECK(r.pass);
  }
}

TEST_CASE("coupling derivative of a full-edge site is exactly one") {
  MetricGraph g = make_interval(1.0);
  auto fam = uniform_family(g, ConditionKind::dirichlet);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::uniform(0, 1));
  Configuration c;
  c.coupling[0] = 0.3;
  InducedSubgraph sub = induced_subgraph(g, {0});
  for (int n = 0; n < 3; ++n) {
    auto r = hellmann_feynman(sub, fam, model, c, n, 0, 0.01);
    CHECK(r.derivative == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(r.degenerate);
  }
}

TEST_CASE("coupling derivative matches the ground-state window mass") {
  MetricGraph g = make_interval(1.0);
  auto fam = uniform_family(g, ConditionKind::dirichlet);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::uniform(0, 1));
  model.sites.at(0).profile = PiecewiseConstant::indicator(0.25, 0.75, 1.0);
  Configuration c;
  c.coupling[0] = 0.0;
  InducedSubgraph sub = induced_subgraph(g, {0});
  // int_{1/4}^{3/4} 2 sin^2(pi x) dx = 1/2 + 1/pi
  auto r = hellmann_feynman(sub, fam, model, c, 0, 0, 0.002);
  CHECK(r.derivative == doctest::Approx(0.5 + 1.0 / oracle::kPi).epsilon(1e-4));
}

TEST_CASE("coupling derivative of the antisymmetric mode is exactly one half") {
  MetricGraph g = make_interval(1.0);
  auto fam = uniform_family(g, ConditionKind::dirichlet);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::uniform(0, 1));
  model.sites.at(0).profile = PiecewiseConstant::indicator(0.0, 0.5, 1.0);
  Configuration c;
  c.coupling[0] = 0.0;
  auto r = hellmann_feynman(induced_subgraph(g, {0}), fam, model, c, 1, 0, 0.01);
  CHECK(r.derivative == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("coupling derivative vanishes off the eigenfunction support") {
  MetricGraph g({0, 1, 2}, {{0, 0, 1, 1.0}, {1, 1, 2, 2.0}});
  ConditionFamily fam;
  fam.conditions[0] = standard_condition(ConditionKind::dirichlet, 0, 1);
  fam.conditions[1] = standard_condition(ConditionKind::neumann_decoupled, 1, 2);
  fam.conditions[2] = standard_condition(ConditionKind::dirichlet, 2, 1);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::uniform(0, 1));
  Configuration c;
  c.coupling[0] = 0.0;
  c.coupling[1] = 0.0;
  // ground state lives on the long edge; the site on edge 0 cannot move it
  auto r = hellmann_feynman(induced_subgraph(g, {0, 1}), fam, model, c, 0, 0, 0.005);
  CHECK(std::abs(r.derivative) < 1e-12);
}

TEST_CASE("coupling derivative agrees with finite differences") {
  MetricGraph g = make_interval(1.0);
  auto fam = uniform_family(g, ConditionKind::dirichlet);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::uniform(0, 1));
  model.sites.at(0).profile = PiecewiseConstant::indicator(0.25, 0.75, 1.0);
  InducedSubgraph sub = induced_subgraph(g, {0});
  const double h = 0.005, delta = 1e-4;
  for (int n = 0; n < 3; ++n) {
    Configuration c;
    c.coupling[0] = 0.7;
    auto r = hellmann_feynman(sub, fam, model, c, n, 0, h);
    Configuration up = c, down = c;
    up.coupling[0] += delta;
    down.coupling[0] -= delta;
    auto lu = eigenvalues_below(assemble(sub, fam, model, up, h), 120.0).eigenvalues;
    auto ld = eigenvalues_below(assemble(sub, fam, model, down, h), 120.0).eigenvalues;
    const double fd = (lu[n] - ld[n]) / (2.0 * delta);
    CHECK(std::abs(r.derivative - fd) < std::max(1e-6, 10.0 * delta * delta));
  }
}

TEST_CASE("degenerate pairs need the averaging flag") {
  MetricGraph g = make_loop(2.0 * oracle::kPi);
  auto fam = uniform_family(g, ConditionKind::kirchhoff);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::uniform(0, 1));
  model.sites.at(0).profile =
      PiecewiseConstant::indicator(0.0, oracle::kPi / 2.0, 2.0 * oracle::kPi);
  Configuration c;
  c.coupling[0] = 0.0;
  InducedSubgraph sub = induced_subgraph(g, {0});
  CHECK_THROWS_AS(hellmann_feynman(sub, fam, model, c, 1, 0, 0.005), AccuracyError);
  auto r = hellmann_feynman(sub, fam, model, c, 1, 0, 0.005, true);
  CHECK(r.degenerate);
  CHECK(r.multiplicity == 2);
  CHECK(r.derivative == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("uniform unit site lifts every eigenvalue at unit rate") {
  MetricGraph g = make_star(3, 1.0);
  auto fam = uniform_family(g, ConditionKind::kirchhoff);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::uniform(0, 1));
  Configuration c;
  for (int e = 0; e < 3; ++e) c.coupling[e] = 0.4;
  InducedSubgraph sub = induced_subgraph(g, {0, 1, 2});
  auto lift = eigenvalue_lift(sub, fam, model, c, 1e-3, 3.0, 0.01);
  REQUIRE(lift.has_value());
  CHECK(lift->measured == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lift->hf_floor == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lift->eigenvalues_below >= 1);
}

TEST_CASE("covering-compliant windows yield a positive lift") {
  MetricGraph g = make_interval(1.0);
  auto fam = uniform_family(g, ConditionKind::neumann_decoupled);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::uniform(0, 1));
  model.sites.at(0).profile = PiecewiseConstant::indicator(0.25, 0.75, 1.0);
  model.sites.at(0).window_lo = 0.25;
  model.sites.at(0).window_hi = 0.75;
  const double lambda0 = 0.5;
  AlloyModel scaled = enforce_covering(model, 1e-5, lambda0);
  Configuration c = sample_configuration(scaled, {0}, 31, 0);
  InducedSubgraph sub = induced_subgraph(g, {0});

  auto lift = eigenvalue_lift(sub, fam, scaled, c, 1e-5, lambda0, 0.01);
  REQUIRE(lift.has_value());
  CHECK(lift->measured > 0.0);
  CHECK(lift->hf_floor > 0.0);
  CHECK(lift->measured == doctest::Approx(lift->hf_floor).epsilon(1e-3));
  CHECK(lift->minimizing_index >= 1);
}

TEST_CASE("lift is empty above the spectrum") {
  MetricGraph g = make_interval(1.0);
  auto fam = uniform_family(g, ConditionKind::dirichlet);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::uniform(0, 1));
  Configuration c;
  c.coupling[0] = 0.1;
  auto lift = eigenvalue_lift(induced_subgraph(g, {0}), fam, model, c, 1e-3, 1.0, 0.01);
  CHECK_FALSE(lift.has_value());
}

TEST_CASE("full-edge windows are observable with unit ratio") {
  MetricGraph g = make_interval(oracle::kPi);
  auto fam = uniform_family(g, ConditionKind::neumann_decoupled);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::point_mass(0.2));
  Configuration c = sample_configuration(model, {0}, 1, 0);
  ObservabilityReport rep =
      observability_check(induced_subgraph(g, {0}), fam, model, c, 5.0, 0.005);
  REQUIRE(!rep.rows.empty());
  for (const auto& row : rep.rows) {
    CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(row.slack >= 1.0);
  }
  CHECK(rep.pass);
}

TEST_CASE("half-interval window slack follows the covering constant") {
  MetricGraph g = make_interval(oracle::kPi);
  auto fam = uniform_family(g, ConditionKind::dirichlet);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::point_mass(0.0));
  model.sites.at(0).profile = PiecewiseConstant::indicator(0.0, oracle::kPi / 2, oracle::kPi);
  model.sites.at(0).window_lo = 0.0;
  model.sites.at(0).window_hi = oracle::kPi / 2;
  Configuration c;
  c.coupling[0] = 0.0;
  ObservabilityReport rep =
      observability_check(induced_subgraph(g, {0}), fam, model, c, 1.5, 0.005);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].ratio == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(rep.rows[0].slack == doctest::Approx(std::exp(8.0 * oracle::kPi)).epsilon(0.01));
  CHECK(rep.pass);
}

TEST_CASE("edges without eigenfunction mass are skipped") {
  MetricGraph g({0, 1, 2}, {{0, 0, 1, 1.0}, {1, 1, 2, 1.3}});
  ConditionFamily fam;
  fam.conditions[0] = standard_condition(ConditionKind::dirichlet, 0, 1);
  fam.conditions[1] = standard_condition(ConditionKind::neumann_decoupled, 1, 2);
  fam.conditions[2] = standard_condition(ConditionKind::dirichlet, 2, 1);
  AlloyModel model = indicator_model(g, SingleSiteDistribution::point_mass(0.0));
  Configuration c;
  c.coupling[0] = 0.0;
  c.coupling[1] = 0.0;
  InducedSubgraph sub = induced_subgraph(g, {0, 1});
  ObservabilityReport rep = observability_check(sub, fam, model, c, 30.0, 0.005);
  const int below = count_below(assemble(sub, fam, model, c, 0.005), 30.0);
  CHECK(static_cast<int>(rep.rows.size()) == below);  // one row per eigenpair
  for (const auto& row : rep.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.pass);
}

TEST_CASE("switch function ramp, bounds and slope") {
  const double lam = 2.0, eps = 0.25;
  SwitchFunction rho(lam, eps);
  CHECK(rho(lam - 2 * eps) == -1.0);
  CHECK(rho(lam - eps) == -1.0);  // ramp is narrower than eps
  CHECK(rho(lam + eps) == 0.0);
  CHECK(rho(lam + 2 * eps) == 0.0);
  CHECK(rho(lam) == doctest::Approx(-0.5).epsilon(1e-12));

  double prev = -1.0;
  double max_slope = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = lam - 3 * eps + 6 * eps * i / 2000.0;
    const double v = rho(x);
    CHECK(v >= prev - 1e-15);
    CHECK(v >= -1.0);
    CHECK(v <= 0.0);
    prev = v;
    max_slope = std::max(max_slope, rho.derivative(x));
    CHECK(rho.derivative(x) >= 0.0);
  }
  CHECK(rho.derivative(lam) == doctest::Approx(1.0 / eps).epsilon(1e-12));
  CHECK(max_slope <= 1.0 / eps + 1e-12);
}

TEST_CASE("switch differences dominate the window indicator") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> U(0.05, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double lam = 4.0 * U(gen), eps = U(gen);
    SwitchFunction rho(lam, eps);
    for (int i = 0; i <= 400; ++i) {
      const double x = lam - 4 * eps + 8 * eps * i / 400.0;
      const double indicator =
          (x >= lam - eps && x <= lam + eps) ? 1.0 : 0.0;
      CHECK(rho(x + 2 * eps) - rho(x - 2 * eps) >= indicator - 1e-12);
    }
  }
}

TEST_CASE("monotone shift inequality on the identity test function") {
  SampledFunction phi{{-1.0, 3.0}, {-1.0, 3.0}};
  auto rep = monotone_shift_inequality(phi, SingleSiteDistribution::uniform(0, 1), 0.1);
  CHECK(rep.lhs == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(rep.rhs == doctest::Approx(0.56).epsilon(1e-6));
  CHECK(rep.holds);
}

TEST_CASE("monotone shift inequality degenerate cases") {
  SampledFunction flat{{-1.0, 3.0}, {2.0, 2.0}};
  auto rep = monotone_shift_inequality(flat, SingleSiteDistribution::uniform(0, 1), 0.1);
  CHECK(rep.lhs == doctest::Approx(0.0).scale(1.0));
  CHECK(rep.holds);

  SampledFunction id{{-1.0, 3.0}, {-1.0, 3.0}};
  auto pm = monotone_shift_inequality(id, SingleSiteDistribution::point_mass(0.5), 0.1);
  CHECK(pm.lhs == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(pm.rhs == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(pm.holds);

  SampledFunction wiggle{{0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}};
  CHECK_THROWS_AS(monotone_shift_inequality(wiggle, SingleSiteDistribution::uniform(0, 1), 0.1),
                  InputError);
}

TEST_CASE("monotone shift inequality holds on random triples") {
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int knots = 2 + static_cast<int>(U(gen) * 4);
    std::vector<double> xs, ys;
    double x = -2.0 + U(gen), y = -1.0 + U(gen);
    for (int i = 0; i < knots; ++i) {
      xs.push_back(x);
      ys.push_back(y);
      x += 0.3 + 2.0 * U(gen);
      y += 1.5 * U(gen);
    }
    SampledFunction phi{xs, ys};

    SingleSiteDistribution mu = SingleSiteDistribution::uniform(0, 1);
    switch (rep % 5) {
      case 0: mu = SingleSiteDistribution::uniform(-0.5 - U(gen), 0.5 + U(gen)); break;
      case 1: mu = SingleSiteDistribution::bernoulli(0.2 + 0.6 * U(gen), 0.0, 0.5 + U(gen)); break;
      case 2: mu = SingleSiteDistribution::power_hoelder(0.5 + 2.0 * U(gen), 0.5 + U(gen)); break;
      case 3: mu = SingleSiteDistribution::log_hoelder(2.0 + 3.0 * U(gen), 0.5 + U(gen)); break;
      case 4: mu = SingleSiteDistribution::point_mass(U(gen)); break;
    }
    const double eps_prime = 0.01 + 0.29 * U(gen);
    auto r = monotone_shift_inequality(phi, mu, eps_prime);
    CHECK(r.holds);
    CHECK(r.rhs >= r.lhs - 1e-9);
  }
}
