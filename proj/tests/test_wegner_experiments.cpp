#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qgalloy/errors.hpp"
#include "qgalloy/experiments.hpp"

using namespace qgalloy;

namespace {

WegnerScanSpec smoke_spec() {
  WegnerScanSpec spec;
  spec.nu = 1;
  spec.window_sizes = {4, 6};
  spec.distribution = SingleSiteDistribution::uniform(0.0, 1.0);
  spec.lambda = 0.9;
  spec.lambda0 = 2.0;
  spec.epsilons = {0.2, 0.1};
  spec.trials = 60;
  spec.seed = 7;
  return spec;
}

bool same_cells(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    const auto& x = a.cells[i];
    const auto& y = b.cells[i];
    if (x.l != y.l || x.eps != y.eps) return false;
    if (x.mean != y.mean || x.std_error != y.std_error) return false;
    if (x.ratio != y.ratio) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("scan plan validation") {
  WegnerScanSpec spec = smoke_spec();
  CHECK_NOTHROW(spec.validate());
  spec.epsilons = {0.6};
  CHECK_THROWS_AS(spec.validate(), InputError);
  spec = smoke_spec();
  spec.trials = 0;
  CHECK_THROWS_AS(spec.validate(), InputError);
  spec = smoke_spec();
  spec.window_sizes = {1, 4};
  CHECK_THROWS_AS(spec.validate(), InputError);
  spec = smoke_spec();
  spec.lambda = 2.5;  // above lambda0
  CHECK_THROWS_AS(spec.validate(), InputError);
}

TEST_CASE("too-coarse meshes are rejected before sampling") {
  WegnerScanSpec spec = smoke_spec();
  spec.h = 0.1;  // lambda_max = 4, need 4 (lambda0 + 1) = 12
  spec.trials = 1000000;
  CHECK_THROWS_AS(wegner_scan(spec), AccuracyError);
}

TEST_CASE("scan cells carry the expected geometry and modulus") {
  WegnerScanSpec spec = smoke_spec();
  ExperimentReport rep = wegner_scan(spec);
  REQUIRE(rep.cells.size() == 4);
  for (const auto& cell : rep.cells) {
    CHECK((cell.l == 4 || cell.l == 6));
    CHECK(cell.edges == cell.l);  // nu = 1
    CHECK(cell.trials == 60);
    CHECK(cell.s_mu == doctest::Approx(oracle::s_uniform(0, 1, cell.eps)).epsilon(1e-6));
    CHECK(cell.mean >= 0.0);
    CHECK(cell.ratio ==
          doctest::Approx(cell.mean / (cell.s_mu * cell.edges)).epsilon(1e-12));
  }
  CHECK(rep.fitted_cw > 0.0);
  CHECK(rep.weyl_violations == 0);
  CHECK(rep.h == doctest::Approx(0.1 / std::sqrt(3.0)));
  REQUIRE(rep.intercepts.size() == 2);

  // window means grow with the energy window at fixed l
  for (int l : {4, 6}) {
    double wide = -1.0, narrow = -1.0;
    for (const auto& cell : rep.cells) {
      if (cell.l != l) continue;
      (cell.eps == 0.2 ? wide : narrow) = cell.mean;
    }
    CHECK(wide >= narrow);
  }
}

TEST_CASE("scan results are deterministic across runs and thread counts") {
  WegnerScanSpec spec = smoke_spec();
  ExperimentReport a = wegner_scan(spec);
  ExperimentReport b = wegner_scan(spec);
  CHECK(same_cells(a, b));
  spec.threads = 4;
  ExperimentReport c = wegner_scan(spec);
  CHECK(same_cells(a, c));
  CHECK(a.fitted_cw == c.fitted_cw);
}

TEST_CASE("frozen couplings away from the spectrum give empty cells") {
  WegnerScanSpec spec = smoke_spec();
  spec.distribution = SingleSiteDistribution::point_mass(0.0);
  spec.lambda = 0.45;
  spec.epsilons = {0.1, 0.05};
  spec.trials = 20;
  ExperimentReport rep = wegner_scan(spec);
  for (const auto& cell : rep.cells) {
    CHECK(cell.mean == 0.0);
    CHECK(cell.ratio == 0.0);
  }
  CHECK(rep.fitted_cw == 0.0);
  CHECK(rep.pass);
}

TEST_CASE("weak window probability passes at a comfortable scale") {
  WegnerScanSpec spec;
  spec.nu = 1;
  spec.distribution = SingleSiteDistribution::uniform(0.0, 1.0);
  spec.lambda0 = 1.0;
  spec.trials = 400;
  spec.seed = 21;
  WeakWegnerReport rep = weak_wegner_probability(20, 0.8, 2.0, 0.45, spec);
  CHECK(rep.width == doctest::Approx(std::exp(-std::pow(20.0, 0.8))));
  CHECK_FALSE(rep.clamped);
  CHECK(rep.threshold == doctest::Approx(std::pow(20.0, -2.0)));
  CHECK(rep.trials == 400);
  CHECK(rep.p_hat <= rep.threshold + 2.0 * rep.std_error);
  CHECK(rep.pass);
  CHECK(rep.markov_p <= rep.markov_mean + 1e-12);
}

TEST_CASE("widths below counting resolution are clamped and flagged") {
  WegnerScanSpec spec;
  spec.nu = 1;
  spec.distribution = SingleSiteDistribution::uniform(0.0, 1.0);
  spec.lambda0 = 1.0;
  spec.trials = 40;
  spec.seed = 3;
  WeakWegnerReport rep = weak_wegner_probability(6, 3.0, 2.0, 0.45, spec);
  CHECK(rep.clamped);
  CHECK(rep.width >= 1e-12);
}

TEST_CASE("an atom sitting on an eigenvalue defeats the weak bound") {
  WegnerScanSpec spec;
  spec.nu = 1;
  spec.distribution = SingleSiteDistribution::point_mass(0.0);
  spec.lambda0 = 1.0;
  spec.trials = 50;
  spec.seed = 4;
  spec.h = 0.05;

  // the deterministic window operator at l = 6 is a Dirichlet chain
  LatticeWindow w = build_lattice_graph(1, 6);
  InducedSubgraph sub = induced_subgraph(w.graph, w.window_edges);
  ConditionFamily fam = dirichlet_restriction(
      uniform_family(w.graph, ConditionKind::kirchhoff), sub);
  PotentialField field;
  DiscretizedOperator op = assemble_field(sub, fam, field, 0.05);
  const double lam1 = lowest_eigenvalues(op, 1).eigenvalues.at(0);

  WeakWegnerReport rep = weak_wegner_probability(6, 0.8, 2.0, lam1, spec);
  CHECK(rep.p_hat == 1.0);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("threshold scale arithmetic") {
  LogHoelderThreshold t = loghoelder_threshold(1.0, 1.0, 5.0, 1.0, 2.0, 2.0);
  CHECK(t.delta == doctest::Approx(1.0));
  CHECK(t.valid);

  t = loghoelder_threshold(1.0, 1.0, 4.0, 1.0, 2.0, 2.0);
  CHECK(t.delta == doctest::Approx(0.0).scale(1.0));
  CHECK_FALSE(t.valid);

  t = loghoelder_threshold(4.0, 2.0, 3.0, 2.0, 2.0, 1.0);
  CHECK(t.delta == doctest::Approx(3.0));
  CHECK(t.valid);
  CHECK(t.l1 == doctest::Approx(2.0));  // (4 * 2)^(1/3)

  // l0 dominates when the constant is small
  t = loghoelder_threshold(0.5, 0.5, 3.0, 2.0, 2.0, 1.0, 3.0);
  CHECK(t.l1 == doctest::Approx(3.0));

  CHECK_THROWS_AS(loghoelder_threshold(-1.0, 1.0, 5.0, 1.0, 2.0, 2.0), InputError);
  CHECK_THROWS_AS(loghoelder_threshold(1.0, 0.0, 5.0, 1.0, 2.0, 2.0), InputError);
}

TEST_CASE("threshold chain holds at and beyond the crossover scale") {
  CHECK(loghoelder_chain_holds(4.0, 2.0, 3.0, 2.0, 2.0, 1.0, 2.0));
  CHECK(loghoelder_chain_holds(1.0, 1.0, 5.0, 1.0, 2.0, 2.0, 1.0));
  // below the crossover the comparison fails
  CHECK_FALSE(loghoelder_chain_holds(4.0, 2.0, 3.0, 2.0, 2.0, 1.0, 0.5));
}

TEST_CASE("initial scale probabilities trend downward") {
  WegnerScanSpec spec;
  spec.nu = 1;
  spec.window_sizes = {6, 10, 16};
  spec.distribution = SingleSiteDistribution::power_hoelder(2.0, 1.0);
  spec.lambda0 = 1.0;
  spec.trials = 200;
  spec.seed = 11;
  InitialScaleReport rep = initial_scale_check(spec, 1.0, 1.8);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.tau == doctest::Approx(2.0));
  CHECK(rep.xi_exp == doctest::Approx(1.0));
  CHECK(rep.beta == doctest::Approx(1.8));
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    CHECK(row.window == doctest::Approx(std::pow(row.l, -0.2)));
    CHECK(row.comparison == doctest::Approx(std::pow(row.l, -1.0)));
    CHECK(row.trials == 200);
    CHECK(row.p_hat >= 0.0);
    CHECK(row.p_hat <= 1.0);
  }
  CHECK(rep.trend_ok);
}

TEST_CASE("initial scale rejects unusable distributions and exponents") {
  WegnerScanSpec spec;
  spec.nu = 1;
  spec.window_sizes = {6, 10};
  spec.lambda0 = 1.0;
  spec.trials = 10;
  spec.distribution = SingleSiteDistribution::uniform(0.0, 1.0);
  CHECK_THROWS_AS(initial_scale_check(spec, 1.0, 1.8), InputError);

  spec.distribution = SingleSiteDistribution::power_hoelder(0.4, 1.0);  // tau <= nu/2
  CHECK_THROWS_AS(initial_scale_check(spec, 0.1, 1.8), InputError);

  spec.distribution = SingleSiteDistribution::power_hoelder(2.0, 1.0);
  CHECK_THROWS_AS(initial_scale_check(spec, 3.5, 1.8), InputError);  // xi >= 2 tau - nu
  CHECK_THROWS_AS(initial_scale_check(spec, -0.5, 1.8), InputError);
}

TEST_CASE("window boundary conditions shift the constant by a bounded factor") {
  WegnerScanSpec spec = smoke_spec();
  spec.trials = 80;
  std::vector<std::pair<ConditionKind, double>> kinds{
      {ConditionKind::dirichlet, 0.0},
      {ConditionKind::kirchhoff, 0.0},
      {ConditionKind::delta, 1.0}};
  BoundaryConditionSweep sweep = boundary_condition_sweep(spec, kinds);
  REQUIRE(sweep.entries.size() == 3);
  for (const auto& entry : sweep.entries) CHECK(entry.fitted_cw > 0.0);
  CHECK(sweep.spread_factor >= 1.0);
  CHECK(sweep.spread_factor <= 4.0);
  CHECK(sweep.pass);

  kinds.push_back({ConditionKind::general, 0.0});
  CHECK_THROWS_AS(boundary_condition_sweep(spec, kinds), CapabilityError);
}

TEST_CASE("free counting measure converges and bounds its increments") {
  IdsSpec ids;
  ids.base = smoke_spec();
  ids.base.window_sizes = {4, 8};
  ids.base.distribution = SingleSiteDistribution::point_mass(0.0);
  ids.base.trials = 5;
  ids.base.lambda0 = 2.0;
  ids.lambda_grid = {0.3, 0.7, 1.2};
  ids.increment_center = 0.62;
  ids.increment_epsilons = {0.1, 0.05};
  IdsEstimate est = ids_estimate(ids, 1.0);
  REQUIRE(est.window_sizes == std::vector<int>{4, 8});
  REQUIRE(est.mean_scaled.size() == 2);
  REQUIRE(est.mean_scaled[0].size() == 3);
  CHECK(est.limit_curve == est.mean_scaled.back());
  CHECK(est.convergence_gap >= 0.0);
  for (const auto& row : est.se_scaled)
    for (double se : row) CHECK(se == 0.0);

  // the Dirichlet chain of length 8 has exactly one eigenvalue near 0.617,
  // inside (0.52, 0.72] and (0.57, 0.67] alike
  REQUIRE(est.increments.size() == 2);
  for (const auto& inc : est.increments) {
    CHECK(inc.value == doctest::Approx(1.0 / 8.0));
    CHECK(inc.holds);
  }
  CHECK(est.increments_pass);

  IdsEstimate again = ids_estimate(ids, 1.0);
  CHECK(again.convergence_gap == est.convergence_gap);
}

TEST_CASE("random counting measure stays near its limit at small scales") {
  IdsSpec ids;
  ids.base = smoke_spec();
  ids.base.window_sizes = {4, 8};
  ids.base.trials = 40;
  ids.lambda_grid = {0.5, 1.0};
  ids.increment_center = 0.8;
  ids.increment_epsilons = {0.1};
  IdsEstimate est = ids_estimate(ids, 2.0);
  CHECK(est.convergence_gap < 0.5);
  REQUIRE(est.increments.size() == 1);
  CHECK(est.increments[0].bound ==
        doctest::Approx(2.0 * oracle::s_uniform(0, 1, 0.1)).epsilon(1e-6));
  CHECK(est.increments_pass);
}
