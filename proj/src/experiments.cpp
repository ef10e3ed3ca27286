#include "qgalloy/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qgalloy/assembly.hpp"
#include "qgalloy/errors.hpp"

namespace qgalloy {

namespace {

constexpr double kPi = 3.14159265358979323846;

// AlloyModel keeps a pointer into lattice.graph, so setups are heap-pinned
// and never moved after construction.
struct WindowSetup {
  LatticeWindow lattice;
  InducedSubgraph sub;
  ConditionFamily family;
  AlloyModel model;
};

void require_assemblable(ConditionKind kind, const std::string& which) {
  if (kind == ConditionKind::general)
    throw CapabilityError(which + " window condition must be one of the standard kinds");
}

std::unique_ptr<WindowSetup> make_window(const WegnerScanSpec& spec, int l) {
  auto setup = std::make_unique<WindowSetup>(WindowSetup{
      build_lattice_graph(spec.nu, l),
      InducedSubgraph{},
      ConditionFamily{},
      AlloyModel{nullptr, {}, spec.distribution, std::nullopt}});
  setup->sub = induced_subgraph(setup->lattice.graph, setup->lattice.window_edges);
  for (VertexId v : setup->sub.interior)
    setup->family.conditions.emplace(
        v, standard_condition(spec.interior_condition, v, setup->sub.subgraph_degree(v),
                              spec.alpha));
  for (VertexId v : setup->sub.boundary)
    setup->family.conditions.emplace(
        v, standard_condition(spec.boundary_condition, v, setup->sub.subgraph_degree(v),
                              spec.alpha));
  setup->model.graph = &setup->lattice.graph;
  for (EdgeId e : setup->lattice.window_edges) {
    const Edge& edge = setup->lattice.graph.edge(e);
    setup->model.sites.emplace(
        e, SingleSitePotential{e, PiecewiseConstant::constant(1.0, edge.length), 0.0,
                               edge.length});
  }
  return setup;
}

// Counting is trusted on the lower quarter of the mesh range.
void check_mesh(double h, double probe_sup) {
  const double ceiling = 0.04 / (h * h);
  if (!(probe_sup <= ceiling / 4.0 + 1e-12))
    throw AccuracyError("mesh too coarse for the requested energies: refine h");
}

void run_trials(int threads, int total, const std::function<void(int)>& body) {
  if (threads <= 1 || total <= 1) {
    for (int t = 0; t < total; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  std::mutex gate;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return;
      const int t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= total) return;
      try {
        body(t);
      } catch (...) {
        stop.store(true, std::memory_order_relaxed);
        std::lock_guard<std::mutex> lock(gate);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min(threads, total);
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Integer sums in trial order keep results byte-identical across thread
// counts.
MeanSe count_stats(const std::vector<int>& counts) {
  long long sum = 0;
  long long sumsq = 0;
  for (int c : counts) {
    sum += c;
    sumsq += static_cast<long long>(c) * c;
  }
  const double n = static_cast<double>(counts.size());
  MeanSe out;
  out.mean = static_cast<double>(sum) / n;
  if (counts.size() > 1) {
    const double var = (static_cast<double>(sumsq) - n * out.mean * out.mean) / (n - 1.0);
    out.se = std::sqrt(std::max(0.0, var) / n);
  }
  return out;
}

MeanSe event_stats(long long events, long long trials) {
  MeanSe out;
  out.mean = static_cast<double>(events) / static_cast<double>(trials);
  if (trials > 1)
    out.se = std::sqrt(out.mean * (1.0 - out.mean) / static_cast<double>(trials));
  return out;
}

// Weighted least squares of mean counts against |Λ|, centered form.  With a
// single abscissa the through-origin model is assumed and nothing is tested.
LinearityFit fit_intercept(double eps, const std::vector<double>& x,
                           const std::vector<double>& y, const std::vector<double>& se) {
  LinearityFit fit;
  fit.eps = eps;
  const std::size_t n = x.size();
  auto origin_convention = [&] {
    fit.intercept = 0.0;
    fit.slope = (n > 0 && x[0] != 0.0) ? y[0] / x[0] : 0.0;
    fit.std_error = 0.0;
    fit.pass = true;
    return fit;
  };
  if (n < 2) return origin_convention();

  std::vector<double> w(n);
  double sw = 0.0;
  double swx = 0.0;
  double swy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::max(se[i], 1e-12);
    w[i] = 1.0 / (s * s);
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double xbar = swx / sw;
  const double ybar = swy / sw;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 1e-12 * sw * xbar * xbar)) return origin_convention();

  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  const double se_mc = std::sqrt(1.0 / sw + xbar * xbar / sxx);
  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    chi2 += w[i] * r * r;
  }
  const double inflate = n > 2 ? std::sqrt(std::max(0.0, chi2 / (static_cast<double>(n) - 2.0)))
                               : 0.0;
  fit.std_error = std::hypot(se_mc, se_mc * inflate);
  fit.pass = std::abs(fit.intercept) <= 2.0 * fit.std_error + 1e-12;
  return fit;
}

}  // namespace

void WegnerScanSpec::validate() const {
  if (nu < 1) throw InputError("nu must be >= 1");
  if (window_sizes.empty()) throw InputError("window_sizes must be nonempty");
  for (int l : window_sizes)
    if (l < 2) throw InputError("window sizes must be >= 2");
  if (epsilons.empty()) throw InputError("epsilons must be nonempty");
  for (double eps : epsilons)
    if (!(eps > 0.0 && eps <= 0.5)) throw InputError("epsilons must lie in (0, 1/2]");
  if (!(lambda0 >= 0.0)) throw InputError("lambda0 must be >= 0");
  if (!(lambda <= lambda0)) throw InputError("lambda must not exceed lambda0");
  if (trials < 1) throw InputError("trials must be >= 1");
  if (threads < 1) throw InputError("threads must be >= 1");
  if (!(h >= 0.0)) throw InputError("h must be >= 0; 0 selects the mesh automatically");
  require_assemblable(interior_condition, "interior");
  require_assemblable(boundary_condition, "boundary");
}

double WegnerScanSpec::resolved_h() const {
  return h > 0.0 ? h : 0.1 / std::sqrt(lambda0 + 1.0);
}

ExperimentReport wegner_scan(const WegnerScanSpec& spec) {
  spec.validate();
  const double h = spec.resolved_h();
  check_mesh(h, spec.lambda0 + 1.0);

  ExperimentReport rep;
  rep.seed = spec.seed;
  rep.h = h;
  rep.trials = spec.trials;

  const std::size_t ne = spec.epsilons.size();
  std::vector<std::size_t> by_eps(ne);
  std::iota(by_eps.begin(), by_eps.end(), std::size_t{0});
  std::sort(by_eps.begin(), by_eps.end(), [&](std::size_t a, std::size_t b) {
    return spec.epsilons[a] < spec.epsilons[b];
  });

  std::vector<double> s_mu(ne);
  for (std::size_t i = 0; i < ne; ++i)
    s_mu[i] = modulus_of_continuity(spec.distribution, spec.epsilons[i]);

  std::vector<std::vector<double>> fit_x(ne);
  std::vector<std::vector<double>> fit_y(ne);
  std::vector<std::vector<double>> fit_se(ne);

  long long weyl_bad = 0;

  for (int l : spec.window_sizes) {
    auto setup = make_window(spec, l);
    const long long edges = static_cast<long long>(setup->sub.edge_count());

    double weyl_bound = 0.0;
    for (EdgeId e : setup->sub.edges) {
      const double le = setup->lattice.graph.edge(e).length;
      const double box =
          spec.lambda0 + spec.distribution.support_bound() * setup->model.background_sup(e);
      weyl_bound += le * std::sqrt(std::max(0.0, box)) / kPi + 1.0;
    }

    std::vector<std::vector<int>> counts(static_cast<std::size_t>(spec.trials),
                                         std::vector<int>(ne, 0));
    std::vector<char> weyl_hit(static_cast<std::size_t>(spec.trials), 0);
    std::atomic<bool> nested_bad{false};
    run_trials(spec.threads, spec.trials, [&](int t) {
      const Configuration cfg = sample_configuration(setup->model, setup->lattice.window_edges,
                                                     spec.seed, static_cast<std::uint32_t>(t));
      const DiscretizedOperator op = assemble(setup->sub, setup->family, setup->model, cfg, h);
      auto& row = counts[static_cast<std::size_t>(t)];
      for (std::size_t i = 0; i < ne; ++i)
        row[i] = trace_projector(op, spec.lambda - spec.epsilons[i],
                                 spec.lambda + spec.epsilons[i]);
      for (std::size_t i = 1; i < ne; ++i)
        if (row[by_eps[i]] < row[by_eps[i - 1]]) nested_bad.store(true);
      if (count_below(op, spec.lambda0) > weyl_bound + 1e-9)
        weyl_hit[static_cast<std::size_t>(t)] = 1;
    });
    if (nested_bad.load())
      throw AccuracyError("nested energy windows produced non-monotone counts");
    for (char hit : weyl_hit) weyl_bad += hit;

    for (std::size_t i = 0; i < ne; ++i) {
      std::vector<int> column(static_cast<std::size_t>(spec.trials));
      for (int t = 0; t < spec.trials; ++t)
        column[static_cast<std::size_t>(t)] = counts[static_cast<std::size_t>(t)][i];
      const MeanSe stats = count_stats(column);
      WegnerCell cell;
      cell.l = l;
      cell.edges = edges;
      cell.eps = spec.epsilons[i];
      cell.lambda = spec.lambda;
      cell.trials = spec.trials;
      cell.mean = stats.mean;
      cell.std_error = stats.se;
      cell.s_mu = s_mu[i];
      const double denom = s_mu[i] * static_cast<double>(edges);
      cell.ratio = denom > 0.0 ? stats.mean / denom : 0.0;
      cell.ratio_std_error = denom > 0.0 ? stats.se / denom : 0.0;
      rep.cells.push_back(cell);
      fit_x[i].push_back(static_cast<double>(edges));
      fit_y[i].push_back(stats.mean);
      fit_se[i].push_back(stats.se);
    }
  }

  rep.weyl_violations = weyl_bad;

  double max_low = -std::numeric_limits<double>::infinity();
  double min_high = std::numeric_limits<double>::infinity();
  for (const WegnerCell& cell : rep.cells) {
    rep.fitted_cw = std::max(rep.fitted_cw, cell.ratio);
    max_low = std::max(max_low, cell.ratio - 2.0 * cell.ratio_std_error);
    min_high = std::min(min_high, cell.ratio + 2.0 * cell.ratio_std_error);
  }
  rep.ratios_bounded = max_low <= 1.5 * min_high + 1e-12;

  bool intercepts_ok = true;
  for (std::size_t i = 0; i < ne; ++i) {
    rep.intercepts.push_back(fit_intercept(spec.epsilons[i], fit_x[i], fit_y[i], fit_se[i]));
    intercepts_ok = intercepts_ok && rep.intercepts.back().pass;
  }

  rep.pass = rep.ratios_bounded && intercepts_ok && rep.weyl_violations == 0;
  return rep;
}

IdsEstimate ids_estimate(const IdsSpec& spec, double cw_bound) {
  spec.base.validate();
  if (spec.lambda_grid.empty()) throw InputError("lambda_grid must be nonempty");
  for (double eps : spec.increment_epsilons)
    if (!(eps > 0.0)) throw InputError("increment epsilons must be positive");
  if (!(cw_bound >= 0.0)) throw InputError("cw_bound must be >= 0");

  const double h = spec.base.resolved_h();
  double probe = spec.base.lambda0 + 1.0;
  for (double lam : spec.lambda_grid) probe = std::max(probe, lam);
  for (double eps : spec.increment_epsilons)
    probe = std::max(probe, spec.increment_center + eps);
  check_mesh(h, probe);

  IdsEstimate est;
  est.seed = spec.base.seed;
  est.h = h;
  est.window_sizes = spec.base.window_sizes;
  est.lambda_grid = spec.lambda_grid;

  const std::size_t nw = spec.base.window_sizes.size();
  const std::size_t ng = spec.lambda_grid.size();
  const std::size_t ni = spec.increment_epsilons.size();
  const std::size_t limit_row = static_cast<std::size_t>(
      std::max_element(spec.base.window_sizes.begin(), spec.base.window_sizes.end()) -
      spec.base.window_sizes.begin());

  for (std::size_t wi = 0; wi < nw; ++wi) {
    const int l = spec.base.window_sizes[wi];
    const bool largest = wi == limit_row;
    auto setup = make_window(spec.base, l);
    const double scale = std::pow(static_cast<double>(l), spec.base.nu);

    std::vector<std::vector<int>> counts(static_cast<std::size_t>(spec.base.trials),
                                         std::vector<int>(ng, 0));
    std::vector<std::vector<int>> incs(
        largest ? static_cast<std::size_t>(spec.base.trials) : 0, std::vector<int>(ni, 0));
    run_trials(spec.base.threads, spec.base.trials, [&](int t) {
      const Configuration cfg =
          sample_configuration(setup->model, setup->lattice.window_edges, spec.base.seed,
                               static_cast<std::uint32_t>(t));
      const DiscretizedOperator op =
          assemble(setup->sub, setup->family, setup->model, cfg, h);
      for (std::size_t g = 0; g < ng; ++g)
        counts[static_cast<std::size_t>(t)][g] = count_below(op, spec.lambda_grid[g]);
      if (largest)
        for (std::size_t i = 0; i < ni; ++i)
          incs[static_cast<std::size_t>(t)][i] =
              count_below(op, spec.increment_center + spec.increment_epsilons[i]) -
              count_below(op, spec.increment_center - spec.increment_epsilons[i]);
    });

    est.mean_scaled.emplace_back(ng, 0.0);
    est.se_scaled.emplace_back(ng, 0.0);
    for (std::size_t g = 0; g < ng; ++g) {
      std::vector<int> column(static_cast<std::size_t>(spec.base.trials));
      for (int t = 0; t < spec.base.trials; ++t)
        column[static_cast<std::size_t>(t)] = counts[static_cast<std::size_t>(t)][g];
      const MeanSe stats = count_stats(column);
      est.mean_scaled.back()[g] = stats.mean / scale;
      est.se_scaled.back()[g] = stats.se / scale;
    }
    if (largest) {
      for (std::size_t i = 0; i < ni; ++i) {
        std::vector<int> column(static_cast<std::size_t>(spec.base.trials));
        for (int t = 0; t < spec.base.trials; ++t)
          column[static_cast<std::size_t>(t)] = incs[static_cast<std::size_t>(t)][i];
        const MeanSe stats = count_stats(column);
        IdsEstimate::Increment inc;
        inc.eps = spec.increment_epsilons[i];
        inc.value = stats.mean / scale;
        inc.std_error = stats.se / scale;
        inc.bound = cw_bound * modulus_of_continuity(spec.base.distribution, inc.eps);
        inc.holds = inc.value <= inc.bound + 2.0 * inc.std_error + 1e-12;
        est.increments.push_back(inc);
      }
    }
  }

  est.limit_curve = est.mean_scaled[limit_row];
  est.convergence_gap = 0.0;
  for (std::size_t wi = 0; wi < nw; ++wi) {
    if (wi == limit_row) continue;
    for (std::size_t g = 0; g < ng; ++g)
      est.convergence_gap =
          std::max(est.convergence_gap, std::abs(est.mean_scaled[wi][g] - est.limit_curve[g]));
  }
  est.increments_pass = true;
  for (const auto& inc : est.increments) est.increments_pass = est.increments_pass && inc.holds;
  return est;
}

WeakWegnerReport weak_wegner_probability(int L, double beta, double q, double lambda,
                                         const WegnerScanSpec& spec) {
  if (L < 2) throw InputError("L must be >= 2");
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  if (!(q > 0.0)) throw InputError("q must be positive");
  if (spec.nu < 1) throw InputError("nu must be >= 1");
  if (spec.trials < 1) throw InputError("trials must be >= 1");
  if (spec.threads < 1) throw InputError("threads must be >= 1");
  if (!(spec.lambda0 >= 0.0)) throw InputError("lambda0 must be >= 0");
  if (!(lambda <= spec.lambda0)) throw InputError("lambda must not exceed lambda0");
  require_assemblable(spec.interior_condition, "interior");
  require_assemblable(spec.boundary_condition, "boundary");

  const double h = spec.resolved_h();
  check_mesh(h, std::max(spec.lambda0 + 1.0, std::abs(lambda) + 0.05));

  WeakWegnerReport rep;
  rep.L = L;
  rep.beta = beta;
  rep.q = q;
  rep.lambda = lambda;
  rep.trials = spec.trials;

  const double raw = std::exp(-std::pow(static_cast<double>(L), beta));
  const double floor = 10.0 * (1e-12 * std::max(1.0, std::abs(lambda)));
  rep.clamped = raw < floor;
  rep.width = rep.clamped ? floor : raw;
  rep.threshold = std::pow(static_cast<double>(L), -q);

  auto setup = make_window(spec, L);
  std::vector<char> hit(static_cast<std::size_t>(spec.trials), 0);
  std::vector<int> near(static_cast<std::size_t>(spec.trials), 0);
  run_trials(spec.threads, spec.trials, [&](int t) {
    const Configuration cfg = sample_configuration(setup->model, setup->lattice.window_edges,
                                                   spec.seed, static_cast<std::uint32_t>(t));
    const DiscretizedOperator op = assemble(setup->sub, setup->family, setup->model, cfg, h);
    hit[static_cast<std::size_t>(t)] =
        trace_projector(op, lambda - rep.width, lambda + rep.width) >= 1 ? 1 : 0;
    near[static_cast<std::size_t>(t)] = trace_projector(op, lambda - 0.05, lambda + 0.05);
  });

  long long events = 0;
  long long near_events = 0;
  long long near_sum = 0;
  for (int t = 0; t < spec.trials; ++t) {
    events += hit[static_cast<std::size_t>(t)];
    near_sum += near[static_cast<std::size_t>(t)];
    near_events += near[static_cast<std::size_t>(t)] >= 1 ? 1 : 0;
  }
  rep.events = events;
  const MeanSe stats = event_stats(events, spec.trials);
  rep.p_hat = stats.mean;
  rep.std_error = stats.se;
  rep.markov_p = static_cast<double>(near_events) / static_cast<double>(spec.trials);
  rep.markov_mean = static_cast<double>(near_sum) / static_cast<double>(spec.trials);
  rep.pass = rep.p_hat <= rep.threshold + 2.0 * rep.std_error;
  return rep;
}

namespace {

void check_threshold_args(double cw, double c_mu, double alpha, double beta, double q,
                          double nu) {
  if (!(cw > 0.0)) throw InputError("cw must be positive");
  if (!(c_mu > 0.0)) throw InputError("c_mu must be positive");
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  if (!(q > 0.0)) throw InputError("q must be positive");
  if (!(nu >= 1.0)) throw InputError("nu must be >= 1");
}

}  // namespace

LogHoelderThreshold loghoelder_threshold(double cw, double c_mu, double alpha, double beta,
                                         double q, double nu, double l0) {
  check_threshold_args(cw, c_mu, alpha, beta, q, nu);
  if (!(l0 > 0.0)) throw InputError("l0 must be positive");
  LogHoelderThreshold t;
  t.delta = alpha * beta - q - nu;
  t.valid = t.delta > 0.0;
  t.l1 = t.valid ? std::max(l0, std::pow(cw * c_mu, 1.0 / t.delta)) : l0;
  return t;
}

bool loghoelder_chain_holds(double cw, double c_mu, double alpha, double beta, double q,
                            double nu, double l1, int grid_points) {
  check_threshold_args(cw, c_mu, alpha, beta, q, nu);
  if (!(l1 > 0.0)) throw InputError("l1 must be positive");
  if (grid_points < 2) throw InputError("grid_points must be >= 2");
  for (int i = 0; i < grid_points; ++i) {
    const double decades = 6.0 * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const double L = l1 * std::pow(10.0, decades);
    const double lhs = cw * c_mu * std::pow(L, nu - alpha * beta);
    const double rhs = std::pow(L, -q);
    if (!(lhs <= rhs * (1.0 + 1e-12))) return false;
  }
  return true;
}

InitialScaleReport initial_scale_check(const WegnerScanSpec& spec, double xi_exp, double beta) {
  if (spec.distribution.kind() != DistributionKind::power_hoelder)
    throw InputError("initial scale check needs a power_hoelder coupling law");
  if (spec.nu < 1) throw InputError("nu must be >= 1");
  if (spec.window_sizes.empty()) throw InputError("window_sizes must be nonempty");
  for (int l : spec.window_sizes)
    if (l < 2) throw InputError("window sizes must be >= 2");
  if (spec.trials < 1) throw InputError("trials must be >= 1");
  if (spec.threads < 1) throw InputError("threads must be >= 1");
  if (!(spec.lambda0 >= 0.0)) throw InputError("lambda0 must be >= 0");
  require_assemblable(spec.interior_condition, "interior");
  require_assemblable(spec.boundary_condition, "boundary");

  const double tau = spec.distribution.param(0);
  const double nu = static_cast<double>(spec.nu);
  if (!(tau > nu / 2.0)) throw InputError("tau must exceed nu / 2");
  if (!(xi_exp > 0.0 && xi_exp < 2.0 * tau - nu))
    throw InputError("xi must lie in (0, 2 tau - nu)");
  if (!(beta > 0.0 && beta < 2.0)) throw InputError("beta must lie in (0, 2)");

  const double h = spec.resolved_h();
  check_mesh(h, spec.lambda0 + 1.0);

  InitialScaleReport rep;
  rep.beta = beta;
  rep.tau = tau;
  rep.xi_exp = xi_exp;

  for (int l : spec.window_sizes) {
    auto setup = make_window(spec, l);

    Configuration frozen;
    frozen.seed = spec.seed;
    for (EdgeId e : setup->lattice.window_edges)
      frozen.coupling[e] = spec.distribution.support_min();
    const DiscretizedOperator base =
        assemble(setup->sub, setup->family, setup->model, frozen, h);
    const double reference = lowest_eigenvalues(base, 1).eigenvalues.at(0);
    const double window = std::pow(static_cast<double>(l), beta - 2.0);

    std::vector<char> hit(static_cast<std::size_t>(spec.trials), 0);
    run_trials(spec.threads, spec.trials, [&](int t) {
      const Configuration cfg = sample_configuration(setup->model, setup->lattice.window_edges,
                                                     spec.seed, static_cast<std::uint32_t>(t));
      const DiscretizedOperator op = assemble(setup->sub, setup->family, setup->model, cfg, h);
      const double low = lowest_eigenvalues(op, 1).eigenvalues.at(0);
      hit[static_cast<std::size_t>(t)] = low - reference <= window ? 1 : 0;
    });

    long long events = 0;
    for (char bit : hit) events += bit;
    const MeanSe stats = event_stats(events, spec.trials);
    InitialScaleReport::Row row;
    row.l = l;
    row.window = window;
    row.reference = reference;
    row.trials = spec.trials;
    row.events = events;
    row.p_hat = stats.mean;
    row.std_error = stats.se;
    row.comparison = std::pow(static_cast<double>(l), -xi_exp);
    row.below_comparison = row.p_hat <= row.comparison;
    rep.rows.push_back(row);
  }

  rep.trend_ok = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& prev = rep.rows[i - 1];
    const auto& cur = rep.rows[i];
    if (cur.p_hat > prev.p_hat + 2.0 * std::hypot(prev.std_error, cur.std_error))
      rep.trend_ok = false;
  }
  return rep;
}

BoundaryConditionSweep boundary_condition_sweep(
    const WegnerScanSpec& spec, const std::vector<std::pair<ConditionKind, double>>& kinds) {
  if (kinds.empty()) throw InputError("kinds must be nonempty");
  for (const auto& kv : kinds) require_assemblable(kv.first, "swept");

  BoundaryConditionSweep sweep;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& kv : kinds) {
    WegnerScanSpec local = spec;
    local.boundary_condition = kv.first;
    local.alpha = kv.second;
    const ExperimentReport rep = wegner_scan(local);
    BoundaryConditionSweep::Entry entry;
    entry.kind = kv.first;
    entry.alpha = kv.second;
    entry.fitted_cw = rep.fitted_cw;
    entry.scan_pass = rep.pass;
    sweep.entries.push_back(entry);
    lo = std::min(lo, rep.fitted_cw);
    hi = std::max(hi, rep.fitted_cw);
  }
  sweep.spread_factor =
      lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  sweep.pass = sweep.spread_factor <= 4.0;
  return sweep;
}

}  // namespace qgalloy
