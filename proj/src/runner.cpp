#include "qgalloy/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qgalloy/errors.hpp"
#include "qgalloy/experiments.hpp"

namespace qgalloy {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_hash(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* flag(bool b) { return b ? "true" : "false"; }

ConditionKind parse_condition(const std::string& dotted, const std::string& text) {
  if (text == "dirichlet") return ConditionKind::dirichlet;
  if (text == "neumann_decoupled" || text == "neumann") return ConditionKind::neumann_decoupled;
  if (text == "kirchhoff") return ConditionKind::kirchhoff;
  if (text == "delta") return ConditionKind::delta;
  if (text == "general") return ConditionKind::general;
  throw InputError(dotted + ": unknown condition kind '" + text + "'");
}

SingleSiteDistribution parse_distribution(const ConfigFile& cfg) {
  const std::string kind = cfg.get("model", "distribution");
  if (kind == "uniform")
    return SingleSiteDistribution::uniform(cfg.get_double("model", "q_minus"),
                                           cfg.get_double("model", "q_plus"));
  if (kind == "bernoulli")
    return SingleSiteDistribution::bernoulli(cfg.get_double("model", "p"),
                                             cfg.get_double("model", "q_minus"),
                                             cfg.get_double("model", "q_plus"));
  if (kind == "power_hoelder")
    return SingleSiteDistribution::power_hoelder(cfg.get_double("model", "tau"),
                                                 cfg.get_double("model", "x0"));
  if (kind == "log_hoelder")
    return SingleSiteDistribution::log_hoelder(cfg.get_double("model", "alpha"),
                                               cfg.get_double("model", "x0"));
  if (kind == "point_mass")
    return SingleSiteDistribution::point_mass(cfg.get_double("model", "c"));
  throw InputError("model.distribution: unknown kind '" + kind + "'");
}

std::uint64_t effective_seed(const ConfigFile& cfg, const RunOptions& opt) {
  if (opt.seed) return *opt.seed;
  return static_cast<std::uint64_t>(cfg.get_int_or("numerics", "seed", 1));
}

int effective_threads(const ConfigFile& cfg, const RunOptions& opt) {
  if (opt.threads) return *opt.threads;
  return static_cast<int>(cfg.get_int_or("numerics", "threads", 1));
}

WegnerScanSpec scan_skeleton(const ConfigFile& cfg, const RunOptions& opt) {
  WegnerScanSpec spec;
  spec.nu = static_cast<int>(cfg.get_int_or("graph", "nu", 1));
  spec.interior_condition =
      parse_condition("conditions.interior", cfg.get_or("conditions", "interior", "kirchhoff"));
  spec.boundary_condition =
      parse_condition("conditions.boundary", cfg.get_or("conditions", "boundary", "dirichlet"));
  spec.alpha = cfg.get_double_or("conditions", "alpha", 0.0);
  spec.distribution = parse_distribution(cfg);
  spec.lambda0 = cfg.get_double("numerics", "lambda0");
  spec.trials = static_cast<int>(cfg.get_int("numerics", "trials"));
  spec.seed = effective_seed(cfg, opt);
  spec.h = cfg.get_double_or("numerics", "h", 0.0);
  spec.threads = effective_threads(cfg, opt);
  return spec;
}

void require_lattice(const ConfigFile& cfg) {
  if (cfg.get("graph", "family") != "lattice")
    throw InputError("graph.family: window scans run on the lattice family");
}

WegnerScanSpec wegner_spec_from(const ConfigFile& cfg, const RunOptions& opt) {
  require_lattice(cfg);
  WegnerScanSpec spec = scan_skeleton(cfg, opt);
  for (long long l : cfg.get_ints("graph", "l_list"))
    spec.window_sizes.push_back(static_cast<int>(l));
  spec.lambda = cfg.get_double("numerics", "lambda");
  spec.epsilons = cfg.get_doubles("numerics", "eps_list");
  return spec;
}

// Counting is trusted on the lower quarter of the mesh range.
void require_mesh(double h, double probe_sup) {
  if (!(probe_sup <= 0.01 / (h * h) + 1e-12))
    throw AccuracyError("mesh too coarse for the requested energies: refine numerics.h");
}

std::vector<std::pair<ConditionKind, double>> sweep_kinds_from(const ConfigFile& cfg) {
  std::istringstream in(cfg.get_or("sweep", "kinds", "dirichlet kirchhoff delta:1"));
  std::vector<std::pair<ConditionKind, double>> kinds;
  std::string token;
  while (in >> token) {
    const std::size_t colon = token.find(':');
    const std::string name = token.substr(0, colon);
    double alpha = 0.0;
    if (colon != std::string::npos) {
      try {
        alpha = std::stod(token.substr(colon + 1));
      } catch (const std::exception&) {
        throw InputError("sweep.kinds: bad alpha in token '" + token + "'");
      }
    }
    kinds.emplace_back(parse_condition("sweep.kinds", name), alpha);
  }
  if (kinds.empty()) throw InputError("sweep.kinds: no condition kinds listed");
  return kinds;
}

IdsSpec ids_spec_from(const ConfigFile& cfg, const RunOptions& opt) {
  IdsSpec ids;
  ids.base = wegner_spec_from(cfg, opt);
  ids.lambda_grid = cfg.get_doubles("ids", "lambda_grid");
  ids.increment_center = cfg.get_double_or("ids", "center", 0.0);
  if (cfg.has("ids", "eps_list")) ids.increment_epsilons = cfg.get_doubles("ids", "eps_list");
  return ids;
}

void validate_initial_scale_args(const WegnerScanSpec& spec, double xi, double beta) {
  if (spec.distribution.kind() != DistributionKind::power_hoelder)
    throw InputError("initial scale check needs a power_hoelder coupling law");
  const double tau = spec.distribution.param(0);
  if (!(tau > spec.nu / 2.0)) throw InputError("initial.xi: tau must exceed nu / 2");
  if (!(xi > 0.0 && xi < 2.0 * tau - spec.nu))
    throw InputError("initial.xi: xi must lie in (0, 2 tau - nu)");
  if (!(beta > 0.0 && beta < 2.0)) throw InputError("initial.beta: beta must lie in (0, 2)");
}

struct RunResult {
  std::string csv;
  std::vector<std::string> extra;
  bool pass = true;
};

// Lattice windows take their kinds from the induced partition; other shapes
// use the boundary kind at degree-1 vertices.
struct SpectrumPlan {
  std::unique_ptr<LatticeWindow> window;
  InducedSubgraph sub;
  ConditionFamily family;
  std::optional<AlloyModel> model;
  double h = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
};

MetricGraph build_shape(const ConfigFile& cfg, const std::string& family) {
  if (family == "interval") return make_interval(cfg.get_double("graph", "length"));
  if (family == "loop") return make_loop(cfg.get_double("graph", "length"));
  if (family == "star")
    return make_star(static_cast<int>(cfg.get_int("graph", "arms")),
                     cfg.get_double("graph", "arm_length"));
  if (family == "fibonacci")
    return make_fibonacci_chain(static_cast<int>(cfg.get_int("graph", "generations")),
                                cfg.get_double_or("graph", "a_length", 1.0),
                                cfg.get_double_or("graph", "b_length", 1.0));
  if (family == "file") return load_graph(cfg.get("graph", "path"));
  throw InputError("graph.family: unknown family '" + family + "'");
}

SpectrumPlan build_spectrum_plan(const ConfigFile& cfg, const RunOptions& opt) {
  SpectrumPlan plan;
  const std::string family_name = cfg.get("graph", "family");
  const ConditionKind interior =
      parse_condition("conditions.interior", cfg.get_or("conditions", "interior", "kirchhoff"));
  const ConditionKind boundary =
      parse_condition("conditions.boundary", cfg.get_or("conditions", "boundary", "dirichlet"));
  if (interior == ConditionKind::general || boundary == ConditionKind::general)
    throw CapabilityError("general vertex conditions are not assemblable");
  const double alpha = cfg.get_double_or("conditions", "alpha", 0.0);

  plan.lambda = cfg.get_double("numerics", "lambda");
  const double h_cfg = cfg.get_double_or("numerics", "h", 0.0);
  plan.h = h_cfg > 0.0 ? h_cfg : 0.1 / std::sqrt(std::abs(plan.lambda) + 1.0);
  plan.seed = effective_seed(cfg, opt);

  if (family_name == "lattice") {
    plan.window = std::make_unique<LatticeWindow>(
        build_lattice_graph(static_cast<int>(cfg.get_int_or("graph", "nu", 1)),
                            static_cast<int>(cfg.get_int("graph", "l"))));
    plan.sub = induced_subgraph(plan.window->graph, plan.window->window_edges);
    for (VertexId v : plan.sub.interior)
      plan.family.conditions.emplace(
          v, standard_condition(interior, v, plan.sub.subgraph_degree(v), alpha));
    for (VertexId v : plan.sub.boundary)
      plan.family.conditions.emplace(
          v, standard_condition(boundary, v, plan.sub.subgraph_degree(v), alpha));
  } else {
    MetricGraph g = build_shape(cfg, family_name);
    std::set<EdgeId> all;
    for (const Edge& e : g.edges()) all.insert(e.id);
    plan.window =
        std::make_unique<LatticeWindow>(LatticeWindow{std::move(g), std::move(all)});
    plan.sub = induced_subgraph(plan.window->graph, plan.window->window_edges);
    for (VertexId v : plan.sub.subgraph_vertices()) {
      const int degree = plan.sub.subgraph_degree(v);
      plan.family.conditions.emplace(
          v, standard_condition(degree > 1 ? interior : boundary, v, degree, alpha));
    }
  }
  if (cfg.has("model", "distribution"))
    plan.model = indicator_model(plan.window->graph, parse_distribution(cfg));
  return plan;
}

RunResult run_spectrum(const ConfigFile& cfg, const RunOptions& opt) {
  SpectrumPlan plan = build_spectrum_plan(cfg, opt);
  DiscretizedOperator op = [&] {
    if (plan.model) {
      const Configuration c =
          sample_configuration(*plan.model, plan.window->window_edges, plan.seed, 0);
      return assemble(plan.sub, plan.family, *plan.model, c, plan.h);
    }
    PotentialField field;
    return assemble_field(plan.sub, plan.family, field, plan.h);
  }();
  const std::vector<double> evs = eigenvalues_below(op, plan.lambda).eigenvalues;

  std::ostringstream csv;
  csv << "n,lambda\n";
  for (std::size_t n = 0; n < evs.size(); ++n) csv << n << "," << fmt(evs[n]) << "\n";

  RunResult out;
  out.csv = csv.str();
  out.extra.push_back("h = " + fmt(plan.h));
  out.extra.push_back("eigenvalues = " + std::to_string(evs.size()));
  out.pass = true;
  return out;
}

RunResult run_wegner(const ConfigFile& cfg, const RunOptions& opt) {
  const WegnerScanSpec spec = wegner_spec_from(cfg, opt);
  const ExperimentReport rep = wegner_scan(spec);

  std::ostringstream csv;
  csv << "l,edges,eps,lambda,trials,mean,std_error,s_mu,ratio,ratio_std_error\n";
  for (const WegnerCell& cell : rep.cells)
    csv << cell.l << "," << cell.edges << "," << fmt(cell.eps) << "," << fmt(cell.lambda) << ","
        << cell.trials << "," << fmt(cell.mean) << "," << fmt(cell.std_error) << ","
        << fmt(cell.s_mu) << "," << fmt(cell.ratio) << "," << fmt(cell.ratio_std_error) << "\n";

  RunResult out;
  out.csv = csv.str();
  out.extra.push_back("h = " + fmt(rep.h));
  out.extra.push_back("fitted_cw = " + fmt(rep.fitted_cw));
  out.extra.push_back(std::string("ratios_bounded = ") + flag(rep.ratios_bounded));
  out.extra.push_back("weyl_violations = " + std::to_string(rep.weyl_violations));
  for (const LinearityFit& fit : rep.intercepts)
    out.extra.push_back("intercept eps=" + fmt(fit.eps) + ": b0 = " + fmt(fit.intercept) +
                        ", se = " + fmt(fit.std_error) + ", pass = " + flag(fit.pass));
  out.pass = rep.pass;
  return out;
}

RunResult run_ids(const ConfigFile& cfg, const RunOptions& opt) {
  const IdsSpec ids = ids_spec_from(cfg, opt);
  const double cw_bound = cfg.get_double_or("ids", "cw_bound", 1.0);
  const IdsEstimate est = ids_estimate(ids, cw_bound);

  std::ostringstream csv;
  csv << "l,lambda,mean_scaled,se_scaled\n";
  for (std::size_t wi = 0; wi < est.window_sizes.size(); ++wi)
    for (std::size_t g = 0; g < est.lambda_grid.size(); ++g)
      csv << est.window_sizes[wi] << "," << fmt(est.lambda_grid[g]) << ","
          << fmt(est.mean_scaled[wi][g]) << "," << fmt(est.se_scaled[wi][g]) << "\n";

  RunResult out;
  out.csv = csv.str();
  out.extra.push_back("h = " + fmt(est.h));
  out.extra.push_back("convergence_gap = " + fmt(est.convergence_gap));
  for (const auto& inc : est.increments)
    out.extra.push_back("increment eps=" + fmt(inc.eps) + ": value = " + fmt(inc.value) +
                        ", bound = " + fmt(inc.bound) + ", holds = " + flag(inc.holds));
  out.extra.push_back(std::string("increments_pass = ") + flag(est.increments_pass));
  out.pass = est.increments_pass;
  return out;
}

RunResult run_weak(const ConfigFile& cfg, const RunOptions& opt) {
  const WegnerScanSpec spec = scan_skeleton(cfg, opt);
  const int L = static_cast<int>(cfg.get_int("weak", "L"));
  const double beta = cfg.get_double("weak", "beta");
  const double q = cfg.get_double("weak", "q");
  const double lambda = cfg.get_double("weak", "lambda");
  const WeakWegnerReport rep = weak_wegner_probability(L, beta, q, lambda, spec);

  std::ostringstream csv;
  csv << "L,beta,q,lambda,width,clamped,trials,events,p_hat,std_error,threshold,"
         "markov_p,markov_mean,pass\n";
  csv << rep.L << "," << fmt(rep.beta) << "," << fmt(rep.q) << "," << fmt(rep.lambda) << ","
      << fmt(rep.width) << "," << flag(rep.clamped) << "," << rep.trials << "," << rep.events
      << "," << fmt(rep.p_hat) << "," << fmt(rep.std_error) << "," << fmt(rep.threshold) << ","
      << fmt(rep.markov_p) << "," << fmt(rep.markov_mean) << "," << flag(rep.pass) << "\n";

  RunResult out;
  out.csv = csv.str();
  out.extra.push_back(std::string("clamped = ") + flag(rep.clamped));
  out.pass = rep.pass;
  return out;
}

RunResult run_initial(const ConfigFile& cfg, const RunOptions& opt) {
  require_lattice(cfg);
  WegnerScanSpec spec = scan_skeleton(cfg, opt);
  for (long long l : cfg.get_ints("graph", "l_list"))
    spec.window_sizes.push_back(static_cast<int>(l));
  const double xi = cfg.get_double("initial", "xi");
  const double beta = cfg.get_double("initial", "beta");
  const InitialScaleReport rep = initial_scale_check(spec, xi, beta);

  std::ostringstream csv;
  csv << "l,window,reference,trials,events,p_hat,std_error,comparison,below_comparison\n";
  for (const auto& row : rep.rows)
    csv << row.l << "," << fmt(row.window) << "," << fmt(row.reference) << "," << row.trials
        << "," << row.events << "," << fmt(row.p_hat) << "," << fmt(row.std_error) << ","
        << fmt(row.comparison) << "," << flag(row.below_comparison) << "\n";

  RunResult out;
  out.csv = csv.str();
  out.extra.push_back("tau = " + fmt(rep.tau));
  out.extra.push_back("xi_exp = " + fmt(rep.xi_exp));
  out.extra.push_back("beta = " + fmt(rep.beta));
  out.extra.push_back(std::string("trend_ok = ") + flag(rep.trend_ok));
  out.pass = rep.trend_ok;
  return out;
}

RunResult run_sweep(const ConfigFile& cfg, const RunOptions& opt) {
  const WegnerScanSpec spec = wegner_spec_from(cfg, opt);
  const BoundaryConditionSweep sweep = boundary_condition_sweep(spec, sweep_kinds_from(cfg));

  std::ostringstream csv;
  csv << "kind,alpha,fitted_cw,scan_pass\n";
  for (const auto& entry : sweep.entries)
    csv << condition_kind_name(entry.kind) << "," << fmt(entry.alpha) << ","
        << fmt(entry.fitted_cw) << "," << flag(entry.scan_pass) << "\n";

  RunResult out;
  out.csv = csv.str();
  out.extra.push_back("spread_factor = " + fmt(sweep.spread_factor));
  out.pass = sweep.pass;
  return out;
}

void write_outputs(const std::filesystem::path& dir, const ConfigFile& cfg, std::uint64_t seed,
                   const std::string& kind, const RunResult& result) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.csv", std::ios::binary);
    if (!out) throw InputError((dir / "report.csv").string() + ": cannot open for writing");
    out << result.csv;
  }
  std::ofstream out(dir / "summary.txt", std::ios::binary);
  if (!out) throw InputError((dir / "summary.txt").string() + ": cannot open for writing");
  out << "version = " << kVersion << "\n"
      << "config = " << cfg.name() << "\n"
      << "config_hash = " << fmt_hash(cfg.content_hash()) << "\n"
      << "seed = " << seed << "\n"
      << "kind = " << kind << "\n";
  for (const std::string& line : result.extra) out << line << "\n";
  out << "pass = " << flag(result.pass) << "\n";
}

ConfigFile load_config(const RunOptions& options) {
  ConfigFile cfg = ConfigFile::parse_file(options.config_path);
  for (const auto& kv : options.overrides) cfg.set(kv.first, kv.second);
  return cfg;
}

}  // namespace

int run_experiment(const RunOptions& options) {
  try {
    const ConfigFile cfg = load_config(options);
    const std::string kind = cfg.get("experiment", "kind");
    RunResult result;
    if (kind == "wegner")
      result = run_wegner(cfg, options);
    else if (kind == "spectrum")
      result = run_spectrum(cfg, options);
    else if (kind == "ids")
      result = run_ids(cfg, options);
    else if (kind == "weak_wegner")
      result = run_weak(cfg, options);
    else if (kind == "initial_scale")
      result = run_initial(cfg, options);
    else if (kind == "bc_sweep")
      result = run_sweep(cfg, options);
    else
      throw InputError("experiment.kind: unknown kind '" + kind + "'");
    const std::string out_dir = !options.output_dir.empty()
                                    ? options.output_dir
                                    : cfg.get_or("experiment", "output", "qgalloy_out");
    write_outputs(out_dir, cfg, effective_seed(cfg, options), kind, result);
    return result.pass ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qgalloy: %s\n", e.what());
    return 1;
  }
}

int validate_config(const RunOptions& options) {
  try {
    const ConfigFile cfg = load_config(options);
    const std::string kind = cfg.get("experiment", "kind");
    std::ostringstream note;
    note << "kind = " << kind << "\n";

    auto scan_checks = [&](const WegnerScanSpec& spec) {
      spec.validate();
      require_mesh(spec.resolved_h(), spec.lambda0 + 1.0);
      const int lmin = *std::min_element(spec.window_sizes.begin(), spec.window_sizes.end());
      const LatticeWindow w = build_lattice_graph(spec.nu, lmin);
      const InducedSubgraph sub = induced_subgraph(w.graph, w.window_edges);
      const AlloyModel model = indicator_model(w.graph, spec.distribution);
      const SummabilityReport sums = check_summability(sub, model);
      note << "h = " << fmt(spec.resolved_h()) << "\n"
           << "summability per edge at l = " << lmin << ": c1 = " << fmt(sums.c1)
           << ", c2 = " << fmt(sums.c2) << ", c3 = " << fmt(sums.c3) << "\n";
    };

    if (kind == "wegner") {
      scan_checks(wegner_spec_from(cfg, options));
    } else if (kind == "bc_sweep") {
      scan_checks(wegner_spec_from(cfg, options));
      for (const auto& kv : sweep_kinds_from(cfg))
        if (kv.first == ConditionKind::general)
          throw CapabilityError("sweep.kinds: general conditions are not assemblable");
    } else if (kind == "ids") {
      const IdsSpec ids = ids_spec_from(cfg, options);
      scan_checks(ids.base);
      double probe = ids.base.lambda0 + 1.0;
      for (double lam : ids.lambda_grid) probe = std::max(probe, lam);
      for (double eps : ids.increment_epsilons) {
        if (!(eps > 0.0)) throw InputError("ids.eps_list: epsilons must be positive");
        probe = std::max(probe, ids.increment_center + eps);
      }
      require_mesh(ids.base.resolved_h(), probe);
      if (!(cfg.get_double_or("ids", "cw_bound", 1.0) >= 0.0))
        throw InputError("ids.cw_bound: must be >= 0");
    } else if (kind == "weak_wegner") {
      const WegnerScanSpec spec = scan_skeleton(cfg, options);
      const int L = static_cast<int>(cfg.get_int("weak", "L"));
      const double beta = cfg.get_double("weak", "beta");
      const double q = cfg.get_double("weak", "q");
      const double lambda = cfg.get_double("weak", "lambda");
      if (L < 2) throw InputError("weak.L: must be >= 2");
      if (!(beta > 0.0)) throw InputError("weak.beta: must be positive");
      if (!(q > 0.0)) throw InputError("weak.q: must be positive");
      if (!(lambda <= spec.lambda0)) throw InputError("weak.lambda: must not exceed lambda0");
      require_mesh(spec.resolved_h(), std::max(spec.lambda0 + 1.0, std::abs(lambda) + 0.05));
      note << "h = " << fmt(spec.resolved_h()) << "\n";
    } else if (kind == "initial_scale") {
      require_lattice(cfg);
      WegnerScanSpec spec = scan_skeleton(cfg, options);
      for (long long l : cfg.get_ints("graph", "l_list")) {
        if (l < 2) throw InputError("graph.l_list: window sizes must be >= 2");
        spec.window_sizes.push_back(static_cast<int>(l));
      }
      validate_initial_scale_args(spec, cfg.get_double("initial", "xi"),
                                  cfg.get_double("initial", "beta"));
      require_mesh(spec.resolved_h(), spec.lambda0 + 1.0);
      note << "h = " << fmt(spec.resolved_h()) << "\n";
    } else if (kind == "spectrum") {
      const SpectrumPlan plan = build_spectrum_plan(cfg, options);
      if (!(plan.lambda <= 0.04 / (plan.h * plan.h)))
        throw AccuracyError("numerics.lambda exceeds the mesh trust ceiling: refine numerics.h");
      note << "h = " << fmt(plan.h) << "\n"
           << "dofs >= " << plan.sub.edge_count() << "\n";
    } else {
      throw InputError("experiment.kind: unknown kind '" + kind + "'");
    }

    note << "ok\n";
    std::fputs(note.str().c_str(), stdout);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qgalloy: %s\n", e.what());
    return 1;
  }
}

int print_oracle(const std::string& fixture, double length, int arms, double upto) {
  try {
    if (!(length > 0.0)) throw InputError("length must be positive");
    if (!(upto >= 0.0)) throw InputError("upto must be >= 0");
    std::vector<double> evs;
    if (fixture == "interval") {
      // Dirichlet ends: (k pi / L)^2
      for (int k = 1;; ++k) {
        const double lam = std::pow(k * kPi / length, 2);
        if (lam > upto) break;
        evs.push_back(lam);
      }
    } else if (fixture == "loop") {
      // 0, then (2 pi k / L)^2 with multiplicity 2
      evs.push_back(0.0);
      for (int k = 1;; ++k) {
        const double lam = std::pow(2.0 * kPi * k / length, 2);
        if (lam > upto) break;
        evs.push_back(lam);
        evs.push_back(lam);
      }
    } else if (fixture == "star") {
      // Dirichlet tips, Kirchhoff center: cos branch simple, sin branch
      // with multiplicity arms - 1
      if (arms < 2) throw InputError("star needs at least 2 arms");
      for (int m = 0;; ++m) {
        const double k = (kPi / 2.0 + m * kPi) / length;
        if (k * k > upto) break;
        evs.push_back(k * k);
      }
      for (int m = 1;; ++m) {
        const double k = m * kPi / length;
        if (k * k > upto) break;
        for (int j = 0; j + 1 < arms; ++j) evs.push_back(k * k);
      }
      std::sort(evs.begin(), evs.end());
    } else {
      throw InputError("unknown fixture '" + fixture + "'; expected interval, loop or star");
    }
    for (std::size_t n = 0; n < evs.size(); ++n)
      std::printf("%zu %.17g\n", n, evs[n]);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qgalloy: %s\n", e.what());
    return 1;
  }
}

}  // namespace qgalloy
