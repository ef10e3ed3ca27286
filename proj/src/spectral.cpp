#include "qgalloy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "qgalloy/errors.hpp"

namespace qgalloy {

int trace_projector(const DiscretizedOperator& op, double a, double b) {
  if (b < a) return 0;
  return count_below(op, b) - count_strictly_below(op, a);
}

SsfSample ssf(const DiscretizedOperator& op1, const DiscretizedOperator& op2,
              const std::vector<double>& grid) {
  SsfSample out;
  out.grid = grid;
  out.xi.reserve(grid.size());
  for (double lambda : grid)
    out.xi.push_back(count_below(op2, lambda) - count_below(op1, lambda));
  return out;
}

namespace {

bool same_profile(const PiecewiseConstant* p, const PiecewiseConstant* q) {
  if (p == nullptr && q == nullptr) return true;
  auto is_zero = [](const PiecewiseConstant* f) { return f == nullptr || f->sup_abs() == 0.0; };
  if (p == nullptr || q == nullptr) return is_zero(p) && is_zero(q);
  std::vector<double> cuts = p->breakpoints;
  cuts.insert(cuts.end(), q->breakpoints.begin(), q->breakpoints.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (p->at(mid) != q->at(mid)) return false;
  }
  return true;
}

}  // namespace

SsfDecouplingReport check_ssf_decoupling(const MetricGraph& g, const std::set<EdgeId>& lambda_set,
                                         const ConditionFamily& family, const PotentialField& w1,
                                         const PotentialField& w2,
                                         const std::vector<double>& grid, double h) {
  std::set<EdgeId> all, complement, touched;
  for (const Edge& e : g.edges()) all.insert(e.id);
  for (const auto& [e, p] : w1.per_edge) touched.insert(e);
  for (const auto& [e, p] : w2.per_edge) touched.insert(e);
  for (EdgeId e : touched)
    if (!same_profile(w1.find(e), w2.find(e)) && !lambda_set.count(e))
      throw InputError("perturbation support leaves the window at edge " + std::to_string(e));
  for (EdgeId e : all)
    if (!lambda_set.count(e)) complement.insert(e);

  const InducedSubgraph sub_all = induced_subgraph(g, all);
  const InducedSubgraph sub_in = induced_subgraph(g, lambda_set);
  const InducedSubgraph sub_out = induced_subgraph(g, complement);
  const ConditionFamily fam_in = dirichlet_restriction(family, sub_in);
  const ConditionFamily fam_out = dirichlet_restriction(family, sub_out);

  const DiscretizedOperator full1 = assemble_field(sub_all, family, w1, h);
  const DiscretizedOperator full2 = assemble_field(sub_all, family, w2, h);
  const DiscretizedOperator in1 = assemble_field(sub_in, fam_in, w1, h);
  const DiscretizedOperator in2 = assemble_field(sub_in, fam_in, w2, h);
  const DiscretizedOperator out1 = assemble_field(sub_out, fam_out, w1, h);
  const DiscretizedOperator out2 = assemble_field(sub_out, fam_out, w2, h);

  SsfDecouplingReport rep;
  rep.grid = grid;
  rep.h = h;
  for (VertexId v : sub_in.boundary) rep.boundary_degree_sum += g.degree(v);

  rep.min_margin = std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    const int xi_full = count_below(full2, lambda) - count_below(full1, lambda);
    const int xi_res = (count_below(in2, lambda) + count_below(out2, lambda)) -
                       (count_below(in1, lambda) + count_below(out1, lambda));
    rep.xi_full.push_back(xi_full);
    rep.xi_restricted.push_back(xi_res);
    const double margin = rep.boundary_degree_sum + std::abs(xi_res) - std::abs(xi_full);
    rep.min_margin = std::min(rep.min_margin, margin);
  }
  rep.pass = rep.min_margin >= 0.0;
  return rep;
}

SsfVolumeReport check_ssf_volume_bound(const MetricGraph& g, const ConditionFamily& family,
                                       const PotentialField& w1, const PotentialField& w2,
                                       const std::vector<double>& grid, double h) {
  std::set<EdgeId> all;
  for (const Edge& e : g.edges()) all.insert(e.id);
  const InducedSubgraph sub = induced_subgraph(g, all);
  const DiscretizedOperator op1 = assemble_field(sub, family, w1, h);
  const DiscretizedOperator op2 = assemble_field(sub, family, w2, h);

  for (double lambda : grid)
    if (lambda > op1.lambda_max() / 4.0)
      throw AccuracyError("volume bound grid exceeds a quarter of the mesh trust ceiling");

  SsfVolumeReport rep;
  rep.grid = grid;
  rep.h = h;
  rep.bound = (std::sqrt(w1.sup_abs()) + std::sqrt(w2.sup_abs())) * g.total_length() /
                  3.14159265358979323846 +
              5.0 * static_cast<double>(g.edges().size());
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    const int xi = count_below(op2, lambda) - count_below(op1, lambda);
    rep.xi.push_back(xi);
    rep.min_margin = std::min(rep.min_margin, rep.bound - std::abs(xi));
  }
  rep.pass = rep.min_margin >= 0.0;
  return rep;
}

namespace {

// Eigenpairs 0..n plus enough neighbors to close the cluster around n.
SpectrumResult fetch_cluster(const DiscretizedOperator& op, int n) {
  int fetch = std::min(op.dofs(), n + 8);
  for (;;) {
    SpectrumResult res = lowest_eigenvalues(op, fetch, true);
    if (static_cast<int>(res.eigenvalues.size()) <= n)
      throw InputError("eigenvalue index beyond the discrete spectrum");
    const double tol = 1e-6 * std::max(1.0, std::fabs(res.eigenvalues[n]));
    int hi = n;
    while (hi + 1 < static_cast<int>(res.eigenvalues.size()) &&
           res.eigenvalues[hi + 1] - res.eigenvalues[hi] <= tol)
      ++hi;
    if (hi + 1 < static_cast<int>(res.eigenvalues.size()) || fetch == op.dofs()) return res;
    fetch = std::min(op.dofs(), fetch + 8);
  }
}

PiecewiseConstant realized_profile(const AlloyModel& model, const Configuration& config,
                                   EdgeId e) {
  PiecewiseConstant profile = model.site(e).profile;
  if (auto d = config.displacement.find(e); d != config.displacement.end())
    profile = profile.shifted(d->second);
  return profile;
}

}  // namespace

HellmannFeynmanResult hellmann_feynman(const InducedSubgraph& sub, const ConditionFamily& family,
                                       const AlloyModel& model, const Configuration& config, int n,
                                       EdgeId e, double h, bool allow_degenerate) {
  if (n < 0) throw InputError("eigenvalue index must be nonnegative");
  model.site(e);
  const DiscretizedOperator op = assemble(sub, family, model, config, h);
  const SpectrumResult res = fetch_cluster(op, n);
  const double tol = 1e-6 * std::max(1.0, std::fabs(res.eigenvalues[n]));
  int lo = n, hi = n;
  while (lo > 0 && res.eigenvalues[lo] - res.eigenvalues[lo - 1] <= tol) --lo;
  while (hi + 1 < static_cast<int>(res.eigenvalues.size()) &&
         res.eigenvalues[hi + 1] - res.eigenvalues[hi] <= tol)
    ++hi;

  HellmannFeynmanResult out;
  out.multiplicity = hi - lo + 1;
  out.degenerate = out.multiplicity > 1;
  if (out.degenerate && !allow_degenerate)
    throw AccuracyError("eigenvalue " + std::to_string(n) +
                        " is degenerate; the derivative needs cluster averaging");
  const PiecewiseConstant profile = realized_profile(model, config, e);
  double sum = 0.0;
  for (int k = lo; k <= hi; ++k)
    sum += op.quadratic_form_on_edge(res.eigenvectors.col(k), e, profile);
  out.derivative = sum / out.multiplicity;
  return out;
}

std::optional<EigenvalueLift> eigenvalue_lift(const InducedSubgraph& sub,
                                              const ConditionFamily& family,
                                              const AlloyModel& model, const Configuration& config,
                                              double eps, double lambda0, double h) {
  if (!(eps > 0.0)) throw InputError("lift step must be positive");
  const DiscretizedOperator op0 = assemble(sub, family, model, config, h);
  const int m = count_below(op0, lambda0);
  if (m == 0) return std::nullopt;
  const SpectrumResult base = eigenvalues_below(op0, lambda0, true);

  Configuration raised = config;
  for (auto& [e, omega] : raised.coupling)
    if (model.has_site(e)) omega += eps;
  const DiscretizedOperator op1 = assemble(sub, family, model, raised, h);
  const SpectrumResult lifted = lowest_eigenvalues(op1, m, true);

  // (lambda'_j - lambda_k)/eps = (psi'_j, V psi_k)/(psi'_j, M psi_k) with
  // V = sum_e u_e, paired by dominant mass overlap; evaluated this way the
  // quotient never subtracts two O(lambda) eigenvalues
  const Eigen::MatrixXd overlaps =
      lifted.eigenvectors.transpose() * (op0.mass() * base.eigenvectors);

  EigenvalueLift out;
  out.eigenvalues_below = m;
  out.measured = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    int j = 0;
    for (int r = 1; r < m; ++r)
      if (std::fabs(overlaps(r, k)) > std::fabs(overlaps(j, k))) j = r;
    double num = 0.0;
    for (const auto& [e, omega] : config.coupling) {
      if (!model.has_site(e) || sub.edges.count(e) == 0) continue;
      num += op0.bilinear_form_on_edge(lifted.eigenvectors.col(j), base.eigenvectors.col(k), e,
                                       realized_profile(model, config, e));
    }
    const double quotient = num / overlaps(j, k);
    if (quotient < out.measured) {
      out.measured = quotient;
      out.minimizing_index = k + 1;
    }
  }
  const int k = out.minimizing_index - 1;
  for (EdgeId e : sub.edges) {
    if (!model.has_site(e) || !config.coupling.count(e)) continue;
    out.hf_floor +=
        op0.quadratic_form_on_edge(base.eigenvectors.col(k), e, realized_profile(model, config, e));
  }
  return out;
}

ObservabilityReport observability_check(const InducedSubgraph& sub, const ConditionFamily& family,
                                        const AlloyModel& model, const Configuration& config,
                                        double lambda0, double h) {
  const DiscretizedOperator op = assemble(sub, family, model, config, h);
  const SpectrumResult res = eigenvalues_below(op, lambda0, true);

  ObservabilityReport rep;
  double min_slack = std::numeric_limits<double>::infinity();
  for (int n = 0; n < static_cast<int>(res.eigenvalues.size()); ++n) {
    for (EdgeId e : sub.edges) {
      if (!model.has_site(e)) continue;
      const SingleSitePotential& site = model.site(e);
      const double total = op.mass_on_edge(res.eigenvectors.col(n), e, 0.0, op.chain(e).length);
      if (total <= 1e-12) continue;
      const double window =
          op.mass_on_edge(res.eigenvectors.col(n), e, site.window_lo, site.window_hi);
      ObservabilityReport::Row row;
      row.n = n;
      row.lambda = res.eigenvalues[n];
      row.edge = e;
      row.ratio = window / total;
      row.covering = covering_constant(res.eigenvalues[n], e, model);
      row.slack = row.ratio * row.covering;
      min_slack = std::min(min_slack, row.slack);
      rep.rows.push_back(row);
    }
  }
  rep.min_slack = rep.rows.empty() ? 0.0 : min_slack;
  rep.pass = rep.rows.empty() || rep.min_slack >= 1.0 - 1e-9;
  return rep;
}

SwitchFunction::SwitchFunction(double center, double half_width)
    : center_(center), eps_(half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InputError("switch half-width must be positive");
  ramp_ = (15.0 / 16.0) * half_width;
}

double SwitchFunction::operator()(double x) const {
  if (x <= center_ - ramp_) return -1.0;
  if (x >= center_ + ramp_) return 0.0;
  const double t = (x - (center_ - ramp_)) / (2.0 * ramp_);
  return t * t * t * (10.0 + t * (6.0 * t - 15.0)) - 1.0;
}

double SwitchFunction::derivative(double x) const {
  if (x <= center_ - ramp_ || x >= center_ + ramp_) return 0.0;
  const double t = (x - (center_ - ramp_)) / (2.0 * ramp_);
  const double u = t * (1.0 - t);
  return 30.0 * u * u / (2.0 * ramp_);
}

double SampledFunction::operator()(double t) const {
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double w = (t - x[i]) / (x[i + 1] - x[i]);
  return y[i] + w * (y[i + 1] - y[i]);
}

void SampledFunction::validate_monotone() const {
  if (x.size() < 2 || x.size() != y.size())
    throw InputError("sampled function needs matching x/y lists of size >= 2");
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i] < x[i + 1])) throw InputError("sample abscissae must be strictly increasing");
    if (y[i + 1] < y[i]) throw InputError("sampled function must be nondecreasing");
  }
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa, double b,
                        double fb, double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, fa, b, fb, fm, whole, tol, 40);
}

}  // namespace

MonotoneShiftReport monotone_shift_inequality(const SampledFunction& phi,
                                              const SingleSiteDistribution& mu,
                                              double eps_prime) {
  if (!(eps_prime > 0.0)) throw InputError("shift width must be positive");
  phi.validate_monotone();
  const double shift = 4.0 * eps_prime;
  const double a = mu.support_min();
  const double b = mu.support_max();

  double lhs = 0.0;
  double atom_total = 0.0;
  for (double atom : mu.atoms()) {
    const double m = mu.atom_mass(atom);
    atom_total += m;
    lhs += m * (phi(atom + shift) - phi(atom));
  }

  if (atom_total < 1.0 - 1e-12) {
    // continuous law: integrate g(Q(u)) du on panels split where phi kinks
    const auto g = [&](double u) {
      const double w = mu.quantile(u);
      return phi(w + shift) - phi(w);
    };
    std::vector<double> cuts{1e-14, 1.0 - 1e-15};
    for (double knot : phi.x)
      for (double xi : {knot, knot - shift})
        if (xi > a && xi < b) cuts.push_back(std::clamp(mu.cdf(xi), 1e-14, 1.0 - 1e-15));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      lhs += integrate(g, cuts[i], cuts[i + 1], 1e-12);
  }

  MonotoneShiftReport rep;
  rep.lhs = lhs;
  rep.rhs = modulus_of_continuity(mu, 2.0 * eps_prime) * (phi(b + shift) - phi(a));
  rep.margin = rep.rhs - rep.lhs;
  rep.holds = rep.lhs <= rep.rhs + 1e-9 * std::max(1.0, std::fabs(rep.rhs));
  return rep;
}

}  // namespace qgalloy
