#include "qgalloy/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgalloy/errors.hpp"

namespace qgalloy {

PiecewiseConstant PiecewiseConstant::constant(double value, double L) {
  if (!(L > 0.0) || !std::isfinite(L)) throw InputError("domain length must be positive");
  return {{0.0, L}, {value}};
}

PiecewiseConstant PiecewiseConstant::indicator(double lo, double hi, double L, double value) {
  if (!(L > 0.0)) throw InputError("domain length must be positive");
  if (!(0.0 <= lo && lo < hi && hi <= L)) throw InputError("indicator needs 0 <= lo < hi <= L");
  PiecewiseConstant p;
  p.breakpoints.push_back(0.0);
  p.values.reserve(3);
  if (lo > 0.0) {
    p.breakpoints.push_back(lo);
    p.values.push_back(0.0);
  }
  p.breakpoints.push_back(hi);
  p.values.push_back(value);
  if (hi < L) {
    p.breakpoints.push_back(L);
    p.values.push_back(0.0);
  }
  return p;
}

double PiecewiseConstant::at(double x) const {
  if (x < breakpoints.front() || x > breakpoints.back()) return 0.0;
  // right-continuous at interior breakpoints, left-continuous at L
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  std::size_t i = (it == breakpoints.end()) ? values.size() - 1
                                            : static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  if (i >= values.size()) i = values.size() - 1;
  return values[i];
}

double PiecewiseConstant::sup() const {
  return *std::max_element(values.begin(), values.end());
}

double PiecewiseConstant::inf() const {
  return *std::min_element(values.begin(), values.end());
}

double PiecewiseConstant::sup_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

double PiecewiseConstant::integral(double a, double b) const {
  a = std::max(a, breakpoints.front());
  b = std::min(b, breakpoints.back());
  if (!(b > a)) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double lo = std::max(a, breakpoints[i]);
    const double hi = std::min(b, breakpoints[i + 1]);
    if (hi > lo) sum += values[i] * (hi - lo);
  }
  return sum;
}

double PiecewiseConstant::inf_on(double a, double b) const {
  a = std::max(a, breakpoints.front());
  b = std::min(b, breakpoints.back());
  if (!(b >= a)) throw InputError("empty interval");
  if (a == b) return at(a);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double lo = std::max(a, breakpoints[i]);
    const double hi = std::min(b, breakpoints[i + 1]);
    if (hi > lo) m = std::min(m, values[i]);
  }
  return m;
}

std::pair<double, double> PiecewiseConstant::support() const {
  double a = 0.0, b = 0.0;
  bool seen = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) continue;
    if (!seen) a = breakpoints[i];
    b = breakpoints[i + 1];
    seen = true;
  }
  if (!seen) return {0.0, 0.0};
  return {a, b};
}

PiecewiseConstant PiecewiseConstant::scaled(double factor) const {
  PiecewiseConstant out = *this;
  for (double& v : out.values) v *= factor;
  return out;
}

PiecewiseConstant PiecewiseConstant::shifted(double xi) const {
  const double L = breakpoints.back();
  std::vector<double> cuts{0.0, L};
  for (double b : breakpoints) {
    const double x = b + xi;
    if (x > 0.0 && x < L) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  PiecewiseConstant out;
  out.breakpoints = cuts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]) - xi;
    out.values.push_back((mid < 0.0 || mid > L) ? 0.0 : at(mid));
  }
  return out;
}

void PiecewiseConstant::validate() const {
  if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size())
    throw InputError("breakpoint/value size mismatch");
  if (breakpoints.front() != 0.0) throw InputError("domain must start at 0");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw InputError("breakpoints must be strictly increasing");
  for (double b : breakpoints)
    if (!std::isfinite(b)) throw InputError("breakpoints must be finite");
  for (double v : values)
    if (!std::isfinite(v)) throw InputError("values must be finite");
}

std::string distribution_kind_name(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::bernoulli: return "bernoulli";
    case DistributionKind::power_hoelder: return "power_hoelder";
    case DistributionKind::log_hoelder: return "log_hoelder";
    case DistributionKind::point_mass: return "point_mass";
  }
  throw InputError("unknown distribution kind");
}

SingleSiteDistribution::SingleSiteDistribution(DistributionKind kind,
                                               std::array<double, 3> params, double lo, double hi)
    : kind_(kind), params_(params), lo_(lo), hi_(hi) {}

SingleSiteDistribution SingleSiteDistribution::uniform(double q_minus, double q_plus) {
  if (!(q_minus < q_plus) || !std::isfinite(q_minus) || !std::isfinite(q_plus))
    throw InputError("uniform law needs q_minus < q_plus");
  return {DistributionKind::uniform, {q_minus, q_plus, 0.0}, q_minus, q_plus};
}

SingleSiteDistribution SingleSiteDistribution::bernoulli(double p, double q_minus, double q_plus) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("bernoulli weight must lie in (0,1)");
  if (!(q_minus < q_plus)) throw InputError("bernoulli law needs q_minus < q_plus");
  return {DistributionKind::bernoulli, {p, q_minus, q_plus}, q_minus, q_plus};
}

SingleSiteDistribution SingleSiteDistribution::power_hoelder(double tau, double x0) {
  if (!(tau > 0.0)) throw InputError("power exponent must be positive");
  if (!(x0 > 0.0)) throw InputError("support endpoint must be positive");
  return {DistributionKind::power_hoelder, {tau, x0, 0.0}, 0.0, x0};
}

SingleSiteDistribution SingleSiteDistribution::log_hoelder(double alpha, double x0) {
  if (!(alpha > 0.0)) throw InputError("log exponent must be positive");
  if (!(x0 > 0.0)) throw InputError("support endpoint must be positive");
  return {DistributionKind::log_hoelder, {alpha, x0, 0.0}, 0.0, x0};
}

SingleSiteDistribution SingleSiteDistribution::point_mass(double c) {
  if (!std::isfinite(c)) throw InputError("point mass location must be finite");
  return {DistributionKind::point_mass, {c, 0.0, 0.0}, c, c};
}

double SingleSiteDistribution::support_bound() const {
  return std::max(std::fabs(lo_), std::fabs(hi_));
}

double SingleSiteDistribution::cdf(double x) const {
  switch (kind_) {
    case DistributionKind::uniform:
      return std::clamp((x - params_[0]) / (params_[1] - params_[0]), 0.0, 1.0);
    case DistributionKind::bernoulli:
      if (x < params_[1]) return 0.0;
      if (x < params_[2]) return 1.0 - params_[0];
      return 1.0;
    case DistributionKind::power_hoelder:
      if (x <= 0.0) return 0.0;
      if (x >= params_[1]) return 1.0;
      return std::pow(x / params_[1], params_[0]);
    case DistributionKind::log_hoelder:
      if (x <= 0.0) return 0.0;
      if (x >= params_[1]) return 1.0;
      return std::pow(1.0 + std::log(params_[1] / x), -params_[0]);
    case DistributionKind::point_mass:
      return x < params_[0] ? 0.0 : 1.0;
  }
  return 0.0;
}

double SingleSiteDistribution::cdf_left(double x) const {
  switch (kind_) {
    case DistributionKind::bernoulli:
      if (x <= params_[1]) return 0.0;
      if (x <= params_[2]) return 1.0 - params_[0];
      return 1.0;
    case DistributionKind::point_mass:
      return x <= params_[0] ? 0.0 : 1.0;
    default:
      return cdf(x);
  }
}

double SingleSiteDistribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw InputError("quantile argument must lie in (0,1)");
  switch (kind_) {
    case DistributionKind::uniform:
      return params_[0] + u * (params_[1] - params_[0]);
    case DistributionKind::bernoulli:
      return u <= 1.0 - params_[0] ? params_[1] : params_[2];
    case DistributionKind::power_hoelder:
      return params_[1] * std::pow(u, 1.0 / params_[0]);
    case DistributionKind::log_hoelder:
      return params_[1] * std::exp(1.0 - std::pow(u, -1.0 / params_[0]));
    case DistributionKind::point_mass:
      return params_[0];
  }
  return 0.0;
}

double SingleSiteDistribution::sample(RandomStream& rs) const {
  return quantile(rs.uniform01());
}

std::vector<double> SingleSiteDistribution::atoms() const {
  switch (kind_) {
    case DistributionKind::bernoulli: return {params_[1], params_[2]};
    case DistributionKind::point_mass: return {params_[0]};
    default: return {};
  }
}

double SingleSiteDistribution::atom_mass(double x) const {
  switch (kind_) {
    case DistributionKind::bernoulli:
      if (x == params_[1]) return 1.0 - params_[0];
      if (x == params_[2]) return params_[0];
      return 0.0;
    case DistributionKind::point_mass:
      return x == params_[0] ? 1.0 : 0.0;
    default:
      return 0.0;
  }
}

std::vector<double> SingleSiteDistribution::cdf_breakpoints() const {
  switch (kind_) {
    case DistributionKind::uniform: return {params_[0], params_[1]};
    case DistributionKind::bernoulli: return {params_[1], params_[2]};
    case DistributionKind::power_hoelder: return {0.0, params_[1]};
    case DistributionKind::log_hoelder: return {0.0, params_[1]};
    case DistributionKind::point_mass: return {params_[0]};
  }
  return {};
}

double modulus_of_continuity(const SingleSiteDistribution& mu, double eps) {
  if (eps < 0.0 || !std::isfinite(eps)) throw InputError("window half-width must be >= 0");
  // mass of the closed window centered at l
  auto mass = [&](double l) { return mu.cdf(l + eps) - mu.cdf_left(l - eps); };

  std::vector<double> candidates;
  auto push = [&](double x) {
    candidates.push_back(x - eps);
    candidates.push_back(x);
    candidates.push_back(x + eps);
  };
  for (double a : mu.atoms()) push(a);
  for (double b : mu.cdf_breakpoints()) push(b);
  candidates.push_back(mu.support_min() + eps);
  candidates.push_back(mu.support_max() - eps);

  double best = 0.0;
  for (double l : candidates) best = std::max(best, mass(l));

  const double lo = mu.support_min() - eps;
  const double hi = mu.support_max() + eps;
  if (hi > lo) {
    const int n = 10000;
    const double step = (hi - lo) / n;
    double arg = lo;
    for (int i = 0; i <= n; ++i) {
      const double l = lo + step * i;
      const double m = mass(l);
      if (m > best) {
        best = m;
        arg = l;
      }
    }
    double a = std::max(lo, arg - step), b = std::min(hi, arg + step);
    for (int it = 0; it < 200; ++it) {
      const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (mass(m1) < mass(m2))
        a = m1;
      else
        b = m2;
    }
    best = std::max(best, mass(0.5 * (a + b)));
  }
  return std::clamp(best, 0.0, 1.0);
}

const SingleSitePotential& AlloyModel::site(EdgeId e) const {
  auto it = sites.find(e);
  if (it == sites.end()) throw InputError("no single-site potential on edge " + std::to_string(e));
  return it->second;
}

double AlloyModel::background_sup(EdgeId e) const {
  auto it = sites.find(e);
  return it == sites.end() ? 0.0 : it->second.profile.sup();
}

double AlloyModel::max_site_sup() const {
  double m = 0.0;
  for (const auto& [e, s] : sites) m = std::max(m, s.profile.sup());
  return m;
}

void AlloyModel::validate() const {
  if (graph == nullptr) throw InputError("alloy model has no graph");
  for (const auto& [e, s] : sites) {
    const Edge& edge = graph->edge(e);
    if (s.edge != e) throw InputError("site keyed under the wrong edge");
    s.profile.validate();
    if (std::fabs(s.profile.length() - edge.length) > 1e-9 * edge.length)
      throw InputError("site profile domain differs from edge length");
    if (s.profile.inf() < 0.0)
      throw InputError("single-site profiles must be nonnegative");
    if (!(0.0 <= s.window_lo && s.window_lo < s.window_hi && s.window_hi <= edge.length))
      throw InputError("site window must be a nondegenerate subinterval of the edge");
    if (displacements) {
      if (!(displacements->lo <= displacements->hi))
        throw InputError("displacement law needs lo <= hi");
      const auto [a, b] = s.profile.support();
      if (displacements->lo + a < -1e-12 || displacements->hi + b > edge.length + 1e-12)
        throw InputError("displacements can push the profile off edge " + std::to_string(e));
    }
  }
}

AlloyModel indicator_model(const MetricGraph& g, SingleSiteDistribution mu) {
  AlloyModel model{&g, {}, std::move(mu), std::nullopt};
  for (const Edge& e : g.edges())
    model.sites.emplace(e.id, SingleSitePotential{e.id, PiecewiseConstant::constant(1.0, e.length),
                                                  0.0, e.length});
  return model;
}

double covering_constant(double lambda, EdgeId e, const AlloyModel& model) {
  const SingleSitePotential& s = model.site(e);
  const double len = model.graph->edge(e).length;
  const double width = s.window_length();
  if (!(width > 0.0)) throw InputError("covering window on edge " + std::to_string(e) +
                                       " is degenerate");
  const double c_mu = model.distribution.support_bound();
  return (len / width) * std::exp(8.0 * len *
                                  std::sqrt(c_mu * model.background_sup(e) + std::fabs(lambda)));
}

SummabilityReport check_summability(const InducedSubgraph& sub, const AlloyModel& model) {
  SummabilityReport r;
  if (sub.edges.empty()) return r;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  for (EdgeId e : sub.edges) {
    auto it = model.sites.find(e);
    if (it == model.sites.end() || it->second.profile.sup() == 0.0) continue;
    const InducedSubgraph support = induced_subgraph(*model.graph, {e});
    for (VertexId v : support.boundary) c1 += model.graph->degree(v);
    c2 += std::sqrt(it->second.profile.sup()) * support.volume();
    c3 += 1.0;
  }
  const double n = static_cast<double>(sub.edges.size());
  r.c1 = c1 / n;
  r.c2 = c2 / n;
  r.c3 = c3 / n;
  return r;
}

Configuration sample_configuration(const AlloyModel& model, const std::set<EdgeId>& lambda,
                                   std::uint64_t seed, std::uint32_t trial) {
  Configuration config;
  config.seed = seed;
  config.trial = trial;
  for (EdgeId e : lambda) {
    if (!model.has_site(e)) continue;
    RandomStream coupling(seed, trial, static_cast<std::uint32_t>(e), 0);
    config.coupling[e] = model.distribution.sample(coupling);
    if (model.displacements) {
      RandomStream shift(seed, trial, static_cast<std::uint32_t>(e), 1);
      config.displacement[e] = shift.uniform(model.displacements->lo, model.displacements->hi);
    }
  }
  return config;
}

double evaluate_potential(const AlloyModel& model, const Configuration& config, EdgeId e,
                          double x) {
  const Edge& edge = model.graph->edge(e);
  if (x < 0.0 || x > edge.length)
    throw InputError("coordinate outside edge " + std::to_string(e));
  auto site = model.sites.find(e);
  if (site == model.sites.end()) return 0.0;
  auto omega = config.coupling.find(e);
  if (omega == config.coupling.end()) return 0.0;
  double xi = 0.0;
  if (auto d = config.displacement.find(e); d != config.displacement.end()) xi = d->second;
  const double arg = x - xi;
  if (arg < 0.0 || arg > edge.length) return 0.0;
  return omega->second * model.sites.at(e).profile.at(arg);
}

namespace {

// g(t) = t * m - c_minus * (l/s) * exp(8 l sqrt(C_mu t M + |lambda0|)),
// concave in t; smallest nonnegative root is the covering scale.
double covering_scale(double m, double M, double len, double width, double c_mu, double c_minus,
                      double lambda0) {
  const double base = c_minus * (len / width);
  auto g = [&](double t) {
    return t * m - base * std::exp(8.0 * len * std::sqrt(c_mu * t * M + std::fabs(lambda0)));
  };
  double t_hi = 1.0;
  for (int k = 0; k < 200 && g(t_hi) >= g(t_hi / 2.0); ++k) t_hi *= 2.0;
  double a = 0.0, b = t_hi;
  for (int it = 0; it < 500; ++it) {
    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (g(m1) < g(m2))
      a = m1;
    else
      b = m2;
  }
  const double t_star = 0.5 * (a + b);
  if (!(g(t_star) >= 0.0))
    throw InputError("covering condition is infeasible at the requested lower bound");
  double lo = 0.0, hi = t_star;
  for (int it = 0; it < 2000 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

AlloyModel enforce_covering(AlloyModel model, double c_minus, double lambda0) {
  if (!(c_minus > 0.0)) throw InputError("covering lower bound must be positive");
  model.validate();
  const double c_mu = model.distribution.support_bound();
  for (auto& [e, s] : model.sites) {
    const double len = model.graph->edge(e).length;
    const double width = s.window_length();
    if (!(width > 0.0))
      throw InputError("covering window on edge " + std::to_string(e) + " is degenerate");
    const double m = s.min_on_window();
    const double M = s.profile.sup();
    if (!(m > 0.0))
      throw InputError("profile vanishes on the covering window of edge " + std::to_string(e));
    const double t = covering_scale(m, M, len, width, c_mu, c_minus, lambda0);
    s.profile = s.profile.scaled(t);
  }
  return model;
}

bool verify_covering(const AlloyModel& model, double c_minus, double lambda0) {
  for (const auto& [e, s] : model.sites) {
    const double bound = c_minus * covering_constant(lambda0, e, model);
    if (s.min_on_window() < bound * (1.0 - 1e-9)) return false;
  }
  return true;
}

}  // namespace qgalloy
