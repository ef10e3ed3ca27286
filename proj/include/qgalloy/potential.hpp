#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qgalloy/graph.hpp"
#include "qgalloy/rng.hpp"

namespace qgalloy {

// Piecewise-constant function on [0, L]: value values[i] on
// (breakpoints[i], breakpoints[i+1]).  Values may be signed; single-site
// profiles restrict to >= 0 at model construction.
struct PiecewiseConstant {
  std::vector<double> breakpoints;  // 0 = b_0 < b_1 < ... < b_m = L
  std::vector<double> values;       // size m

  static PiecewiseConstant constant(double value, double L);
  static PiecewiseConstant indicator(double lo, double hi, double L, double value = 1.0);

  double length() const { return breakpoints.back(); }
  double at(double x) const;            // value of the piece containing x
  double sup() const;                   // max value
  double inf() const;                   // min value
  double sup_abs() const;
  double integral(double a, double b) const;
  double inf_on(double a, double b) const;  // essential inf on [a,b]
  // support bounds [a, b]; a == b == 0 for the zero profile
  std::pair<double, double> support() const;
  PiecewiseConstant scaled(double factor) const;
  PiecewiseConstant shifted(double xi) const;  // x -> value(x - xi), zero outside
  void validate() const;
};

struct SingleSitePotential {
  EdgeId edge = 0;
  PiecewiseConstant profile;   // values >= 0
  double window_lo = 0.0;      // S_e = [window_lo, window_hi], s_e > 0
  double window_hi = 0.0;

  double window_length() const { return window_hi - window_lo; }
  double sup_norm() const { return profile.sup(); }
  double min_on_window() const { return profile.inf_on(window_lo, window_hi); }
};

enum class DistributionKind { uniform, bernoulli, power_hoelder, log_hoelder, point_mass };

std::string distribution_kind_name(DistributionKind kind);

// Coupling law with computable CDF, quantile and exact atom list:
//   uniform(q-, q+)
//   bernoulli(p, q-, q+)         P(omega = q+) = p
//   power_hoelder(tau, x0)       F(x) = (x/x0)^tau on [0, x0]
//   log_hoelder(alpha, x0)       F(x) = (1 + log(x0/x))^-alpha on (0, x0]
//   point_mass(c)
class SingleSiteDistribution {
 public:
  static SingleSiteDistribution uniform(double q_minus, double q_plus);
  static SingleSiteDistribution bernoulli(double p, double q_minus, double q_plus);
  static SingleSiteDistribution power_hoelder(double tau, double x0);
  static SingleSiteDistribution log_hoelder(double alpha, double x0);
  static SingleSiteDistribution point_mass(double c);

  DistributionKind kind() const { return kind_; }
  double support_bound() const;  // C_mu
  double support_min() const { return lo_; }
  double support_max() const { return hi_; }

  double cdf(double x) const;
  double cdf_left(double x) const;  // F(x^-)
  double quantile(double u) const;  // inverse CDF, u in (0,1)
  double sample(RandomStream& rs) const;

  std::vector<double> atoms() const;            // atom positions
  double atom_mass(double x) const;
  std::vector<double> cdf_breakpoints() const;  // kinks/jumps of F

  double param(int i) const { return params_[i]; }

 private:
  SingleSiteDistribution(DistributionKind kind, std::array<double, 3> params,
                         double lo, double hi);
  DistributionKind kind_;
  std::array<double, 3> params_;
  double lo_, hi_;
};

// s(mu, eps) = sup_l mu([l-eps, l+eps]), evaluated numerically: candidate
// centers from atoms and CDF breakpoints (shifted by +-eps), a 10^4-point
// grid, then local ternary refinement.  Error <= 1e-6 for the implemented
// families.
double modulus_of_continuity(const SingleSiteDistribution& mu, double eps);

// Displacement xi_e ~ uniform[lo, hi], independent of the couplings.
struct DisplacementLaw {
  double lo = 0.0;
  double hi = 0.0;
};

struct AlloyModel {
  const MetricGraph* graph = nullptr;
  std::map<EdgeId, SingleSitePotential> sites;
  SingleSiteDistribution distribution;
  std::optional<DisplacementLaw> displacements;

  const SingleSitePotential& site(EdgeId e) const;
  bool has_site(EdgeId e) const { return sites.count(e) > 0; }
  // ||W||_{L^inf(e)} for the deterministic background W = sum_e u_e;
  // supports are edge-local so only e's own profile contributes.
  double background_sup(EdgeId e) const;
  double max_site_sup() const;
  void validate() const;
};

// u_e = chi_e with S_e the full edge, on every edge of g.
AlloyModel indicator_model(const MetricGraph& g, SingleSiteDistribution mu);

struct Configuration {
  std::map<EdgeId, double> coupling;
  std::map<EdgeId, double> displacement;  // empty when displacements disabled
  std::uint64_t seed = 0;
  std::uint32_t trial = 0;
};

// C(lambda, e) = (l_e / s_e) * exp(8 l_e sqrt(C_mu ||W||_inf(e) + |lambda|)).
double covering_constant(double lambda, EdgeId e, const AlloyModel& model);

// Per-|Λ| ratios of the three summability sums: boundary degrees of the
// support subgraphs, sqrt(||u_e||) * vol, support edge counts.
struct SummabilityReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};
SummabilityReport check_summability(const InducedSubgraph& sub, const AlloyModel& model);

// One i.i.d. draw per edge of lambda; pure in (seed, trial).
Configuration sample_configuration(const AlloyModel& model, const std::set<EdgeId>& lambda,
                                   std::uint64_t seed, std::uint32_t trial);

// omega_e * u_e(x - xi_e); edges without a coupling evaluate to 0.
double evaluate_potential(const AlloyModel& model, const Configuration& config,
                          EdgeId e, double x);

// Rescales every profile by its smallest factor t with
//   t * min_{S_e} u_e >= c_minus * C(lambda0, e; t-scaled model),
// the covering inequality with the constant evaluated on the scaled model.
AlloyModel enforce_covering(AlloyModel model, double c_minus, double lambda0);
bool verify_covering(const AlloyModel& model, double c_minus, double lambda0);

}  // namespace qgalloy
