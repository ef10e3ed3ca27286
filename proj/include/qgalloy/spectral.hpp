#pragma once

#include <optional>
#include <vector>

#include "qgalloy/assembly.hpp"

namespace qgalloy {

// Number of pencil eigenvalues in the closed interval [a, b].
int trace_projector(const DiscretizedOperator& op, double a, double b);

// xi(lambda) = N_2(lambda) - N_1(lambda); integer-valued, computed through
// counting functions only so the two pencils may have different dof sets.
struct SsfSample {
  std::vector<double> grid;
  std::vector<int> xi;
};
SsfSample ssf(const DiscretizedOperator& op1, const DiscretizedOperator& op2,
              const std::vector<double>& grid);

// |xi_{H1,H2}| <= sum_{v in boundary(Λ)} deg_G(v) + |xi_{h1,h2}| where h_i
// are the Dirichlet restrictions to Λ.  Requires supp(W2 - W1) within G_Λ.
struct SsfDecouplingReport {
  std::vector<double> grid;
  std::vector<int> xi_full;
  std::vector<int> xi_restricted;
  int boundary_degree_sum = 0;
  double min_margin = 0.0;  // min over grid of bound - |xi_full|
  bool pass = false;
  double h = 0.0;
};
SsfDecouplingReport check_ssf_decoupling(const MetricGraph& g, const std::set<EdgeId>& lambda_set,
                                         const ConditionFamily& family,
                                         const PotentialField& w1, const PotentialField& w2,
                                         const std::vector<double>& grid, double h);

// |xi| <= (sqrt(||W1||) + sqrt(||W2||)) vol(G)/pi + 5 |E| for
// lambda <= lambda_max(h)/4.
struct SsfVolumeReport {
  std::vector<double> grid;
  std::vector<int> xi;
  double bound = 0.0;
  double min_margin = 0.0;
  bool pass = false;
  double h = 0.0;
};
SsfVolumeReport check_ssf_volume_bound(const MetricGraph& g, const ConditionFamily& family,
                                       const PotentialField& w1, const PotentialField& w2,
                                       const std::vector<double>& grid, double h);

// d lambda_n / d omega_e = (psi_n, u_e psi_n) for M-normalized psi_n.
// Eigenvalues closer than 1e-6 relative to a neighbor are degenerate: the
// averaged trace over the cluster is returned when allow_degenerate is
// set, otherwise an AccuracyError is raised.
struct HellmannFeynmanResult {
  double derivative = 0.0;
  bool degenerate = false;
  int multiplicity = 1;
};
HellmannFeynmanResult hellmann_feynman(const InducedSubgraph& sub, const ConditionFamily& family,
                                       const AlloyModel& model, const Configuration& config,
                                       int n, EdgeId e, double h,
                                       bool allow_degenerate = false);

// min over lambda_n(omega) <= lambda0 of
//   (lambda_n(omega + eps) - lambda_n(omega)) / eps,
// couplings raised by eps on every site edge.  Empty when no eigenvalue
// lies below lambda0.
struct EigenvalueLift {
  double measured = 0.0;
  int minimizing_index = 0;  // 1-based
  double hf_floor = 0.0;     // sum_e (psi_n, u_e psi_n) at the minimizer
  int eigenvalues_below = 0;
};
std::optional<EigenvalueLift> eigenvalue_lift(const InducedSubgraph& sub,
                                              const ConditionFamily& family,
                                              const AlloyModel& model,
                                              const Configuration& config,
                                              double eps, double lambda0, double h);

// Per eigenpair below lambda0 and edge carrying mass > 1e-12:
// slack = (int_{S_e} psi^2 / int_e psi^2) * C(lambda, e) >= 1.
struct ObservabilityReport {
  struct Row {
    int n = 0;
    double lambda = 0.0;
    EdgeId edge = 0;
    double ratio = 0.0;
    double covering = 0.0;  // C(lambda, e)
    double slack = 0.0;
  };
  std::vector<Row> rows;
  double min_slack = 0.0;
  bool pass = false;
};
ObservabilityReport observability_check(const InducedSubgraph& sub, const ConditionFamily& family,
                                        const AlloyModel& model, const Configuration& config,
                                        double lambda0, double h);

// Smooth monotone switch: -1 left of lambda - eps, 0 right of lambda + eps,
// quintic smoothstep ramp on an internally narrowed width so that
// ||rho'||_inf = 1/eps exactly.
class SwitchFunction {
 public:
  SwitchFunction(double center, double half_width);
  double operator()(double x) const;
  double derivative(double x) const;
  double center() const { return center_; }
  double half_width() const { return eps_; }

 private:
  double center_, eps_, ramp_;
};

// Piecewise-linear monotone function given by samples (x_i, y_i),
// constant beyond the ends.
struct SampledFunction {
  std::vector<double> x;
  std::vector<double> y;
  double operator()(double t) const;
  void validate_monotone() const;
};

// integral [phi(w + 4 eps') - phi(w)] dmu(w)
//   <= s(mu, 2 eps') * [phi(b + 4 eps') - phi(a)], supp mu in [a, b].
// Atoms are summed exactly, continuous parts integrated adaptively in
// quantile coordinates on panels split at the kink images.
struct MonotoneShiftReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
};
MonotoneShiftReport monotone_shift_inequality(const SampledFunction& phi,
                                              const SingleSiteDistribution& mu,
                                              double eps_prime);

}  // namespace qgalloy
