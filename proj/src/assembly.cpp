#include "qgalloy/assembly.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "qgalloy/errors.hpp"
#include "qgalloy/rng.hpp"

namespace qgalloy {

namespace {

constexpr int kDenseSolveThreshold = 1200;  // above this, bisection slicing
constexpr int kDenseInertiaThreshold = 600;

double cube(double x) { return x * x * x; }

}  // namespace

PotentialField PotentialField::from_model(const AlloyModel& model, const Configuration& config) {
  PotentialField field;
  for (const auto& [e, omega] : config.coupling) {
    auto it = model.sites.find(e);
    if (it == model.sites.end()) continue;
    PiecewiseConstant profile = it->second.profile;
    if (auto d = config.displacement.find(e); d != config.displacement.end())
      profile = profile.shifted(d->second);
    field.per_edge.emplace(e, profile.scaled(omega));
  }
  return field;
}

double PotentialField::sup_abs() const {
  double m = 0.0;
  for (const auto& [e, p] : per_edge) m = std::max(m, p.sup_abs());
  return m;
}

const PiecewiseConstant* PotentialField::find(EdgeId e) const {
  auto it = per_edge.find(e);
  return it == per_edge.end() ? nullptr : &it->second;
}

const EdgeChain& DiscretizedOperator::chain(EdgeId e) const {
  auto it = chain_index_.find(e);
  if (it == chain_index_.end()) throw InputError("edge " + std::to_string(e) + " is not meshed");
  return chains_[it->second];
}

DiscretizedOperator assemble_field(const InducedSubgraph& sub, const ConditionFamily& family,
                                   const PotentialField& field, double h, long long dof_cap) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("mesh width must be positive");
  if (sub.parent == nullptr) throw InputError("subgraph has no parent graph");
  for (VertexId v : sub.subgraph_vertices()) {
    auto it = family.conditions.find(v);
    if (it == family.conditions.end())
      throw InputError("no condition at vertex " + std::to_string(v));
    if (it->second.degree != sub.subgraph_degree(v))
      throw InputError("condition degree mismatch at vertex " + std::to_string(v));
    if (it->second.kind == ConditionKind::general)
      throw CapabilityError("general vertex conditions are not assemblable");
  }

  long long node_budget = 0;
  for (EdgeId e : sub.edges) {
    const double len = sub.parent->edge(e).length;
    node_budget += std::max(2LL, static_cast<long long>(std::ceil(len / h - 1e-9))) + 1;
  }
  if (node_budget > dof_cap)
    throw ResourceError("mesh would need about " + std::to_string(node_budget) +
                        " nodes, above the cap " + std::to_string(dof_cap));

  DiscretizedOperator op;
  std::map<VertexId, int> shared_dof;
  int nd = 0;

  auto end_dof = [&](VertexId v, EdgeId e, double coord) -> int {
    const VertexCondition& c = family.conditions.at(v);
    switch (c.kind) {
      case ConditionKind::dirichlet:
        return -1;
      case ConditionKind::neumann_decoupled:
        op.sites_.push_back({DofSite::Type::edge_point, v, e, coord});
        return nd++;
      default: {
        auto [it, inserted] = shared_dof.try_emplace(v, nd);
        if (inserted) {
          op.sites_.push_back({DofSite::Type::shared_vertex, v, -1, 0.0});
          ++nd;
        }
        return it->second;
      }
    }
  };

  for (EdgeId e : sub.edges) {
    const Edge& edge = sub.parent->edge(e);
    const int cells =
        static_cast<int>(std::max(2LL, static_cast<long long>(std::ceil(edge.length / h - 1e-9))));
    const double hc = edge.length / cells;
    EdgeChain chain{e, edge.length, cells, hc, std::vector<int>(cells + 1, -1)};
    chain.node_dofs[0] = end_dof(edge.from, e, 0.0);
    for (int i = 1; i < cells; ++i) {
      chain.node_dofs[i] = nd++;
      op.sites_.push_back({DofSite::Type::edge_point, -1, e, i * hc});
    }
    chain.node_dofs[cells] = end_dof(edge.to, e, edge.length);
    op.chain_index_.emplace(e, op.chains_.size());
    op.chains_.push_back(std::move(chain));
    op.h_max_ = std::max(op.h_max_, hc);
  }

  std::vector<Eigen::Triplet<double>> kt, mt;
  auto add = [](std::vector<Eigen::Triplet<double>>& t, int i, int j, double v) {
    if (i < 0 || j < 0 || v == 0.0) return;
    t.emplace_back(i, j, v);
    if (i != j) t.emplace_back(j, i, v);
  };

  int bandwidth = 0;
  for (const EdgeChain& chain : op.chains_) {
    const double hc = chain.cell_width;
    const PiecewiseConstant* w = field.find(chain.edge);
    for (int i = 0; i < chain.cells; ++i) {
      const int d0 = chain.node_dofs[i];
      const int d1 = chain.node_dofs[i + 1];
      if (d0 >= 0 && d1 >= 0) bandwidth = std::max(bandwidth, std::abs(d0 - d1));
      add(kt, d0, d0, 1.0 / hc);
      add(kt, d1, d1, 1.0 / hc);
      add(kt, d0, d1, -1.0 / hc);
      add(mt, d0, d0, hc * (1.0 / 3.0));
      add(mt, d1, d1, hc * (1.0 / 3.0));
      add(mt, d0, d1, hc * (1.0 / 6.0));
      if (w == nullptr) continue;
      const double x0 = i * hc;
      const double x1 = x0 + hc;
      for (std::size_t j = 0; j < w->values.size(); ++j) {
        const double q0 = std::max(x0, w->breakpoints[j]);
        const double q1 = std::min(x1, w->breakpoints[j + 1]);
        if (!(q1 > q0) || w->values[j] == 0.0) continue;
        const double t1 = std::clamp((q0 - x0) / hc, 0.0, 1.0);
        const double t2 = std::clamp((q1 - x0) / hc, 0.0, 1.0);
        const double ill = (cube(1.0 - t1) - cube(1.0 - t2)) / 3.0;
        const double irr = (cube(t2) - cube(t1)) / 3.0;
        const double ilr = (t2 * t2 - t1 * t1) / 2.0 - (cube(t2) - cube(t1)) / 3.0;
        const double c = w->values[j] * hc;
        add(kt, d0, d0, c * ill);
        add(kt, d1, d1, c * irr);
        add(kt, d0, d1, c * ilr);
      }
    }
  }
  for (VertexId v : sub.subgraph_vertices()) {
    const VertexCondition& c = family.conditions.at(v);
    if (c.kind == ConditionKind::delta && c.alpha != 0.0) add(kt, shared_dof.at(v), shared_dof.at(v), c.alpha);
  }

  op.K_.resize(nd, nd);
  op.M_.resize(nd, nd);
  op.K_.setFromTriplets(kt.begin(), kt.end());
  op.M_.setFromTriplets(mt.begin(), mt.end());
  op.K_.makeCompressed();
  op.M_.makeCompressed();
  op.bandwidth_ = bandwidth;
  return op;
}

DiscretizedOperator assemble(const InducedSubgraph& sub, const ConditionFamily& family,
                             const AlloyModel& model, const Configuration& config, double h) {
  return assemble_field(sub, family, PotentialField::from_model(model, config), h);
}

namespace {

struct Tridiag {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;
};

Tridiag extract_tridiag(const Eigen::SparseMatrix<double>& a) {
  const int n = static_cast<int>(a.rows());
  Tridiag t{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(std::max(0, n - 1))};
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
      if (it.row() == it.col())
        t.diag(it.row()) = it.value();
      else if (it.row() == it.col() + 1)
        t.off(it.col()) = it.value();
    }
  return t;
}

// negative-pivot count of the LDL^T of (K - lambda M) for a tridiagonal
// pencil; zero pivots are pushed to the negative side
int sturm_negatives(const Tridiag& k, const Tridiag& m, double lambda) {
  int neg = 0;
  double prev = 1.0;
  for (int i = 0; i < k.diag.size(); ++i) {
    double d = k.diag(i) - lambda * m.diag(i);
    if (i > 0) {
      const double b = k.off(i - 1) - lambda * m.off(i - 1);
      d -= b * b / prev;
    }
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++neg;
    prev = d;
  }
  return neg;
}

// Bunch-Kaufman inertia; returns -1 on factorization breakdown
int dense_negatives(Eigen::MatrixXd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (n == 0) return 0;
  std::vector<lapack_int> ipiv(n);
  const lapack_int info =
      LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n, ipiv.data());
  if (info < 0) throw AccuracyError("symmetric factorization failed");
  if (info > 0) return -1;
  int neg = 0;
  for (lapack_int i = 0; i < n;) {
    if (ipiv[i] > 0) {
      if (a(i, i) < 0.0) ++neg;
      if (a(i, i) == 0.0) return -1;
      i += 1;
    } else {
      const double d1 = a(i, i), d2 = a(i + 1, i + 1), b = a(i + 1, i);
      const double det = d1 * d2 - b * b;
      if (det < 0.0)
        neg += 1;
      else if (det == 0.0)
        return -1;
      else if (d1 + d2 < 0.0)
        neg += 2;
      i += 2;
    }
  }
  return neg;
}

// Counting workhorse shared by one slicing run; caches what the backend
// needs across many lambda probes.
class InertiaCounter {
 public:
  explicit InertiaCounter(const DiscretizedOperator& op) : op_(op) {
    if (op.dofs() == 0) return;
    if (op.bandwidth() <= 1) {
      tk_ = extract_tridiag(op.stiffness());
      tm_ = extract_tridiag(op.mass());
      mode_ = Mode::sturm;
    } else if (op.dofs() <= kDenseInertiaThreshold) {
      mode_ = Mode::dense;
    } else {
      mode_ = Mode::sparse;
      // pattern of K - lambda M is the K/M union for every lambda
      shifted_ = op.stiffness() - op.mass();
      ldlt_.analyzePattern(shifted_);
    }
  }

  // |{n : lambda_n <= lambda}| for the exact probe value, no tie nudge
  int count(double lambda) {
    if (op_.dofs() == 0) return 0;
    double probe = lambda;
    for (int attempt = 0; attempt < 4; ++attempt) {
      const int c = try_count(probe);
      if (c >= 0) return c;
      probe += (1e-12 * std::fabs(probe) + 1e-14) * (attempt + 1);
    }
    throw AccuracyError("inertia count broke down near lambda = " + std::to_string(lambda));
  }

 private:
  enum class Mode { sturm, dense, sparse };

  int try_count(double lambda) {
    switch (mode_) {
      case Mode::sturm:
        return sturm_negatives_shifted(lambda);
      case Mode::dense:
        return dense_negatives(Eigen::MatrixXd(op_.stiffness()) -
                               lambda * Eigen::MatrixXd(op_.mass()));
      case Mode::sparse: {
        shifted_ = op_.stiffness() - lambda * op_.mass();
        ldlt_.factorize(shifted_);
        if (ldlt_.info() != Eigen::Success) return -1;
        int neg = 0;
        const auto& d = ldlt_.vectorD();
        for (Eigen::Index i = 0; i < d.size(); ++i) {
          if (d(i) == 0.0) return -1;
          if (d(i) < 0.0) ++neg;
        }
        return neg;
      }
    }
    return -1;
  }

  int sturm_negatives_shifted(double lambda) { return sturm_negatives(tk_, tm_, lambda); }

  const DiscretizedOperator& op_;
  Mode mode_ = Mode::dense;
  Tridiag tk_, tm_;
  Eigen::SparseMatrix<double> shifted_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

double up_nudge(double lambda) { return lambda + (1e-12 * std::fabs(lambda) + 1e-14); }
double down_nudge(double lambda) { return lambda - (1e-12 * std::fabs(lambda) + 1e-14); }

void require_trusted(const DiscretizedOperator& op, double lambda) {
  if (lambda > op.lambda_max())
    throw AccuracyError("energy " + std::to_string(lambda) + " lies above the mesh trust ceiling " +
                        std::to_string(op.lambda_max()));
}

// Inverse iteration around sigma; factors once, iterates with sparse M.
class ShiftedSolver {
 public:
  ShiftedSolver(const DiscretizedOperator& op, double sigma) : n_(op.dofs()) {
    if (op.bandwidth() <= 1) {
      tridiag_ = true;
      const Tridiag k = extract_tridiag(op.stiffness());
      const Tridiag m = extract_tridiag(op.mass());
      d_.resize(n_);
      dl_.resize(std::max(0, n_ - 1));
      du_.resize(std::max(0, n_ - 1));
      du2_.resize(std::max(0, n_ - 2));
      ipiv_.resize(n_);
      for (int i = 0; i < n_; ++i) d_[i] = k.diag(i) - sigma * m.diag(i);
      for (int i = 0; i + 1 < n_; ++i) dl_[i] = du_[i] = k.off(i) - sigma * m.off(i);
      const lapack_int info = LAPACKE_dgttrf(n_, dl_.data(), d_.data(), du_.data(), du2_.data(),
                                             ipiv_.data());
      ok_ = info == 0;
    } else {
      tridiag_ = false;
      Eigen::SparseMatrix<double> a = op.stiffness() - sigma * op.mass();
      ldlt_.compute(a);
      ok_ = ldlt_.info() == Eigen::Success;
    }
  }

  bool ok() const { return ok_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    if (tridiag_) {
      Eigen::VectorXd x = rhs;
      LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'N', n_, 1, dl_.data(), d_.data(), du_.data(), du2_.data(),
                     ipiv_.data(), x.data(), n_);
      return x;
    }
    return ldlt_.solve(rhs);
  }

 private:
  int n_;
  bool tridiag_ = false;
  bool ok_ = false;
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<lapack_int> ipiv_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

Eigen::VectorXd inverse_iterate(const DiscretizedOperator& op, double lambda,
                                const std::vector<Eigen::VectorXd>& cluster_mates) {
  const double scale = std::max(1.0, std::fabs(lambda));
  for (int widen = 1; widen <= 4; ++widen) {
    const double sigma = lambda + widen * 1e-11 * scale;
    ShiftedSolver solver(op, sigma);
    if (!solver.ok()) continue;
    RandomStream rs(0x5eed, static_cast<std::uint32_t>(cluster_mates.size()), 0, 7);
    Eigen::VectorXd x(op.dofs());
    for (int i = 0; i < op.dofs(); ++i) x(i) = rs.uniform01() - 0.5;
    for (int it = 0; it < 6; ++it) {
      Eigen::VectorXd y = solver.solve(op.mass() * x);
      for (const Eigen::VectorXd& z : cluster_mates) y -= (z.dot(op.mass() * y)) * z;
      const double norm = std::sqrt(y.dot(op.mass() * y));
      if (!(norm > 0.0) || !std::isfinite(norm)) break;
      x = y / norm;
    }
    const double norm = std::sqrt(x.dot(op.mass() * x));
    if (std::isfinite(norm) && norm > 0.0) return x / norm;
  }
  throw AccuracyError("inverse iteration failed near lambda = " + std::to_string(lambda));
}

SpectrumResult slice_spectrum(const DiscretizedOperator& op, int want_count, double ceiling,
                              bool want_vectors, double truncation) {
  SpectrumResult out;
  out.truncation = truncation;
  InertiaCounter counter(op);

  double lo = std::min(0.0, ceiling) - 1.0;
  for (double span = 1.0; counter.count(lo) > 0; span *= 2.0) lo -= span;

  out.eigenvalues.reserve(want_count);
  double left = lo;
  for (int k = 0; k < want_count; ++k) {
    double a = left, b = ceiling;
    while (b - a > 1e-13 * std::max(1.0, std::fabs(b)) + 1e-300) {
      const double mid = a + 0.5 * (b - a);
      if (mid <= a || mid >= b) break;
      if (counter.count(mid) >= k + 1)
        b = mid;
      else
        a = mid;
    }
    out.eigenvalues.push_back(b);
    left = a;
  }

  if (want_vectors) {
    out.eigenvectors.resize(op.dofs(), want_count);
    std::vector<Eigen::VectorXd> cluster;
    for (int k = 0; k < want_count; ++k) {
      const double scale = std::max(1.0, std::fabs(out.eigenvalues[k]));
      if (k > 0 && std::fabs(out.eigenvalues[k] - out.eigenvalues[k - 1]) > 1e-9 * scale)
        cluster.clear();
      Eigen::VectorXd x = inverse_iterate(op, out.eigenvalues[k], cluster);
      cluster.push_back(x);
      out.eigenvectors.col(k) = x;
    }
  }
  return out;
}

SpectrumResult dense_spectrum(const DiscretizedOperator& op, double cut, int max_count,
                              bool want_vectors, double truncation) {
  SpectrumResult out;
  out.truncation = truncation;
  Eigen::MatrixXd k = Eigen::MatrixXd(op.stiffness());
  Eigen::MatrixXd m = Eigen::MatrixXd(op.mass());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      k, m, (want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly) | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw AccuracyError("dense eigensolve failed");
  const auto& evs = es.eigenvalues();
  int count = 0;
  while (count < evs.size() && count < max_count && evs(count) <= cut) ++count;
  out.eigenvalues.assign(evs.data(), evs.data() + count);
  if (want_vectors) out.eigenvectors = es.eigenvectors().leftCols(count);
  return out;
}

}  // namespace

int count_below(const DiscretizedOperator& op, double lambda) {
  require_trusted(op, lambda);
  InertiaCounter counter(op);
  return counter.count(up_nudge(lambda));
}

int count_strictly_below(const DiscretizedOperator& op, double lambda) {
  require_trusted(op, lambda);
  InertiaCounter counter(op);
  return counter.count(down_nudge(lambda));
}

SpectrumResult eigenvalues_below(const DiscretizedOperator& op, double upto_energy,
                                 bool want_vectors) {
  require_trusted(op, upto_energy);
  if (op.dofs() == 0) return {{}, {}, upto_energy};
  const double cut = up_nudge(upto_energy);
  if (op.dofs() <= kDenseSolveThreshold)
    return dense_spectrum(op, cut, op.dofs(), want_vectors, upto_energy);
  InertiaCounter counter(op);
  const int m = counter.count(cut);
  return slice_spectrum(op, m, cut, want_vectors, upto_energy);
}

SpectrumResult lowest_eigenvalues(const DiscretizedOperator& op, int count, bool want_vectors) {
  const double inf = std::numeric_limits<double>::infinity();
  if (op.dofs() == 0 || count <= 0) return {{}, {}, inf};
  const int want = std::min(count, op.dofs());
  if (op.dofs() <= kDenseSolveThreshold)
    return dense_spectrum(op, inf, want, want_vectors, inf);
  InertiaCounter counter(op);
  double lo = -1.0;
  for (double span = 1.0; counter.count(lo) > 0; span *= 2.0) lo = -span;
  double hi = lo + 1.0;
  while (counter.count(hi) < want) {
    hi = lo + 2.0 * (hi - lo);
    if (hi > op.lambda_max()) {
      if (counter.count(op.lambda_max()) >= want) {
        hi = op.lambda_max();
        break;
      }
      throw AccuracyError("requested eigenvalues above the mesh trust ceiling");
    }
  }
  return slice_spectrum(op, want, hi, want_vectors, inf);
}

double DiscretizedOperator::bilinear_form_on_edge(const Eigen::VectorXd& phi,
                                                  const Eigen::VectorXd& psi, EdgeId e,
                                                  const PiecewiseConstant& weight) const {
  const EdgeChain& c = chain(e);
  const double hc = c.cell_width;
  double sum = 0.0;
  for (int i = 0; i < c.cells; ++i) {
    const int d0 = c.node_dofs[i];
    const int d1 = c.node_dofs[i + 1];
    const double a0 = d0 < 0 ? 0.0 : phi(d0);
    const double a1 = d1 < 0 ? 0.0 : phi(d1);
    const double v0 = d0 < 0 ? 0.0 : psi(d0);
    const double v1 = d1 < 0 ? 0.0 : psi(d1);
    if ((a0 == 0.0 && a1 == 0.0) || (v0 == 0.0 && v1 == 0.0)) continue;
    const double x0 = i * hc;
    const double x1 = x0 + hc;
    for (std::size_t j = 0; j < weight.values.size(); ++j) {
      const double q0 = std::max(x0, weight.breakpoints[j]);
      const double q1 = std::min(x1, weight.breakpoints[j + 1]);
      if (!(q1 > q0) || weight.values[j] == 0.0) continue;
      const double t1 = std::clamp((q0 - x0) / hc, 0.0, 1.0);
      const double t2 = std::clamp((q1 - x0) / hc, 0.0, 1.0);
      const double ill = (cube(1.0 - t1) - cube(1.0 - t2)) / 3.0;
      const double irr = (cube(t2) - cube(t1)) / 3.0;
      const double ilr = (t2 * t2 - t1 * t1) / 2.0 - (cube(t2) - cube(t1)) / 3.0;
      sum += weight.values[j] * hc *
             (a0 * v0 * ill + (a0 * v1 + a1 * v0) * ilr + a1 * v1 * irr);
    }
  }
  return sum;
}

double DiscretizedOperator::quadratic_form_on_edge(const Eigen::VectorXd& psi, EdgeId e,
                                                   const PiecewiseConstant& weight) const {
  return bilinear_form_on_edge(psi, psi, e, weight);
}

double DiscretizedOperator::mass_on_edge(const Eigen::VectorXd& psi, EdgeId e, double a,
                                         double b) const {
  const EdgeChain& c = chain(e);
  const double hc = c.cell_width;
  a = std::max(a, 0.0);
  b = std::min(b, c.length);
  if (!(b > a)) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < c.cells; ++i) {
    const double x0 = i * hc;
    const double x1 = x0 + hc;
    const double q0 = std::max(x0, a);
    const double q1 = std::min(x1, b);
    if (!(q1 > q0)) continue;
    const int d0 = c.node_dofs[i];
    const int d1 = c.node_dofs[i + 1];
    const double v0 = d0 < 0 ? 0.0 : psi(d0);
    const double v1 = d1 < 0 ? 0.0 : psi(d1);
    const double t1 = std::clamp((q0 - x0) / hc, 0.0, 1.0);
    const double t2 = std::clamp((q1 - x0) / hc, 0.0, 1.0);
    const double ill = (cube(1.0 - t1) - cube(1.0 - t2)) / 3.0;
    const double irr = (cube(t2) - cube(t1)) / 3.0;
    const double ilr = (t2 * t2 - t1 * t1) / 2.0 - (cube(t2) - cube(t1)) / 3.0;
    sum += hc * (v0 * v0 * ill + 2.0 * v0 * v1 * ilr + v1 * v1 * irr);
  }
  return sum;
}

void dump_pencil(const DiscretizedOperator& op, const std::string& k_path,
                 const std::string& m_path) {
  auto write = [&](const Eigen::SparseMatrix<double>& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path + " for writing");
    long long nnz = 0;
    for (int k = 0; k < a.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
        if (it.row() >= it.col()) ++nnz;
    out << a.rows() << " " << nnz << "\n";
    char buf[64];
    for (int k = 0; k < a.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
        if (it.row() < it.col()) continue;
        std::snprintf(buf, sizeof buf, "%.17g", it.value());
        out << it.row() << " " << it.col() << " " << buf << "\n";
      }
  };
  write(op.stiffness(), k_path);
  write(op.mass(), m_path);
}

}  // namespace qgalloy
