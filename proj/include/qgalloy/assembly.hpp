#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>
#include <string>
#include <vector>

#include "qgalloy/conditions.hpp"
#include "qgalloy/potential.hpp"

namespace qgalloy {

// Signed piecewise-constant potential on a graph; edges without an entry
// carry zero potential.
struct PotentialField {
  std::map<EdgeId, PiecewiseConstant> per_edge;

  static PotentialField from_model(const AlloyModel& model, const Configuration& config);
  double sup_abs() const;
  const PiecewiseConstant* find(EdgeId e) const;
};

// Where a degree of freedom lives.  shared_vertex dofs realize continuity
// at kirchhoff/delta vertices; edge_point dofs are mesh nodes, including
// decoupled edge ends at neumann_decoupled vertices.
struct DofSite {
  enum class Type { shared_vertex, edge_point } type = Type::edge_point;
  VertexId vertex = -1;
  EdgeId edge = -1;
  double coordinate = 0.0;
};

// Mesh nodes of one edge in coordinate order; node_dofs[i] is the dof of
// node i*cell_width, -1 where the dof is absent (Dirichlet end).
struct EdgeChain {
  EdgeId edge = -1;
  double length = 0.0;
  int cells = 0;
  double cell_width = 0.0;
  std::vector<int> node_dofs;
};

// P1 finite-element pencil K psi = lambda M psi for the form
// integral |psi'|^2 + integral V |psi|^2 + sum_v alpha_v |psi(v)|^2.
// K = K^T, M = M^T positive definite; eigenvalues are trusted up to
// lambda_max = 0.04 / h^2 with h the widest cell.
class DiscretizedOperator {
 public:
  const Eigen::SparseMatrix<double>& stiffness() const { return K_; }
  const Eigen::SparseMatrix<double>& mass() const { return M_; }
  int dofs() const { return static_cast<int>(sites_.size()); }
  double mesh_width() const { return h_max_; }
  double lambda_max() const { return 0.04 / (h_max_ * h_max_); }
  int bandwidth() const { return bandwidth_; }

  const std::vector<DofSite>& dof_sites() const { return sites_; }
  const std::vector<EdgeChain>& edge_chains() const { return chains_; }
  const EdgeChain& chain(EdgeId e) const;

  // integral of phi*psi against the weight over edge e, exact for the P1
  // interpolants and piecewise-constant weight
  double bilinear_form_on_edge(const Eigen::VectorXd& phi, const Eigen::VectorXd& psi, EdgeId e,
                               const PiecewiseConstant& weight) const;
  double quadratic_form_on_edge(const Eigen::VectorXd& psi, EdgeId e,
                                const PiecewiseConstant& weight) const;
  double mass_on_edge(const Eigen::VectorXd& psi, EdgeId e, double a, double b) const;

  friend DiscretizedOperator assemble_field(const InducedSubgraph& sub,
                                            const ConditionFamily& family,
                                            const PotentialField& field, double h,
                                            long long dof_cap);

 private:
  Eigen::SparseMatrix<double> K_;
  Eigen::SparseMatrix<double> M_;
  std::vector<DofSite> sites_;
  std::vector<EdgeChain> chains_;
  std::map<EdgeId, std::size_t> chain_index_;
  double h_max_ = 0.0;
  int bandwidth_ = 0;
};

// Family must cover the subgraph vertices with subgraph degrees and kinds
// within {dirichlet, neumann_decoupled, kirchhoff, delta}; `general`
// conditions are not assemblable.
DiscretizedOperator assemble_field(const InducedSubgraph& sub, const ConditionFamily& family,
                                   const PotentialField& field, double h,
                                   long long dof_cap = 4000000);

DiscretizedOperator assemble(const InducedSubgraph& sub, const ConditionFamily& family,
                             const AlloyModel& model, const Configuration& config, double h);

struct SpectrumResult {
  std::vector<double> eigenvalues;   // ascending, with multiplicity
  Eigen::MatrixXd eigenvectors;      // column n, empty unless requested
  double truncation = 0.0;           // energy or +inf when count-limited
};

// All pencil eigenvalues <= upto_energy; dense solve below an internal dof
// threshold, bisection slicing with inverse iteration above it.
SpectrumResult eigenvalues_below(const DiscretizedOperator& op, double upto_energy,
                                 bool want_vectors = false);
SpectrumResult lowest_eigenvalues(const DiscretizedOperator& op, int count,
                                  bool want_vectors = false);

// |{n : lambda_n <= lambda}| from the inertia of K - lambda M; ties broken
// toward inclusion by a relative 1e-12 upward nudge.
int count_below(const DiscretizedOperator& op, double lambda);
// |{n : lambda_n < lambda}| (downward nudge); realizes the a^- endpoint.
int count_strictly_below(const DiscretizedOperator& op, double lambda);

// Coordinate text dump `row col value` of the stored lower triangles.
void dump_pencil(const DiscretizedOperator& op, const std::string& k_path,
                 const std::string& m_path);

}  // namespace qgalloy
