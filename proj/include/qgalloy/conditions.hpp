#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>

#include "qgalloy/graph.hpp"

namespace qgalloy {

enum class ConditionKind { dirichlet, neumann_decoupled, kirchhoff, delta, general };

std::string condition_kind_name(ConditionKind kind);
ConditionKind condition_kind_from_name(const std::string& name);

// Self-adjoint vertex condition S_v = {(f, f') in C^{2d} : A f + B f' = 0}.
// Boundary-value slots are ordered by ascending incident edge id, loop `from`
// end before `to` end; f' is the outgoing derivative (sign -f' at the far
// end of an edge).
struct VertexCondition {
  VertexId vertex = 0;
  int degree = 0;
  ConditionKind kind = ConditionKind::general;
  double alpha = 0.0;  // delta coupling strength
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
};

// rank[A B] = d and A B* Hermitian, with singular-value tolerance
// 1e-10 * (largest singular value).
bool is_lagrangian(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

VertexCondition standard_condition(ConditionKind kind, VertexId v, int degree,
                                   double alpha = 0.0);

// Same Lagrangian subspace, invariant under row equivalence of (A,B);
// compares kernels of [A B] through principal angles.
bool same_condition(const VertexCondition& a, const VertexCondition& b);

struct ConditionFamily {
  std::map<VertexId, VertexCondition> conditions;
};

// Coverage + degree check against the full vertex set of g.
void validate_family(const ConditionFamily& family, const MetricGraph& g);

ConditionFamily uniform_family(const MetricGraph& g, ConditionKind kind, double alpha = 0.0);

// Interior vertices keep their condition, boundary vertices become
// Dirichlet of subgraph degree, exterior vertices are dropped.  The input
// family must cover interior and boundary vertices with matching parent
// degrees at interior ones; a second application with the same Λ is the
// identity.
ConditionFamily dirichlet_restriction(const ConditionFamily& family, const InducedSubgraph& sub);

// Line format: `cond <vertex> <kind> <degree> [alpha]`; general conditions
// carry A, B row-major (re im pairs) on the same line.
void save_family(const ConditionFamily& family, const std::string& path);
ConditionFamily load_family(const std::string& path);

}  // namespace qgalloy
