#include "qgalloy/conditions.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qgalloy/errors.hpp"

namespace qgalloy {

std::string condition_kind_name(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::dirichlet: return "dirichlet";
    case ConditionKind::neumann_decoupled: return "neumann_decoupled";
    case ConditionKind::kirchhoff: return "kirchhoff";
    case ConditionKind::delta: return "delta";
    case ConditionKind::general: return "general";
  }
  throw InputError("unknown condition kind");
}

ConditionKind condition_kind_from_name(const std::string& name) {
  if (name == "dirichlet") return ConditionKind::dirichlet;
  if (name == "neumann_decoupled") return ConditionKind::neumann_decoupled;
  if (name == "kirchhoff") return ConditionKind::kirchhoff;
  if (name == "delta") return ConditionKind::delta;
  if (name == "general") return ConditionKind::general;
  throw InputError("unknown condition kind '" + name + "'");
}

bool is_lagrangian(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  const auto d = A.rows();
  if (d < 1 || A.cols() != d || B.rows() != d || B.cols() != d)
    throw InputError("condition matrices must be square of equal size");
  Eigen::MatrixXcd AB(d, 2 * d);
  AB << A, B;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(AB);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  if (rank != d) return false;
  Eigen::MatrixXcd C = A * B.adjoint();
  const double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
  return (C - C.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * scale;
}

VertexCondition standard_condition(ConditionKind kind, VertexId v, int degree, double alpha) {
  if (degree < 1) throw InputError("vertex degree must be at least 1");
  const int d = degree;
  VertexCondition c;
  c.vertex = v;
  c.degree = d;
  c.kind = kind;
  c.alpha = (kind == ConditionKind::delta) ? alpha : 0.0;
  c.A = Eigen::MatrixXcd::Zero(d, d);
  c.B = Eigen::MatrixXcd::Zero(d, d);
  switch (kind) {
    case ConditionKind::dirichlet:
      c.A = Eigen::MatrixXcd::Identity(d, d);
      break;
    case ConditionKind::neumann_decoupled:
      c.B = Eigen::MatrixXcd::Identity(d, d);
      break;
    case ConditionKind::kirchhoff:
    case ConditionKind::delta:
      for (int i = 0; i + 1 < d; ++i) {
        c.A(i, i) = 1.0;
        c.A(i, i + 1) = -1.0;
      }
      for (int j = 0; j < d; ++j) c.B(d - 1, j) = 1.0;
      if (kind == ConditionKind::delta) c.A(d - 1, 0) = -alpha;
      break;
    case ConditionKind::general:
      throw InputError("general conditions are built from explicit matrices");
  }
  return c;
}

namespace {

// Orthonormal basis of ker[A B], a d-dimensional subspace of C^{2d} for a
// Lagrangian pair.
Eigen::MatrixXcd kernel_basis(const VertexCondition& c) {
  const auto d = c.A.rows();
  Eigen::MatrixXcd AB(d, 2 * d);
  AB << c.A, c.B;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(AB, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * std::max(sv(0), 1e-300);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(2 * d - rank);
}

}  // namespace

bool same_condition(const VertexCondition& a, const VertexCondition& b) {
  if (a.A.rows() != b.A.rows()) return false;
  const Eigen::MatrixXcd ka = kernel_basis(a);
  const Eigen::MatrixXcd kb = kernel_basis(b);
  if (ka.cols() != kb.cols()) return false;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ka.adjoint() * kb);
  const auto& sv = svd.singularValues();
  return sv.size() > 0 && sv(sv.size() - 1) > 1.0 - 1e-8;
}

void validate_family(const ConditionFamily& family, const MetricGraph& g) {
  for (const auto& [v, c] : family.conditions) {
    if (!g.has_vertex(v)) throw InputError("condition on unknown vertex " + std::to_string(v));
    if (c.vertex != v) throw InputError("condition keyed under the wrong vertex");
    if (c.degree != g.degree(v))
      throw InputError("condition degree mismatch at vertex " + std::to_string(v));
    if (!is_lagrangian(c.A, c.B))
      throw InputError("condition at vertex " + std::to_string(v) + " is not self-adjoint");
  }
  for (VertexId v : g.vertices())
    if (!family.conditions.count(v))
      throw InputError("no condition at vertex " + std::to_string(v));
}

ConditionFamily uniform_family(const MetricGraph& g, ConditionKind kind, double alpha) {
  ConditionFamily family;
  for (VertexId v : g.vertices())
    family.conditions.emplace(v, standard_condition(kind, v, g.degree(v), alpha));
  return family;
}

ConditionFamily dirichlet_restriction(const ConditionFamily& family, const InducedSubgraph& sub) {
  ConditionFamily out;
  for (VertexId v : sub.interior) {
    auto it = family.conditions.find(v);
    if (it == family.conditions.end())
      throw InputError("no condition at interior vertex " + std::to_string(v));
    if (it->second.degree != sub.parent->degree(v))
      throw InputError("condition degree mismatch at interior vertex " + std::to_string(v));
    out.conditions.emplace(v, it->second);
  }
  for (VertexId v : sub.boundary) {
    if (!family.conditions.count(v))
      throw InputError("no condition at boundary vertex " + std::to_string(v));
    out.conditions.emplace(v,
                           standard_condition(ConditionKind::dirichlet, v, sub.subgraph_degree(v)));
  }
  return out;
}

void save_family(const ConditionFamily& family, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  char buf[64];
  for (const auto& [v, c] : family.conditions) {
    out << "cond " << v << " " << condition_kind_name(c.kind) << " " << c.degree;
    if (c.kind == ConditionKind::delta) {
      std::snprintf(buf, sizeof buf, "%.17g", c.alpha);
      out << " " << buf;
    } else if (c.kind == ConditionKind::general) {
      for (const Eigen::MatrixXcd* m : {&c.A, &c.B})
        for (Eigen::Index i = 0; i < m->rows(); ++i)
          for (Eigen::Index j = 0; j < m->cols(); ++j) {
            std::snprintf(buf, sizeof buf, " %.17g", (*m)(i, j).real());
            out << buf;
            std::snprintf(buf, sizeof buf, " %.17g", (*m)(i, j).imag());
            out << buf;
          }
    }
    out << "\n";
  }
}

ConditionFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  ConditionFamily family;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag, kind_name;
    VertexId v;
    int degree;
    if (!(ss >> tag >> v >> kind_name >> degree) || tag != "cond")
      throw InputError(path + ": line " + std::to_string(lineno) + ": bad condition");
    const ConditionKind kind = condition_kind_from_name(kind_name);
    if (kind == ConditionKind::general) {
      VertexCondition c;
      c.vertex = v;
      c.degree = degree;
      c.kind = kind;
      c.A.resize(degree, degree);
      c.B.resize(degree, degree);
      for (Eigen::MatrixXcd* m : {&c.A, &c.B})
        for (int i = 0; i < degree; ++i)
          for (int j = 0; j < degree; ++j) {
            double re, im;
            if (!(ss >> re >> im))
              throw InputError(path + ": line " + std::to_string(lineno) + ": bad matrix entry");
            (*m)(i, j) = std::complex<double>(re, im);
          }
      family.conditions.emplace(v, c);
    } else {
      double alpha = 0.0;
      if (kind == ConditionKind::delta && !(ss >> alpha))
        throw InputError(path + ": line " + std::to_string(lineno) + ": missing delta strength");
      family.conditions.emplace(v, standard_condition(kind, v, degree, alpha));
    }
  }
  return family;
}

}  // namespace qgalloy
