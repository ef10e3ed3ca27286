#include "qgalloy/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qgalloy/errors.hpp"

namespace qgalloy {

MetricGraph::MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges,
                         std::map<VertexId, std::vector<int>> embedding)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), embedding_(std::move(embedding)) {
  std::set<VertexId> seen;
  for (VertexId v : vertices_) {
    if (!seen.insert(v).second) throw InputError("duplicate vertex id " + std::to_string(v));
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!seen.count(e.from) || !seen.count(e.to))
      throw InputError("edge " + std::to_string(e.id) + " references an unknown vertex");
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw InputError("edge " + std::to_string(e.id) + " must have positive length");
    if (!edge_index_.emplace(e.id, i).second)
      throw InputError("duplicate edge id " + std::to_string(e.id));
    incidences_[e.from].push_back({e.id, 0});
    incidences_[e.to].push_back({e.id, 1});
  }
  for (VertexId v : vertices_) {
    auto it = incidences_.find(v);
    if (it == incidences_.end() || it->second.empty())
      throw InputError("isolated vertex " + std::to_string(v));
    std::sort(it->second.begin(), it->second.end());
  }
  for (const auto& [v, coords] : embedding_) {
    if (!seen.count(v)) throw InputError("embedding references unknown vertex");
  }
}

bool MetricGraph::has_vertex(VertexId v) const { return incidences_.count(v) > 0; }

bool MetricGraph::has_edge(EdgeId e) const { return edge_index_.count(e) > 0; }

const Edge& MetricGraph::edge(EdgeId e) const {
  auto it = edge_index_.find(e);
  if (it == edge_index_.end()) throw InputError("unknown edge " + std::to_string(e));
  return edges_[it->second];
}

int MetricGraph::degree(VertexId v) const {
  auto it = incidences_.find(v);
  if (it == incidences_.end()) throw InputError("unknown vertex " + std::to_string(v));
  return static_cast<int>(it->second.size());
}

const std::vector<std::pair<EdgeId, int>>& MetricGraph::incidences(VertexId v) const {
  auto it = incidences_.find(v);
  if (it == incidences_.end()) throw InputError("unknown vertex " + std::to_string(v));
  return it->second;
}

double MetricGraph::total_length() const {
  double sum = 0.0;
  for (const Edge& e : edges_) sum += e.length;
  return sum;
}

std::vector<VertexId> InducedSubgraph::subgraph_vertices() const {
  std::vector<VertexId> out(interior.begin(), interior.end());
  out.insert(out.end(), boundary.begin(), boundary.end());
  std::sort(out.begin(), out.end());
  return out;
}

int InducedSubgraph::subgraph_degree(VertexId v) const {
  int deg = 0;
  for (const auto& [e, end] : parent->incidences(v))
    if (edges.count(e)) ++deg;
  return deg;
}

double InducedSubgraph::volume() const {
  double sum = 0.0;
  for (EdgeId e : edges) sum += parent->edge(e).length;
  return sum;
}

InducedSubgraph induced_subgraph(const MetricGraph& graph, const std::set<EdgeId>& lambda) {
  for (EdgeId e : lambda)
    if (!graph.has_edge(e)) throw InputError("subgraph references unknown edge " + std::to_string(e));
  InducedSubgraph sub;
  sub.parent = &graph;
  sub.edges = lambda;
  for (VertexId v : graph.vertices()) {
    const int deg_lambda = sub.subgraph_degree(v);
    if (deg_lambda == 0)
      sub.exterior.insert(v);
    else if (deg_lambda == graph.degree(v))
      sub.interior.insert(v);
    else
      sub.boundary.insert(v);
  }
  return sub;
}

LatticeWindow build_lattice_graph(int nu, int l, long long size_cap) {
  if (nu < 1) throw InputError("lattice dimension must be at least 1");
  if (l < 2) throw InputError("lattice window size must be at least 2");
  double work = nu;
  for (int k = 0; k < nu; ++k) work *= l;
  if (work > static_cast<double>(size_cap))
    throw ResourceError("lattice of dimension " + std::to_string(nu) + " and size " +
                        std::to_string(l) + " exceeds the cap " + std::to_string(size_cap));

  // grid coordinates -1 .. l+1 per axis, lexicographic vertex ids
  const int side = l + 3;
  long long nvert = 1;
  for (int k = 0; k < nu; ++k) nvert *= side;
  if (nvert > size_cap * 4LL)
    throw ResourceError("ambient lattice grid exceeds the cap");

  auto coord_of = [&](long long id) {
    std::vector<int> c(nu);
    for (int k = nu - 1; k >= 0; --k) {
      c[k] = static_cast<int>(id % side) - 1;
      id /= side;
    }
    return c;
  };
  auto id_of = [&](const std::vector<int>& c) {
    long long id = 0;
    for (int k = 0; k < nu; ++k) id = id * side + (c[k] + 1);
    return id;
  };

  std::vector<VertexId> vertices;
  std::map<VertexId, std::vector<int>> embedding;
  vertices.reserve(nvert);
  for (long long id = 0; id < nvert; ++id) {
    vertices.push_back(static_cast<VertexId>(id));
    embedding[static_cast<VertexId>(id)] = coord_of(id);
  }

  std::vector<Edge> edges;
  std::set<EdgeId> window;
  EdgeId next = 0;
  for (long long id = 0; id < nvert; ++id) {
    const std::vector<int> c = coord_of(id);
    for (int k = 0; k < nu; ++k) {
      if (c[k] + 1 > l + 1) continue;
      std::vector<int> d = c;
      d[k] += 1;
      const EdgeId eid = next++;
      edges.push_back({eid, static_cast<VertexId>(id), static_cast<VertexId>(id_of(d)), 1.0});
      // open interior in (0,l)^nu: along axis k the edge spans (c_k, c_k+1)
      bool inside = c[k] >= 0 && c[k] + 1 <= l;
      for (int j = 0; j < nu && inside; ++j)
        if (j != k) inside = c[j] > 0 && c[j] < l;
      if (inside) window.insert(eid);
    }
  }
  return LatticeWindow{MetricGraph(std::move(vertices), std::move(edges), std::move(embedding)),
                       std::move(window)};
}

MetricGraph make_interval(double length) {
  if (!(length > 0.0)) throw InputError("interval length must be positive");
  return MetricGraph({0, 1}, {{0, 0, 1, length}});
}

MetricGraph make_loop(double length) {
  if (!(length > 0.0)) throw InputError("loop length must be positive");
  return MetricGraph({0}, {{0, 0, 0, length}});
}

MetricGraph make_star(int arms, double arm_length) {
  if (arms < 1) throw InputError("a star needs at least one arm");
  if (!(arm_length > 0.0)) throw InputError("arm length must be positive");
  std::vector<VertexId> vertices{0};
  std::vector<Edge> edges;
  for (int k = 0; k < arms; ++k) {
    vertices.push_back(k + 1);
    edges.push_back({k, 0, k + 1, arm_length});
  }
  return MetricGraph(std::move(vertices), std::move(edges));
}

std::string fibonacci_word(int generations) {
  if (generations < 1) throw InputError("generation count must be at least 1");
  std::string w = "a";
  for (int g = 1; g < generations; ++g) {
    std::string next;
    next.reserve(w.size() * 2);
    for (char c : w) next += (c == 'a') ? "ab" : "a";
    w = next;
  }
  return w;
}

MetricGraph make_fibonacci_chain(int generations, double a_length, double b_length) {
  if (!(a_length > 0.0) || !(b_length > 0.0)) throw InputError("letter lengths must be positive");
  const std::string word = fibonacci_word(generations);
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i <= word.size(); ++i) vertices.push_back(static_cast<VertexId>(i));
  for (std::size_t i = 0; i < word.size(); ++i)
    edges.push_back({static_cast<EdgeId>(i), static_cast<VertexId>(i),
                     static_cast<VertexId>(i + 1), word[i] == 'a' ? a_length : b_length});
  return MetricGraph(std::move(vertices), std::move(edges));
}

void save_graph(const MetricGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  char buf[64];
  for (VertexId v : g.vertices()) out << "vertex " << v << "\n";
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.length);
    out << "edge " << e.id << " " << e.from << " " << e.to << " " << buf << "\n";
  }
  for (const auto& [v, coords] : g.embedding()) {
    out << "embed " << v;
    for (int c : coords) out << " " << c;
    out << "\n";
  }
}

MetricGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;
  std::map<VertexId, std::vector<int>> embedding;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "vertex") {
      VertexId v;
      if (!(ss >> v)) throw InputError(path + ": line " + std::to_string(lineno) + ": bad vertex");
      vertices.push_back(v);
    } else if (tag == "edge") {
      Edge e;
      if (!(ss >> e.id >> e.from >> e.to >> e.length))
        throw InputError(path + ": line " + std::to_string(lineno) + ": bad edge");
      edges.push_back(e);
    } else if (tag == "embed") {
      VertexId v;
      if (!(ss >> v)) throw InputError(path + ": line " + std::to_string(lineno) + ": bad embed");
      std::vector<int> coords;
      int c;
      while (ss >> c) coords.push_back(c);
      embedding[v] = coords;
    } else {
      throw InputError(path + ": line " + std::to_string(lineno) + ": unknown directive " + tag);
    }
  }
  return MetricGraph(std::move(vertices), std::move(edges), std::move(embedding));
}

}  // namespace qgalloy
