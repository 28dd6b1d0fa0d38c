#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace sepkit {

// One edge of a Graph. Endpoints are vertex indices with u < v. Virtual edges
// are torso-added; witnesses then lists the ids of the nested-set members that
// produced them.
struct Edge {
  std::string id;
  std::size_t u = 0;
  std::size_t v = 0;
  bool is_virtual = false;
  std::vector<std::string> witnesses;
};

// Finite simple undirected graph with stable string identifiers. Vertices are
// indexed by the lexicographic rank of their id; edges by the lexicographic
// rank of their id. Both stay stable under induced subgraphs and torsos, which
// keep the original ids.
class Graph {
 public:
  Graph() = default;

  // Ingest form: edge ids are assigned as "u|v" with u < v lexicographically.
  static Graph from_edge_list(std::vector<std::string> vertices,
                              const std::vector<std::pair<std::string, std::string>>& edges) {
    std::vector<Edge> es;
    Graph g = prepare(std::move(vertices));
    es.reserve(edges.size());
    for (const auto& [a, b] : edges) {
      std::size_t ia = g.vertex_index(a), ib = g.vertex_index(b);
      check_input(ia != ib, "loop edge at vertex " + a);
      Edge e;
      e.u = std::min(ia, ib);
      e.v = std::max(ia, ib);
      e.id = g.vertex_id(e.u) + "|" + g.vertex_id(e.v);
      es.push_back(std::move(e));
    }
    g.adopt_edges(std::move(es));
    return g;
  }

  // Construction form used by torsos and subgraphs: edges carry explicit ids.
  static Graph from_edges(std::vector<std::string> vertices, std::vector<Edge> edges,
                          const Graph& id_source) {
    Graph g = prepare(std::move(vertices));
    for (Edge& e : edges) {
      // re-express endpoint indices of id_source in the new vertex numbering
      std::size_t u = g.vertex_index(id_source.vertex_id(e.u));
      std::size_t v = g.vertex_index(id_source.vertex_id(e.v));
      e.u = std::min(u, v);
      e.v = std::max(u, v);
    }
    g.adopt_edges(std::move(edges));
    return g;
  }

  std::size_t n() const { return vertex_ids_.size(); }
  std::size_t m() const { return edges_.size(); }

  const std::string& vertex_id(std::size_t i) const { return vertex_ids_.at(i); }
  std::size_t vertex_index(const std::string& id) const {
    auto it = std::lower_bound(vertex_ids_.begin(), vertex_ids_.end(), id);
    check_input(it != vertex_ids_.end() && *it == id, "unknown vertex id: " + id);
    return static_cast<std::size_t>(it - vertex_ids_.begin());
  }
  bool has_vertex(const std::string& id) const {
    return std::binary_search(vertex_ids_.begin(), vertex_ids_.end(), id);
  }

  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<std::size_t> edge_index(const std::string& id) const {
    auto it = edge_by_id_.find(id);
    if (it == edge_by_id_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> edge_between(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    auto it = edge_by_pair_.find({u, v});
    if (it == edge_by_pair_.end()) return std::nullopt;
    return it->second;
  }
  bool adjacent(std::size_t u, std::size_t v) const { return edge_between(u, v).has_value(); }

  // edge indices incident with vertex v, ascending
  const std::vector<std::size_t>& incident(std::size_t v) const { return incident_.at(v); }
  const EdgeSet& incident_set(std::size_t v) const { return incident_mask_.at(v); }

  VertexSet all_vertices() const { return VertexSet::full(n()); }
  EdgeSet all_edges() const { return EdgeSet::full(m()); }
  VertexSet no_vertices() const { return VertexSet(n()); }
  EdgeSet no_edges() const { return EdgeSet(m()); }

  std::size_t other_end(std::size_t e, std::size_t v) const {
    const Edge& ed = edges_.at(e);
    return ed.u == v ? ed.v : ed.u;
  }

  // Components of G - removed, as vertex sets, ordered by smallest vertex.
  std::vector<VertexSet> components(const VertexSet& removed) const {
    std::vector<VertexSet> out;
    std::vector<char> seen(n(), 0);
    for (std::size_t s = 0; s < n(); ++s) {
      if (seen[s] || removed.test(s)) continue;
      VertexSet comp(n());
      std::vector<std::size_t> stack{s};
      seen[s] = 1;
      while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        comp.set(v);
        for (std::size_t e : incident_.at(v)) {
          std::size_t w = other_end(e, v);
          if (!seen[w] && !removed.test(w)) {
            seen[w] = 1;
            stack.push_back(w);
          }
        }
      }
      out.push_back(std::move(comp));
    }
    return out;
  }

  std::vector<VertexSet> components() const { return components(VertexSet(n())); }

  // Component of G - removed containing v; v must not be removed.
  VertexSet component_of(std::size_t v, const VertexSet& removed) const {
    check_input(!removed.test(v), "component_of: vertex is removed");
    VertexSet comp(n());
    std::vector<char> seen(n(), 0);
    std::vector<std::size_t> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      comp.set(x);
      for (std::size_t e : incident_.at(x)) {
        std::size_t w = other_end(e, x);
        if (!seen[w] && !removed.test(w)) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return comp;
  }

  bool connected() const { return n() == 0 || components().size() == 1; }

  // N(C): vertices outside C adjacent to a vertex of C.
  VertexSet neighbourhood(const VertexSet& C) const {
    VertexSet out(n());
    for (std::size_t v = C.find_first(); v != Bits::npos; v = C.find_next(v))
      for (std::size_t e : incident_.at(v)) {
        std::size_t w = other_end(e, v);
        if (!C.test(w)) out.set(w);
      }
    return out;
  }

  // Induced subgraph on B; vertex and edge ids are preserved.
  Graph induced(const VertexSet& B) const {
    std::vector<std::string> vs;
    for (std::size_t v = B.find_first(); v != Bits::npos; v = B.find_next(v))
      vs.push_back(vertex_id(v));
    std::vector<Edge> es;
    for (const Edge& e : edges_)
      if (B.test(e.u) && B.test(e.v)) es.push_back(e);
    return from_edges(std::move(vs), std::move(es), *this);
  }

  // Map an edge set of this graph onto another graph that shares edge ids
  // (missing ids are dropped).
  EdgeSet project_edges(const EdgeSet& X, const Graph& target) const {
    EdgeSet out(target.m());
    for (std::size_t e = X.find_first(); e != Bits::npos; e = X.find_next(e))
      if (auto t = target.edge_index(edges_.at(e).id)) out.set(*t);
    return out;
  }

  // Map a vertex set of this graph into another graph by id (missing dropped).
  VertexSet project_vertices(const VertexSet& S, const Graph& target) const {
    VertexSet out(target.n());
    for (std::size_t v = S.find_first(); v != Bits::npos; v = S.find_next(v))
      if (target.has_vertex(vertex_id(v))) out.set(target.vertex_index(vertex_id(v)));
    return out;
  }

  VertexSet vertices_from_ids(const std::vector<std::string>& ids) const {
    VertexSet out(n());
    for (const auto& id : ids) out.set(vertex_index(id));
    return out;
  }
  std::vector<std::string> ids_of_vertices(const VertexSet& S) const {
    std::vector<std::string> out;
    for (std::size_t v = S.find_first(); v != Bits::npos; v = S.find_next(v))
      out.push_back(vertex_id(v));
    return out;
  }
  EdgeSet edges_from_ids(const std::vector<std::string>& ids) const {
    EdgeSet out(m());
    for (const auto& id : ids) {
      auto e = edge_index(id);
      check_input(e.has_value(), "unknown edge id: " + id);
      out.set(*e);
    }
    return out;
  }
  std::vector<std::string> ids_of_edges(const EdgeSet& X) const {
    std::vector<std::string> out;
    for (std::size_t e = X.find_first(); e != Bits::npos; e = X.find_next(e))
      out.push_back(edges_.at(e).id);
    return out;
  }

 private:
  std::vector<std::string> vertex_ids_;  // sorted lexicographically
  std::vector<Edge> edges_;              // sorted lexicographically by id
  std::map<std::string, std::size_t> edge_by_id_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_by_pair_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<EdgeSet> incident_mask_;

  static Graph prepare(std::vector<std::string> vertices) {
    Graph g;
    std::sort(vertices.begin(), vertices.end());
    check_input(std::adjacent_find(vertices.begin(), vertices.end()) == vertices.end(),
                "duplicate vertex id");
    g.vertex_ids_ = std::move(vertices);
    return g;
  }

  void adopt_edges(std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    edges_ = std::move(edges);
    incident_.assign(n(), {});
    incident_mask_.assign(n(), EdgeSet(m()));
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& ed = edges_[e];
      check_input(ed.u < n() && ed.v < n(), "edge endpoint out of range: " + ed.id);
      check_input(ed.u != ed.v, "loop edge: " + ed.id);
      check_input(!edge_by_id_.count(ed.id), "duplicate edge id: " + ed.id);
      check_input(!edge_by_pair_.count({ed.u, ed.v}),
                  "parallel edge between " + vertex_id(ed.u) + " and " + vertex_id(ed.v));
      edge_by_id_[ed.id] = e;
      edge_by_pair_[{ed.u, ed.v}] = e;
      incident_[ed.u].push_back(e);
      incident_[ed.v].push_back(e);
      incident_mask_[ed.u].set(e);
      incident_mask_[ed.v].set(e);
    }
  }
};

}  // namespace sepkit
