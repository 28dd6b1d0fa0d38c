#pragma once

#include <array>
#include <string>
#include <vector>

#include "graph.hpp"

namespace sepkit {

// A separation is just an edge set X of a fixed graph; the complement
// X^c = E - X is implicit. Everything here is a pure function of (G, X).

inline void check_edge_set(const Graph& g, const EdgeSet& X, const char* who) {
  check_input(X.universe() == g.m(), std::string(who) + ": edge set universe mismatch");
}

// V(X): vertices incident with an edge of X.
inline VertexSet vertex_set(const Graph& g, const EdgeSet& X) {
  check_edge_set(g, X, "vertex_set");
  VertexSet out(g.n());
  for (std::size_t e = X.find_first(); e != Bits::npos; e = X.find_next(e)) {
    out.set(g.edge(e).u);
    out.set(g.edge(e).v);
  }
  return out;
}

// boundary(X) = V(X) cap V(X^c): vertices meeting both sides.
inline VertexSet boundary(const Graph& g, const EdgeSet& X) {
  check_edge_set(g, X, "boundary");
  VertexSet out(g.n());
  for (std::size_t v = 0; v < g.n(); ++v) {
    const EdgeSet& inc = g.incident_set(v);
    if (inc.intersects(X) && !inc.subset_of(X)) out.set(v);
  }
  return out;
}

inline std::size_t order(const Graph& g, const EdgeSet& X) { return boundary(g, X).count(); }

// s_W: edges with at least one endvertex in W.
inline EdgeSet incident_edges(const Graph& g, const VertexSet& W) {
  check_input(W.universe() == g.n(), "incident_edges: vertex set universe mismatch");
  EdgeSet out(g.m());
  for (std::size_t v = W.find_first(); v != Bits::npos; v = W.find_next(v))
    for (std::size_t e : g.incident(v)) out.set(e);
  return out;
}

// true iff some component C of G - boundary(X) has s_C = X.
inline bool is_componental(const Graph& g, const EdgeSet& X) {
  check_edge_set(g, X, "is_componental");
  VertexSet bd = boundary(g, X);
  for (const VertexSet& C : g.components(bd))
    if (incident_edges(g, C) == X) return true;
  return false;
}

// nested: X sub Y or X^c sub Y or Y sub X or Y sub X^c. The relation is a
// pure set condition, so the graph is only needed for the checked overload.
inline bool is_nested(const EdgeSet& X, const EdgeSet& Y) {
  if (X.subset_of(Y) || Y.subset_of(X)) return true;
  EdgeSet Xc = X.complement();
  return Xc.subset_of(Y) || Y.subset_of(Xc);
}

inline bool is_nested(const Graph& g, const EdgeSet& X, const EdgeSet& Y) {
  check_edge_set(g, X, "is_nested");
  check_edge_set(g, Y, "is_nested");
  return is_nested(X, Y);
}

// The four links of X and Y:
// (bd(Y)-V(X), bd(Y)-V(X^c), bd(X)-V(Y), bd(X)-V(Y^c)).
inline std::array<VertexSet, 4> links(const Graph& g, const EdgeSet& X, const EdgeSet& Y) {
  VertexSet bX = boundary(g, X), bY = boundary(g, Y);
  VertexSet vX = vertex_set(g, X), vXc = vertex_set(g, X.complement());
  VertexSet vY = vertex_set(g, Y), vYc = vertex_set(g, Y.complement());
  return {bY - vX, bY - vXc, bX - vY, bX - vYc};
}

// L(X,Y) = (V(X) cap V(Y)) cap (V(X^c) cup V(Y^c)).
inline VertexSet link_overlap(const Graph& g, const EdgeSet& X, const EdgeSet& Y) {
  VertexSet vX = vertex_set(g, X), vY = vertex_set(g, Y);
  VertexSet vXc = vertex_set(g, X.complement()), vYc = vertex_set(g, Y.complement());
  return (vX & vY) & (vXc | vYc);
}

// tight: every component C of G - boundary(X) has boundary(s_C) = boundary(X).
inline bool is_tight(const Graph& g, const EdgeSet& X) {
  check_edge_set(g, X, "is_tight");
  VertexSet bd = boundary(g, X);
  for (const VertexSet& C : g.components(bd))
    if (boundary(g, incident_edges(g, C)) != bd) return false;
  return true;
}

// S separates v from w: v,w outside S and in different components of G - S.
inline bool separates(const Graph& g, const VertexSet& S, std::size_t v, std::size_t w) {
  if (S.test(v) || S.test(w)) return false;
  return !g.component_of(v, S).test(w);
}

// true iff each component of G - S containing v or w has all of S in its
// neighbourhood. Precondition: S separates v from w.
inline bool separates_minimally(const Graph& g, const VertexSet& S, std::size_t v,
                                std::size_t w) {
  check_input(!S.test(v) && !S.test(w), "separates_minimally: endpoint inside separator");
  check_input(separates(g, S, v, w), "separates_minimally: S does not separate v from w");
  for (std::size_t x : {v, w}) {
    VertexSet C = g.component_of(x, S);
    if (!S.subset_of(g.neighbourhood(C))) return false;
  }
  return true;
}

// All S with |S| <= k separating v from w minimally, in (size, lex) order.
inline std::vector<VertexSet> enumerate_minimal_separators(const Graph& g, std::size_t v,
                                                           std::size_t w, std::size_t k) {
  check_input(v != w, "enumerate_minimal_separators: v == w");
  std::vector<std::size_t> pool;
  for (std::size_t x = 0; x < g.n(); ++x)
    if (x != v && x != w) pool.push_back(x);
  std::vector<VertexSet> out;
  for_each_subset_upto(pool.size(), k, [&](const std::vector<std::size_t>& pick) {
    VertexSet S(g.n());
    for (std::size_t i : pick) S.set(pool[i]);
    if (separates(g, S, v, w) && separates_minimally(g, S, v, w)) out.push_back(S);
    return true;
  });
  return out;
}

// The vertex separation (A, B) induced by X: A = V - (V(X^c) - V(X)),
// B = V - (V(X) - V(X^c)). A cap B = boundary(X) plus the vertices touching
// no edge at all; A cup B = V.
struct VertexSeparation {
  VertexSet A, B;
};

inline VertexSeparation vertex_separation_of(const Graph& g, const EdgeSet& X) {
  VertexSet vX = vertex_set(g, X), vXc = vertex_set(g, X.complement());
  VertexSet all = g.all_vertices();
  return {all - (vXc - vX), all - (vX - vXc)};
}

// no edge joins A - B to B - A
inline bool valid_vertex_separation(const Graph& g, const VertexSeparation& s) {
  VertexSet onlyA = s.A - s.B, onlyB = s.B - s.A;
  for (const Edge& e : g.edges()) {
    bool aU = onlyA.test(e.u), aV = onlyA.test(e.v);
    bool bU = onlyB.test(e.u), bV = onlyB.test(e.v);
    if ((aU && bV) || (aV && bU)) return false;
  }
  return true;
}

}  // namespace sepkit
