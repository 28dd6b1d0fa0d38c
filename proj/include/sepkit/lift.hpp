#pragma once

#include <map>
#include <string>
#include <vector>

#include "torso.hpp"

namespace sepkit {

// Steps at which edges and nested-set members became forced while extending a
// torso separation: edges at odd steps, members at even steps.
struct ForcingTrace {
  std::map<std::string, std::size_t> edge_step;    // host edge id -> step
  std::map<std::size_t, std::size_t> member_step;  // index into N -> step
};

namespace detail {

// the members of N reoriented away from the block: for each X, the complement
// of the side whose vertex set contains B
inline std::vector<EdgeSet> away_sides(const Torso& T, const std::vector<EdgeSet>& N) {
  const Graph& g = T.host;
  std::vector<EdgeSet> M;
  M.reserve(N.size());
  for (const EdgeSet& X : N) {
    VertexSet vx = vertex_set(g, X);
    if (T.block.subset_of(vx)) {
      M.push_back(X.complement());
    } else {
      VertexSet vxc = vertex_set(g, X.complement());
      check_consistent(T.block.subset_of(vxc), "block not inside either side of a member");
      M.push_back(X);
    }
  }
  return M;
}

// Alternating forcing fixpoint: seed with the host edges incident to a vertex
// of C - D (for (C,D) the vertex-separation of the torso induced by Y); a
// member is forced when it contains a forced edge, and then all its edges are.
inline EdgeSet forced_fixpoint(const Torso& T, const std::vector<EdgeSet>& M, const EdgeSet& Y,
                               ForcingTrace* trace) {
  const Graph& g = T.host;
  const Graph& tg = *T.graph;
  VertexSeparation vs = vertex_separation_of(tg, Y);
  VertexSet strict = vs.A - vs.B;  // C - D in the torso

  EdgeSet forced = g.no_edges();
  for (std::size_t v = strict.find_first(); v != Bits::npos; v = strict.find_next(v))
    forced = forced | g.incident_set(T.to_host[v]);
  if (trace)
    for (std::size_t e = forced.find_first(); e != Bits::npos; e = forced.find_next(e))
      trace->edge_step[g.edge(e).id] = 1;

  std::vector<char> member_forced(M.size(), 0);
  std::size_t step = 1;
  while (true) {
    // even step: members meeting a forced edge
    std::vector<std::size_t> fresh;
    for (std::size_t i = 0; i < M.size(); ++i)
      if (!member_forced[i] && M[i].intersects(forced)) {
        member_forced[i] = 1;
        fresh.push_back(i);
      }
    if (fresh.empty()) break;
    ++step;
    if (trace)
      for (std::size_t i : fresh) trace->member_step[i] = step;
    // odd step: the edges of freshly forced members
    EdgeSet added = g.no_edges();
    for (std::size_t i : fresh) added = added | (M[i] - forced);
    ++step;
    if (trace)
      for (std::size_t e = added.find_first(); e != Bits::npos; e = added.find_next(e))
        trace->edge_step[g.edge(e).id] = step;
    if (added.empty()) break;
    forced = forced | added;
  }
  return forced;
}

}  // namespace detail

struct HatResult {
  EdgeSet lifted;  // separation of the host graph
  ForcingTrace trace;
};

// Extend a torso separation to the host graph; the result is nested with
// every member of N.
inline HatResult hat_extend(const Torso& T, const std::vector<EdgeSet>& N, const EdgeSet& Y) {
  check_edge_set(*T.graph, Y, "hat input");
  std::vector<EdgeSet> M = detail::away_sides(T, N);
  HatResult res;
  res.lifted = detail::forced_fixpoint(T, M, Y, &res.trace);
  EdgeSet opposite = detail::forced_fixpoint(T, M, Y.complement(), nullptr);
  check_consistent(!res.lifted.intersects(opposite), "edge forced by both orientations");
  for (std::size_t i = 0; i < M.size(); ++i)
    check_consistent(M[i].subset_of(res.lifted) || !M[i].intersects(res.lifted),
                     "lifted separation splits a member of the nested set");
  return res;
}

struct TildeResult {
  std::vector<EdgeSet> lifted;        // parallel to the input order
  std::vector<ForcingTrace> traces;   // forcing part of each member's extension
};

// Extend a nested family of torso separations compatibly, in the given order.
// Each extension consists of the edges forced by the member, the edges of
// every earlier extension oriented below it, and the edges lying in all
// earlier extensions oriented above it that are not forced by the complement;
// when nothing earlier lies above it, that last clause contributes nothing.
inline TildeResult tilde_extend(const Torso& T, const std::vector<EdgeSet>& N,
                                const std::vector<EdgeSet>& L) {
  const Graph& g = T.host;
  const Graph& tg = *T.graph;
  for (std::size_t i = 0; i < L.size(); ++i) {
    check_edge_set(tg, L[i], "tilde input");
    check_input(L[i].any() && L[i].complement().any(),
                "trivial separation in the lift input at position " + std::to_string(i));
    for (std::size_t j = i + 1; j < L.size(); ++j)
      check_input(is_nested(L[i], L[j]), "lift input is not nested at positions " +
                                             std::to_string(i) + ", " + std::to_string(j));
  }
  std::vector<EdgeSet> M = detail::away_sides(T, N);

  TildeResult res;
  std::vector<EdgeSet> tilde;   // extension of L[a]
  std::vector<EdgeSet> tildeC;  // extension of L[a]'s complement
  for (std::size_t c = 0; c < L.size(); ++c) {
    ForcingTrace trace;
    EdgeSet F = detail::forced_fixpoint(T, M, L[c], &trace);
    EdgeSet Fc = detail::forced_fixpoint(T, M, L[c].complement(), nullptr);
    check_consistent(!F.intersects(Fc), "edge forced by both orientations");

    // orient each earlier member toward or above the current one
    EdgeSet below = g.no_edges(), belowC = g.no_edges();
    EdgeSet above = g.all_edges(), aboveC = g.all_edges();
    bool any_above = false, any_aboveC = false;
    for (std::size_t a = 0; a < c; ++a) {
      EdgeSet Za = L[a];
      EdgeSet tz = tilde[a], tzc = tildeC[a];
      if (!(Za.subset_of(L[c]) || L[c].subset_of(Za))) {
        Za = L[a].complement();
        std::swap(tz, tzc);
        check_consistent(Za.subset_of(L[c]) || L[c].subset_of(Za),
                         "lift input members are not nested");
      }
      if (Za.subset_of(L[c])) below = below | tz;
      if (L[c].subset_of(Za)) {
        above = above & tz;
        any_above = true;
      }
      // the complement rule, with complements in place of both sides
      EdgeSet ZaC = Za.complement();
      if (ZaC.subset_of(L[c].complement())) belowC = belowC | tzc;
      if (L[c].complement().subset_of(ZaC)) {
        aboveC = aboveC & tzc;
        any_aboveC = true;
      }
    }
    EdgeSet cur = F | below | (any_above ? above - Fc : g.no_edges());
    // the first extension settles every undecided edge toward its complement;
    // afterwards the complement identity is a consequence and is asserted
    EdgeSet curC = c == 0 ? cur.complement()
                          : Fc | belowC | (any_aboveC ? aboveC - F : g.no_edges());
    check_consistent(curC == cur.complement(),
                     "extension of the complement is not the complement of the extension");
    check_consistent(F.subset_of(cur) && Fc.subset_of(curC),
                     "extension misses a forced edge");

    // the boundary of the extension stays inside the member's boundary
    VertexSet tb = boundary(g, cur);
    VertexSet yb = boundary(tg, L[c]);
    for (std::size_t v = tb.find_first(); v != Bits::npos; v = tb.find_next(v)) {
      bool inside = false;
      for (std::size_t w = yb.find_first(); w != Bits::npos; w = yb.find_next(w))
        inside = inside || T.to_host[w] == v;
      check_consistent(inside, "extension boundary escapes the member boundary");
    }

    tilde.push_back(cur);
    tildeC.push_back(curC);
    res.lifted.push_back(cur);
    res.traces.push_back(std::move(trace));
  }

  // inclusions transfer to the extensions, so the output is nested
  for (std::size_t i = 0; i < res.lifted.size(); ++i)
    for (std::size_t j = i + 1; j < res.lifted.size(); ++j)
      check_consistent(is_nested(res.lifted[i], res.lifted[j]), "extensions are not nested");
  for (const EdgeSet& X : M)
    for (const EdgeSet& t : res.lifted)
      check_consistent(X.subset_of(t) || !X.intersects(t),
                       "extension splits a member of the nested set");
  return res;
}

}  // namespace sepkit
