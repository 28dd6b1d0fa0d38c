#pragma once

#include <deque>
#include <vector>

#include "oracle.hpp"
#include "separation.hpp"

namespace sepkit {

namespace detail {

class DinicGraph {
 public:
  explicit DinicGraph(std::size_t nodes) : adj_(nodes) {}

  void add_arc(std::size_t a, std::size_t b, int cap) {
    adj_[a].push_back({b, adj_[b].size(), cap, cap});
    adj_[b].push_back({a, adj_[a].size() - 1, 0, 0});
  }

  int max_flow(std::size_t s, std::size_t t) {
    int total = 0;
    while (bfs(s, t)) {
      it_.assign(adj_.size(), 0);
      while (int pushed = dfs(s, t, kInf)) total += pushed;
    }
    return total;
  }

  // nodes reachable from s in the residual graph
  std::vector<char> residual_reachable(std::size_t s) const {
    std::vector<char> seen(adj_.size(), 0);
    std::deque<std::size_t> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop_front();
      for (const Arc& a : adj_[v])
        if (a.cap > 0 && !seen[a.to]) {
          seen[a.to] = 1;
          q.push_back(a.to);
        }
    }
    return seen;
  }

  int flow_on(std::size_t v, std::size_t arc) const {
    return adj_[v][arc].orig - adj_[v][arc].cap;
  }
  std::size_t arc_count(std::size_t v) const { return adj_[v].size(); }
  std::size_t arc_to(std::size_t v, std::size_t arc) const { return adj_[v][arc].to; }
  void drain(std::size_t v, std::size_t arc) {
    ++adj_[v][arc].cap;  // remove one unit of flow while decomposing into paths
    --adj_[adj_[v][arc].to][adj_[v][arc].rev].cap;
  }

  static constexpr int kInf = 1 << 29;

 private:
  struct Arc {
    std::size_t to, rev;
    int cap, orig;
  };
  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_, it_;

  bool bfs(std::size_t s, std::size_t t) {
    level_.assign(adj_.size(), -1);
    std::deque<std::size_t> q{s};
    level_[s] = 0;
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop_front();
      for (const Arc& a : adj_[v])
        if (a.cap > 0 && level_[a.to] < 0) {
          level_[a.to] = level_[v] + 1;
          q.push_back(a.to);
        }
    }
    return level_[t] >= 0;
  }

  int dfs(std::size_t v, std::size_t t, int limit) {
    if (v == t) return limit;
    for (int& i = it_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
      Arc& a = adj_[v][static_cast<std::size_t>(i)];
      if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
      int pushed = dfs(a.to, t, std::min(limit, a.cap));
      if (pushed > 0) {
        a.cap -= pushed;
        adj_[a.to][a.rev].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }
};

}  // namespace detail

struct FlowResult {
  std::size_t value = 0;
  // leftmost minimum cut: interior vertices only, never touching A or B
  VertexSet min_cut;
  // a maximum family of A-B paths whose interiors are pairwise disjoint;
  // each path is a vertex index sequence from a vertex of A to a vertex of B
  std::vector<std::vector<std::size_t>> paths;
};

// does removing S disconnect every vertex of A from every vertex of B
inline bool separates_sets(const Graph& g, const VertexSet& S, const VertexSet& A,
                           const VertexSet& B) {
  check_input(!S.intersects(A) && !S.intersects(B), "separator meets a terminal set");
  VertexSet seen(g.n());
  std::vector<std::size_t> stack;
  for (std::size_t v = A.find_first(); v != Bits::npos; v = A.find_next(v)) {
    if (seen.test(v)) continue;
    seen.set(v);
    stack.push_back(v);
  }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (B.test(v)) return false;
    for (std::size_t e : g.incident(v)) {
      std::size_t w = g.other_end(e, v);
      if (!S.test(w) && !seen.test(w)) {
        seen.set(w);
        stack.push_back(w);
      }
    }
  }
  return true;
}

// Maximum number of A-B paths with pairwise disjoint interiors, one witnessing
// path family, and the leftmost minimum vertex cut avoiding A and B. Terminal
// vertices are uncuttable, so every cut produced lies outside both sets.
inline FlowResult min_vertex_cut(const Graph& g, const VertexSet& A, const VertexSet& B) {
  check_input(A.universe() == g.n() && B.universe() == g.n(), "terminal set universe mismatch");
  check_input(A.any() && B.any(), "empty terminal set");
  check_input(!A.intersects(B), "terminal sets overlap");
  for (std::size_t v = A.find_first(); v != Bits::npos; v = A.find_next(v))
    for (std::size_t e : g.incident(v))
      check_input(!B.test(g.other_end(e, v)), "terminal sets are adjacent; no cut exists");

  const std::size_t n = g.n();
  auto in = [](std::size_t v) { return 2 * v; };
  auto out = [](std::size_t v) { return 2 * v + 1; };
  std::size_t s = 2 * n, t = 2 * n + 1;
  detail::DinicGraph dg(2 * n + 2);
  VertexSet terminals = A | B;
  for (std::size_t v = 0; v < n; ++v)
    dg.add_arc(in(v), out(v), terminals.test(v) ? detail::DinicGraph::kInf : 1);
  for (std::size_t e = 0; e < g.m(); ++e) {
    dg.add_arc(out(g.edge(e).u), in(g.edge(e).v), detail::DinicGraph::kInf);
    dg.add_arc(out(g.edge(e).v), in(g.edge(e).u), detail::DinicGraph::kInf);
  }
  for (std::size_t v = A.find_first(); v != Bits::npos; v = A.find_next(v))
    dg.add_arc(s, in(v), detail::DinicGraph::kInf);
  for (std::size_t v = B.find_first(); v != Bits::npos; v = B.find_next(v))
    dg.add_arc(out(v), t, detail::DinicGraph::kInf);

  FlowResult res;
  int value = dg.max_flow(s, t);
  check_consistent(value < detail::DinicGraph::kInf / 2, "unbounded flow between terminal sets");
  res.value = static_cast<std::size_t>(value);

  std::vector<char> reach = dg.residual_reachable(s);
  res.min_cut = VertexSet(n);
  for (std::size_t v = 0; v < n; ++v)
    if (reach[in(v)] && !reach[out(v)]) res.min_cut.set(v);
  check_consistent(res.min_cut.count() == res.value, "cut size does not match flow value");

  // decompose the flow into paths; arcs with positive flow form the support
  for (int p = 0; p < value; ++p) {
    std::vector<std::size_t> path;
    std::size_t v = s;
    while (v != t) {
      bool advanced = false;
      for (std::size_t i = 0; i < dg.arc_count(v); ++i) {
        if (dg.flow_on(v, i) <= 0) continue;
        std::size_t w = dg.arc_to(v, i);
        dg.drain(v, i);
        if (w % 2 == 0 && w < 2 * n) path.push_back(w / 2);
        v = w;
        advanced = true;
        break;
      }
      check_consistent(advanced, "flow decomposition stalled");
    }
    res.paths.push_back(std::move(path));
  }
  return res;
}

// All minimum vertex cuts between A and B. Every minimum cut consists of one
// interior vertex per path of a maximum disjoint family, so the candidate pool
// is the union of path interiors.
inline std::vector<VertexSet> all_min_cuts(const Graph& g, const VertexSet& A, const VertexSet& B,
                                           const OracleBudget& budget = {}) {
  FlowResult base = min_vertex_cut(g, A, B);
  VertexSet terminals = A | B;
  std::vector<std::size_t> pool;
  for (const auto& path : base.paths)
    for (std::size_t v : path)
      if (!terminals.test(v)) pool.push_back(v);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  std::vector<VertexSet> cuts;
  if (base.value == 0) {
    cuts.push_back(VertexSet(g.n()));  // already separated; the empty cut
    return cuts;
  }
  std::size_t tested = 0;
  for_each_combination(pool.size(), base.value, [&](const std::vector<std::size_t>& pick) {
    check_capacity(++tested <= budget.max_results, "minimum-cut enumeration budget exceeded");
    VertexSet S(g.n());
    for (std::size_t i : pick) S.set(pool[i]);
    if (separates_sets(g, S, A, B)) cuts.push_back(S);
    return true;
  });
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

// The separation s_C for C the component of G-S containing A. For S a minimum
// A-B cut this has boundary exactly S, with A inside and B outside.
inline EdgeSet separation_toward(const Graph& g, const VertexSet& S, const VertexSet& A) {
  check_input(!S.intersects(A), "cut meets the terminal set");
  VertexSet C = g.component_of(A.find_first(), S);
  check_input(A.subset_of(C), "terminal set split by the cut");
  return incident_edges(g, C);
}

// Maximum number of v-T paths that are pairwise vertex-disjoint except at v.
// Endpoints in T are distinct and T-vertices still carry unit capacity when a
// path passes through them, so the value is the size of a largest fan from v
// into T. Unlike min_vertex_cut, v may be adjacent to T: a single edge counts
// as a path with empty interior.
inline std::size_t fan_count(const Graph& g, std::size_t v, const VertexSet& T) {
  check_input(T.universe() == g.n() && v < g.n(), "fan terminal universe mismatch");
  check_input(T.any(), "empty fan target set");
  check_input(!T.test(v), "fan apex lies in the target set");

  std::size_t n = g.n();
  auto in = [](std::size_t u) { return 2 * u; };
  auto out = [](std::size_t u) { return 2 * u + 1; };
  std::size_t sink = 2 * n;
  detail::DinicGraph dg(2 * n + 1);
  for (std::size_t u = 0; u < n; ++u)
    dg.add_arc(in(u), out(u), u == v ? detail::DinicGraph::kInf : 1);
  for (std::size_t e = 0; e < g.m(); ++e) {
    dg.add_arc(out(g.edge(e).u), in(g.edge(e).v), detail::DinicGraph::kInf);
    dg.add_arc(out(g.edge(e).v), in(g.edge(e).u), detail::DinicGraph::kInf);
  }
  for (std::size_t u = T.find_first(); u != Bits::npos; u = T.find_next(u))
    dg.add_arc(out(u), sink, 1);

  int value = dg.max_flow(out(v), sink);
  check_consistent(value >= 0 && value < detail::DinicGraph::kInf / 2, "unbounded fan");
  return static_cast<std::size_t>(value);
}

}  // namespace sepkit
