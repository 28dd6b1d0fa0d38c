#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "separation.hpp"

namespace sepkit {

// Enumeration budgets. Exhaustive oracles abort with a capacity error rather
// than return a wrong or truncated answer.
struct OracleBudget {
  std::size_t max_mask_vertices = 64;     // hard cap of the mask representation
  std::size_t max_mask_edges = 64;        // hard cap of the mask representation
  std::size_t max_powerset_edges = 20;    // direct 2^m enumeration cap
  std::size_t max_free_choices = 24;      // per-separator 2^(components+internal) cap
  std::size_t max_results = 4'000'000;    // total enumerated separations cap
  std::size_t max_members = 40'000;       // profile member list cap for pair scans
  std::size_t max_search_nodes = 4'000'000;  // haven search cap
};

// Lexicographic order on the ascending index sequences of two masks; agrees
// with Bits::operator<=> on universes up to 64.
inline bool lex_less_u64(std::uint64_t a, std::uint64_t b) {
  if (a == b) return false;
  std::uint64_t low = (a ^ b) & ~((a ^ b) - 1);  // lowest differing bit
  std::uint64_t above = ~(low | (low - 1));
  if (a & low) return (b & above) != 0;  // a holds the smaller element
  return (a & above) == 0;               // a is a proper prefix
}

inline Bits mask_to_bits(std::uint64_t mask, std::size_t universe) {
  Bits b(universe);
  while (mask) {
    std::size_t i = static_cast<std::size_t>(__builtin_ctzll(mask));
    b.set(i);
    mask &= mask - 1;
  }
  return b;
}

// Fast adjacency/incidence masks for graphs with at most 64 vertices and 64
// edges; the work horse of every exhaustive oracle.
class MaskIndex {
 public:
  explicit MaskIndex(const Graph& g, const OracleBudget& budget = {}) : g_(&g) {
    check_capacity(g.n() <= budget.max_mask_vertices && g.n() <= 64,
                   "graph too large for mask-based enumeration (vertices)");
    check_capacity(g.m() <= budget.max_mask_edges && g.m() <= 64,
                   "graph too large for mask-based enumeration (edges)");
    n_ = g.n();
    m_ = g.m();
    all_vertices_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    all_edges_ = m_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m_) - 1;
    inc_.assign(n_, 0);
    adj_.assign(n_, 0);
    ends_.resize(m_);
    for (std::size_t e = 0; e < m_; ++e) {
      const Edge& ed = g.edge(e);
      inc_[ed.u] |= std::uint64_t{1} << e;
      inc_[ed.v] |= std::uint64_t{1} << e;
      adj_[ed.u] |= std::uint64_t{1} << ed.v;
      adj_[ed.v] |= std::uint64_t{1} << ed.u;
      ends_[e] = {ed.u, ed.v};
    }
  }

  const Graph& graph() const { return *g_; }
  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::uint64_t all_vertices() const { return all_vertices_; }
  std::uint64_t all_edges() const { return all_edges_; }
  std::uint64_t incident(std::size_t v) const { return inc_[v]; }
  std::uint64_t adjacent(std::size_t v) const { return adj_[v]; }
  const std::array<std::size_t, 2>& ends(std::size_t e) const { return ends_[e]; }

  std::uint64_t edge_complement(std::uint64_t x) const { return ~x & all_edges_; }

  std::uint64_t vertex_set(std::uint64_t x) const {
    std::uint64_t out = 0;
    while (x) {
      std::size_t e = static_cast<std::size_t>(__builtin_ctzll(x));
      out |= (std::uint64_t{1} << ends_[e][0]) | (std::uint64_t{1} << ends_[e][1]);
      x &= x - 1;
    }
    return out;
  }

  std::uint64_t boundary(std::uint64_t x) const {
    std::uint64_t out = 0, xc = edge_complement(x);
    for (std::size_t v = 0; v < n_; ++v)
      if ((inc_[v] & x) && (inc_[v] & xc)) out |= std::uint64_t{1} << v;
    return out;
  }

  std::uint64_t incident_union(std::uint64_t W) const {
    std::uint64_t out = 0;
    while (W) {
      out |= inc_[static_cast<std::size_t>(__builtin_ctzll(W))];
      W &= W - 1;
    }
    return out;
  }

  std::uint64_t neighbourhood(std::uint64_t C) const {
    std::uint64_t out = 0, c = C;
    while (c) {
      out |= adj_[static_cast<std::size_t>(__builtin_ctzll(c))];
      c &= c - 1;
    }
    return out & ~C;
  }

  std::uint64_t component_of(std::size_t v, std::uint64_t removed) const {
    std::uint64_t comp = std::uint64_t{1} << v, frontier = comp;
    while (frontier) {
      std::uint64_t grow = 0;
      std::uint64_t f = frontier;
      while (f) {
        grow |= adj_[static_cast<std::size_t>(__builtin_ctzll(f))];
        f &= f - 1;
      }
      frontier = grow & ~comp & ~removed & all_vertices_;
      comp |= frontier;
    }
    return comp;
  }

  // components of G - removed, ordered by smallest vertex
  std::vector<std::uint64_t> components(std::uint64_t removed) const {
    std::vector<std::uint64_t> out;
    std::uint64_t left = all_vertices_ & ~removed;
    while (left) {
      std::size_t v = static_cast<std::size_t>(__builtin_ctzll(left));
      std::uint64_t comp = component_of(v, removed);
      out.push_back(comp);
      left &= ~comp;
    }
    return out;
  }

  bool is_connected_set(std::uint64_t C) const {
    if (!C) return true;
    std::size_t v = static_cast<std::size_t>(__builtin_ctzll(C));
    return component_of(v, all_vertices_ & ~C) == C;
  }

  // edges with both endpoints inside S
  std::uint64_t internal_edges(std::uint64_t S) const {
    std::uint64_t out = 0;
    for (std::size_t e = 0; e < m_; ++e) {
      std::uint64_t both =
          (std::uint64_t{1} << ends_[e][0]) | (std::uint64_t{1} << ends_[e][1]);
      if ((both & ~S) == 0) out |= std::uint64_t{1} << e;
    }
    return out;
  }

  bool is_componental(std::uint64_t x) const {
    std::uint64_t bd = boundary(x);
    for (std::uint64_t C : components(bd))
      if (incident_union(C) == x) return true;
    return false;
  }

  bool is_tight(std::uint64_t x) const {
    std::uint64_t bd = boundary(x);
    for (std::uint64_t C : components(bd))
      if (boundary(incident_union(C)) != bd) return false;
    return true;
  }

  // L(X,Y) on masks given precomputed vertex sets
  static std::uint64_t link_overlap(std::uint64_t vx, std::uint64_t vxc, std::uint64_t vy,
                                    std::uint64_t vyc) {
    return (vx & vy) & (vxc | vyc);
  }

 private:
  const Graph* g_;
  std::size_t n_ = 0, m_ = 0;
  std::uint64_t all_vertices_ = 0, all_edges_ = 0;
  std::vector<std::uint64_t> inc_, adj_;
  std::vector<std::array<std::size_t, 2>> ends_;
};

namespace detail {

// For one separator S: every X with boundary(X) inside S is a union of the
// componental edge bundles of G - S plus a subset of the S-internal edges.
inline void emit_for_separator(const MaskIndex& idx, std::uint64_t S,
                               const OracleBudget& budget, std::vector<std::uint64_t>& out) {
  std::vector<std::uint64_t> items;
  for (std::uint64_t C : idx.components(S)) items.push_back(idx.incident_union(C));
  std::uint64_t internal = idx.internal_edges(S);
  while (internal) {
    items.push_back(internal & ~(internal - 1));
    internal &= internal - 1;
  }
  check_capacity(items.size() <= budget.max_free_choices,
                 "separator admits too many side assignments");
  std::uint64_t total = std::uint64_t{1} << items.size();
  for (std::uint64_t pick = 0; pick < total; ++pick) {
    std::uint64_t x = 0;
    std::uint64_t p = pick;
    while (p) {
      x |= items[static_cast<std::size_t>(__builtin_ctzll(p))];
      p &= p - 1;
    }
    out.push_back(x);
    check_capacity(out.size() <= budget.max_results, "separation enumeration budget exceeded");
  }
}

inline void sort_by_order_then_lex(const MaskIndex& idx, std::vector<std::uint64_t>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> keyed;  // (order, x)
  keyed.reserve(xs.size());
  for (std::uint64_t x : xs)
    keyed.push_back({static_cast<std::uint64_t>(__builtin_popcountll(idx.boundary(x))), x});
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return lex_less_u64(a.second, b.second);
  });
  for (std::size_t i = 0; i < keyed.size(); ++i) xs[i] = keyed[i].second;
}

}  // namespace detail

// Every separation of order <= k, each exactly once, via the separator
// characterization; sorted by (order, lexicographic edge sequence).
inline std::vector<std::uint64_t> enumerate_separation_masks(const MaskIndex& idx,
                                                             std::size_t k,
                                                             const OracleBudget& budget = {}) {
  std::vector<std::uint64_t> out;
  for_each_subset_upto(idx.n(), k, [&](const std::vector<std::size_t>& pick) {
    std::uint64_t S = 0;
    for (std::size_t v : pick) S |= std::uint64_t{1} << v;
    detail::emit_for_separator(idx, S, budget, out);
    return true;
  });
  detail::sort_by_order_then_lex(idx, out);
  return out;
}

inline std::vector<EdgeSet> enumerate_separations(const Graph& g, std::size_t k,
                                                  const OracleBudget& budget = {}) {
  MaskIndex idx(g, budget);
  std::vector<EdgeSet> out;
  for (std::uint64_t x : enumerate_separation_masks(idx, k, budget))
    out.push_back(mask_to_bits(x, g.m()));
  return out;
}

// Direct power-set filter; the independent cross-check for the enumerator.
inline std::vector<std::uint64_t> separation_masks_powerset(const MaskIndex& idx, std::size_t k,
                                                            const OracleBudget& budget = {}) {
  check_capacity(idx.m() <= budget.max_powerset_edges,
                 "too many edges for direct power-set enumeration");
  std::vector<std::uint64_t> out;
  std::uint64_t total = std::uint64_t{1} << idx.m();
  for (std::uint64_t x = 0; x < total; ++x)
    if (static_cast<std::size_t>(__builtin_popcountll(idx.boundary(x))) <= k) out.push_back(x);
  detail::sort_by_order_then_lex(idx, out);
  return out;
}

// One enumerated separation with its precomputed masks.
struct SepRec {
  std::uint64_t x = 0, vx = 0, vxc = 0, bd = 0;
  std::uint32_t ord = 0;
  bool componental = false;
};

// The exhaustively enumerated universe of separations of order <= k on a small
// graph, with per-record masks for fast pair predicates.
class SeparationUniverse {
 public:
  SeparationUniverse(const Graph& g, std::size_t k, const OracleBudget& budget = {})
      : idx_(g, budget), k_(k) {
    std::vector<std::uint64_t> xs;
    // past k >= n the power-set filter is both complete and cheaper
    if (k >= g.n() && g.m() <= budget.max_powerset_edges)
      xs = separation_masks_powerset(idx_, k, budget);
    else
      xs = enumerate_separation_masks(idx_, k, budget);
    recs_.reserve(xs.size());
    for (std::uint64_t x : xs) {
      SepRec r;
      r.x = x;
      r.vx = idx_.vertex_set(x);
      r.vxc = idx_.vertex_set(idx_.edge_complement(x));
      r.bd = idx_.boundary(x);
      r.ord = static_cast<std::uint32_t>(__builtin_popcountll(r.bd));
      r.componental = idx_.is_componental(x);
      recs_.push_back(r);
      achievable_.insert(r.bd);
    }
  }

  const MaskIndex& index() const { return idx_; }
  std::size_t k() const { return k_; }
  const std::vector<SepRec>& records() const { return recs_; }
  // boundaries realized by some separation of order <= k
  const std::set<std::uint64_t>& achievable_boundaries() const { return achievable_; }

 private:
  MaskIndex idx_;
  std::size_t k_;
  std::vector<SepRec> recs_;
  std::set<std::uint64_t> achievable_;
};

}  // namespace sepkit
