#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "profiles.hpp"

namespace sepkit {

// X separates v and w when they lie strictly on opposite sides
inline bool separates_vertices(const Graph& g, const EdgeSet& X, std::size_t v, std::size_t w) {
  VertexSet vx = vertex_set(g, X);
  VertexSet vxc = vertex_set(g, X.complement());
  bool vl = vx.test(v) && !vxc.test(v), vr = vxc.test(v) && !vx.test(v);
  bool wl = vx.test(w) && !vxc.test(w), wr = vxc.test(w) && !vx.test(w);
  return (vl && wr) || (vr && wl);
}

inline void check_nested_set(const Graph& g, const std::vector<EdgeSet>& N) {
  for (std::size_t i = 0; i < N.size(); ++i) {
    check_edge_set(g, N[i], "nested set member");
    for (std::size_t j = i + 1; j < N.size(); ++j)
      check_input(is_nested(N[i], N[j]), "separations " + std::to_string(i) + " and " +
                                             std::to_string(j) + " are not nested");
  }
}

// Maximal vertex sets no two of whose vertices are separated by a member of N.
// Each block is an intersection of one side per separation; iterative splitting
// followed by an inclusion-maximality filter.
inline std::vector<VertexSet> nested_blocks(const Graph& g, const std::vector<EdgeSet>& N,
                                            const OracleBudget& budget = {}) {
  check_nested_set(g, N);
  std::set<VertexSet> parts{g.all_vertices()};
  for (const EdgeSet& X : N) {
    VertexSeparation vs = vertex_separation_of(g, X);
    std::set<VertexSet> next;
    for (const VertexSet& part : parts) {
      VertexSet a = part & vs.A, b = part & vs.B;
      if (a.any()) next.insert(a);
      if (b.any()) next.insert(b);
      check_capacity(next.size() <= budget.max_results, "block splitting budget exceeded");
    }
    parts = std::move(next);
  }
  std::vector<VertexSet> all(parts.begin(), parts.end());
  std::vector<VertexSet> blocks;
  for (const VertexSet& p : all) {
    bool maximal = true;
    for (const VertexSet& q : all)
      if (!(q == p) && p.subset_of(q)) {
        maximal = false;
        break;
      }
    if (maximal) blocks.push_back(p);
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

inline VertexSet block_containing(const Graph& g, const std::vector<VertexSet>& blocks,
                                  const VertexSet& S) {
  std::optional<VertexSet> found;
  for (const VertexSet& b : blocks)
    if (S.subset_of(b)) {
      check_consistent(!found.has_value(), "boundary lies in two blocks");
      found = b;
    }
  check_input(found.has_value(), "no block contains the given vertex set");
  return *found;
}

// The torso of a block: the induced graph plus a virtual edge for every pair
// of block vertices that lie together in some member's boundary without being
// adjacent. Virtual edges record their witnessing members by index.
struct Torso {
  std::shared_ptr<const Graph> graph;  // torso graph; real edges keep host ids
  Graph host;                          // the graph the torso was built from
  VertexSet block;                     // host numbering
  std::vector<std::size_t> to_host;    // torso vertex index -> host vertex index
};

inline Torso build_torso(const Graph& g, const std::vector<EdgeSet>& N, const VertexSet& B,
                         const OracleBudget& budget = {}, bool verify_block = true) {
  check_input(B.universe() == g.n() && B.any(), "torso block invalid");
  if (verify_block) {
    std::vector<VertexSet> blocks = nested_blocks(g, N, budget);
    bool is_block = false;
    for (const VertexSet& b : blocks) is_block = is_block || b == B;
    check_input(is_block, "vertex set is not a block of the nested set");
  } else {
    check_nested_set(g, N);
  }

  std::vector<std::string> vids = g.ids_of_vertices(B);
  std::vector<Edge> edges;
  for (std::size_t e = 0; e < g.m(); ++e)
    if (B.test(g.edge(e).u) && B.test(g.edge(e).v)) edges.push_back(g.edge(e));

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> virt;
  for (std::size_t i = 0; i < N.size(); ++i) {
    VertexSet bd = boundary(g, N[i]) & B;
    for (std::size_t x = bd.find_first(); x != Bits::npos; x = bd.find_next(x))
      for (std::size_t y = bd.find_next(x); y != Bits::npos; y = bd.find_next(y)) {
        if (g.adjacent(x, y)) continue;
        virt[{x, y}].push_back(std::to_string(i));
      }
  }
  for (auto& [pair, wit] : virt) {
    Edge e;
    const std::string &a = g.vertex_id(pair.first), &b = g.vertex_id(pair.second);
    e.id = "virt:" + (a < b ? a + "|" + b : b + "|" + a);
    e.u = pair.first;
    e.v = pair.second;
    e.is_virtual = true;
    e.witnesses = wit;
    edges.push_back(std::move(e));
  }

  Torso t;
  t.graph = std::make_shared<const Graph>(Graph::from_edges(vids, edges, g));
  t.host = g;
  t.block = B;
  t.to_host.resize(vids.size());
  for (std::size_t i = 0; i < vids.size(); ++i) t.to_host[i] = g.vertex_index(vids[i]);

  // every component hanging off the block sees a complete neighbourhood
  for (const VertexSet& C : g.components(B)) {
    VertexSet nb = g.neighbourhood(C);
    check_consistent(nb.subset_of(B), "component of G - B with a neighbour outside B");
    std::vector<std::size_t> ids;
    for (std::size_t v = nb.find_first(); v != Bits::npos; v = nb.find_next(v))
      ids.push_back(t.graph->vertex_index(g.vertex_id(v)));
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        check_consistent(t.graph->adjacent(ids[i], ids[j]),
                         "neighbourhood of a torso-external component is not complete");
  }
  return t;
}

// The separation of the torso induced by a separation Y of the host that is
// nested with N: the host edges of Y inside the block, plus every torso edge
// whose ends lie in the boundary of some member X with V(X) or V(X^c) inside
// V(Y).
inline EdgeSet induce_separation(const Torso& T, const std::vector<EdgeSet>& N,
                                 const EdgeSet& Y) {
  const Graph& g = T.host;
  const Graph& tg = *T.graph;
  check_edge_set(g, Y, "induced separation input");
  for (std::size_t i = 0; i < N.size(); ++i)
    check_input(is_nested(Y, N[i]),
                "separation is not nested with member " + std::to_string(i));

  VertexSet vy = vertex_set(g, Y);
  std::vector<std::pair<VertexSet, VertexSet>> shores;  // (V(X), V(X^c)) per member
  shores.reserve(N.size());
  for (const EdgeSet& X : N)
    shores.push_back({vertex_set(g, X), vertex_set(g, X.complement())});

  EdgeSet out(tg.m());
  for (std::size_t e = 0; e < tg.m(); ++e) {
    const Edge& te = tg.edge(e);
    if (!te.is_virtual) {
      std::optional<std::size_t> he = g.edge_index(te.id);
      check_consistent(he.has_value(), "torso edge missing from host");
      if (Y.test(*he)) out.set(e);
    }
    std::size_t hu = T.to_host[te.u], hv = T.to_host[te.v];
    if (out.test(e)) continue;
    for (std::size_t i = 0; i < N.size(); ++i) {
      VertexSet bd = boundary(g, N[i]);
      if (!(bd.test(hu) && bd.test(hv))) continue;
      if (shores[i].first.subset_of(vy) || shores[i].second.subset_of(vy)) {
        out.set(e);
        break;
      }
    }
  }

  // the boundary of the induced separation never leaves the original boundary
  VertexSet tbd = boundary(tg, out);
  VertexSet hbd = boundary(g, Y);
  for (std::size_t v = tbd.find_first(); v != Bits::npos; v = tbd.find_next(v))
    check_consistent(hbd.test(T.to_host[v]), "induced boundary escapes the original boundary");
  return out;
}

// Haven induced on a torso: for each torso separator S the chosen component
// is the unique one meeting the host choice at S. Requires the host choice to
// intersect the block at every separator of the torso; the witness separator
// is reported otherwise.
inline Haven induce_haven(const Torso& T, const Haven& h) {
  const Graph& tg = *T.graph;
  Haven out;
  out.order = h.order;
  for_each_subset_upto(tg.n(), h.order - 1, [&](const std::vector<std::size_t>& pick) {
    VertexSet S(tg.n()), hostS(T.host.n());
    for (std::size_t v : pick) {
      S.set(v);
      hostS.set(T.to_host[v]);
    }
    auto it = h.choice.find(hostS);
    check_input(it != h.choice.end(), "haven table misses a block separator");
    VertexSet c_in_block = it->second & T.block;
    if (!c_in_block.any()) {
      std::string ids;
      for (const std::string& id : T.host.ids_of_vertices(hostS)) ids += " " + id;
      throw input_error("haven not inducible: choice avoids the block at separator" + ids);
    }
    VertexSet trace = T.host.project_vertices(c_in_block, tg);
    std::size_t hits = 0;
    VertexSet chosen(tg.n());
    for (const VertexSet& C : tg.components(S))
      if (C.intersects(trace)) {
        ++hits;
        chosen = C;
      }
    check_consistent(hits == 1, "host choice does not trace a unique torso component");
    out.choice[S] = chosen;
    return true;
  });
  return out;
}

// Profile induced on a torso: the choice at S is the component of the torso
// minus S containing what remains of the host profile's choice. Requires the
// host choice to meet the block at every separator it is asked about.
class InducedProfile final : public Profile {
 public:
  InducedProfile(Torso t, ProfilePtr base)
      : Profile(t.graph, base->order()), base_(std::move(base)), block_(t.block),
        to_host_(t.to_host) {
    check_input(base_->graph().n() == t.host.n() && base_->graph().m() == t.host.m(),
                "profile does not live on the torso's host graph");
  }

  std::optional<VertexSet> choice(const VertexSet& S) const override {
    const Graph& tg = graph();
    const Graph& hg = base_->graph();
    VertexSet hostS(hg.n());
    for (std::size_t v = S.find_first(); v != Bits::npos; v = S.find_next(v))
      hostS.set(to_host_[v]);
    std::optional<VertexSet> hostC = base_->choice(hostS);
    if (!hostC) return std::nullopt;
    VertexSet rest(tg.n());
    for (std::size_t v = 0; v < tg.n(); ++v)
      if (hostC->test(to_host_[v])) rest.set(v);
    if (rest.empty())
      throw input_error("profile not inducible: its choice avoids the block at a separator");
    std::optional<VertexSet> found;
    for (const VertexSet& C : tg.components(S))
      if (C.intersects(rest)) {
        check_consistent(!found.has_value(), "host choice splits across torso components");
        found = C;
      }
    check_consistent(found.has_value() && rest.subset_of(*found),
                     "host choice not contained in one torso component");
    return found;
  }

  std::string describe() const override { return base_->describe() + "@torso"; }
  ProfilePtr base() const { return base_; }

 private:
  ProfilePtr base_;
  VertexSet block_;
  std::vector<std::size_t> to_host_;
};

inline ProfilePtr induce_profile(const Torso& T, ProfilePtr base, bool eager = true) {
  auto p = std::make_shared<InducedProfile>(T, std::move(base));
  if (eager) {
    for_each_subset_upto(T.graph->n(), p->k(), [&](const std::vector<std::size_t>& pick) {
      VertexSet S(T.graph->n());
      for (std::size_t v : pick) S.set(v);
      p->choice(S);
      return true;
    });
  }
  return p;
}

}  // namespace sepkit
