#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oracle.hpp"

namespace sepkit {

// sentinel for r = infinity; normalized to |V(G)| where it matters
inline constexpr std::size_t r_infinity = static_cast<std::size_t>(-1);

inline std::size_t normalize_r(std::size_t r, const Graph& g) {
  return r >= g.n() ? g.n() : r;
}

// The profile axioms exclude "singletons". The default reading is a separation
// consisting of exactly one edge; the alternative reading (a separation of the
// form s_{{v}}) is available as a switch.
enum class SingletonRule { single_edge, single_vertex_side };

struct ProfileConfig {
  SingletonRule singleton_rule = SingletonRule::single_edge;
};

namespace detail {

inline bool is_singleton_mask(const MaskIndex& idx, std::uint64_t x, const ProfileConfig& cfg) {
  if (cfg.singleton_rule == SingletonRule::single_edge) return __builtin_popcountll(x) == 1;
  for (std::size_t v = 0; v < idx.n(); ++v)
    if (x != 0 && idx.incident(v) == x) return true;
  return false;
}

}  // namespace detail

// A profile of order k+1 orients every separation of order <= k. It is stored
// compactly through its haven: a choice of one component of G-S per separator
// S of size <= k. Membership is derived: X is a member iff s_C lies inside X
// for C the chosen component of G-boundary(X). Implementations may leave a
// choice undecided (a finite-truncation artifact of end surrogates); such
// separations are simply not members of either orientation.
class Profile {
 public:
  Profile(std::shared_ptr<const Graph> g, std::size_t order) : g_(std::move(g)), order_(order) {
    check_input(order_ >= 1, "profile order must be at least 1");
  }
  virtual ~Profile() = default;

  const Graph& graph() const { return *g_; }
  std::shared_ptr<const Graph> graph_ptr() const { return g_; }
  std::size_t order() const { return order_; }
  std::size_t k() const { return order_ - 1; }

  // chosen component of G-S (vertex set), or nullopt when undecided
  virtual std::optional<VertexSet> choice(const VertexSet& S) const = 0;
  virtual std::string describe() const { return "profile(order=" + std::to_string(order_) + ")"; }

  // tri-state orientation: true = X in P, false = X^c in P, nullopt undecided
  std::optional<bool> orient(const EdgeSet& X) const {
    const Graph& g = graph();
    check_input(X.universe() == g.m(), "orient: edge set universe mismatch");
    VertexSet bd = boundary(g, X);
    check_input(bd.count() <= k(), "orient: separation order exceeds profile order");
    std::optional<VertexSet> C = choice(bd);
    if (!C) return std::nullopt;
    EdgeSet sC = incident_edges(g, *C);
    check_consistent(sC.any(), "haven choice has no incident edges");
    if (sC.subset_of(X)) return true;
    if (!sC.intersects(X)) return false;
    throw consistency_error("haven choice is not a component of G - boundary(X)");
  }

  bool contains(const EdgeSet& X) const { return orient(X) == std::optional<bool>(true); }

 private:
  std::shared_ptr<const Graph> g_;
  std::size_t order_;
};

using ProfilePtr = std::shared_ptr<const Profile>;

// A haven of order k+1: one component of G-S per separator S with |S| <= k,
// any two chosen components touching.
struct Haven {
  std::size_t order = 1;  // k+1
  std::map<VertexSet, VertexSet> choice;
};

// Explicit-table profile; the representation produced by enumeration.
class HavenProfile final : public Profile {
 public:
  HavenProfile(std::shared_ptr<const Graph> g, Haven h)
      : Profile(std::move(g), h.order), haven_(std::move(h)) {
    const Graph& gr = graph();
    for (const auto& [S, C] : haven_.choice) {
      check_input(S.universe() == gr.n() && C.universe() == gr.n(),
                  "haven table universe mismatch");
      check_input(S.count() <= k(), "haven table separator too large");
      check_input(C.any() && !C.intersects(S), "haven choice overlaps its separator");
    }
  }

  const Haven& haven() const { return haven_; }

  std::optional<VertexSet> choice(const VertexSet& S) const override {
    auto it = haven_.choice.find(S);
    check_input(it != haven_.choice.end(), "separator outside haven domain");
    return it->second;
  }

 private:
  Haven haven_;
};

// Lazily evaluated profile anchored at a nonempty connected vertex class (an
// end surrogate's frontier class, or a clique standing in for a dominating
// end). The chosen component of G-S is the one containing the whole class;
// separators meeting or splitting the class leave the choice undecided.
class ClassProfile final : public Profile {
 public:
  ClassProfile(std::shared_ptr<const Graph> g, std::size_t order, VertexSet cls, std::string name)
      : Profile(std::move(g), order), cls_(std::move(cls)), name_(std::move(name)) {
    const Graph& gr = graph();
    check_input(cls_.universe() == gr.n(), "class universe mismatch");
    check_input(cls_.any(), "empty anchor class");
    check_input(connected_class(gr), "anchor class must be connected");
  }

  const VertexSet& anchor_class() const { return cls_; }
  const std::string& name() const { return name_; }
  std::string describe() const override {
    return "profile(order=" + std::to_string(order()) + ", class=" + name_ + ")";
  }

  std::optional<VertexSet> choice(const VertexSet& S) const override {
    if (S.intersects(cls_)) return std::nullopt;
    VertexSet comp = graph().component_of(cls_.find_first(), S);
    if (!cls_.subset_of(comp)) return std::nullopt;
    return comp;
  }

 private:
  VertexSet cls_;
  std::string name_;

  bool connected_class(const Graph& g) const {
    VertexSet rest = g.all_vertices() - cls_;
    return g.component_of(cls_.find_first(), rest) == cls_;
  }
};

// Restriction to separations of order <= j; same choices, smaller domain.
class RestrictedProfile final : public Profile {
 public:
  RestrictedProfile(ProfilePtr base, std::size_t order)
      : Profile(base->graph_ptr(), order), base_(std::move(base)) {}
  std::optional<VertexSet> choice(const VertexSet& S) const override { return base_->choice(S); }
  std::string describe() const override {
    return base_->describe() + "|order<=" + std::to_string(k());
  }
  ProfilePtr base() const { return base_; }

 private:
  ProfilePtr base_;
};

// restriction P_j: order becomes min(j+1, order(P))
inline ProfilePtr restrict_profile(ProfilePtr P, std::size_t j) {
  if (j >= P->k()) return P;
  if (auto rp = std::dynamic_pointer_cast<const RestrictedProfile>(P))
    return std::make_shared<RestrictedProfile>(rp->base(), j + 1);
  return std::make_shared<RestrictedProfile>(std::move(P), j + 1);
}

struct ProfileSet {
  std::size_t r = r_infinity;
  std::vector<ProfilePtr> profiles;
};

namespace detail {

// Materialized mask form of a profile's haven over every separator of size
// <= k; undecided separators are absent from the maps.
struct MaskHaven {
  std::size_t order = 1;
  std::map<std::uint64_t, std::uint64_t> comp;    // separator -> chosen component
  std::map<std::uint64_t, std::uint64_t> bundle;  // separator -> s_{chosen component}
  std::size_t undecided = 0;

  std::optional<bool> orient(std::uint64_t x, std::uint64_t bd) const {
    auto it = bundle.find(bd);
    if (it == bundle.end()) return std::nullopt;
    if ((it->second & ~x) == 0) return true;
    if ((it->second & x) == 0) return false;
    throw consistency_error("haven bundle meets both sides of a separation");
  }
};

inline MaskHaven materialize(const Profile& P, const MaskIndex& idx) {
  MaskHaven t;
  t.order = P.order();
  const Graph& g = idx.graph();
  for_each_subset_upto(idx.n(), P.k(), [&](const std::vector<std::size_t>& pick) {
    VertexSet S(g.n());
    std::uint64_t sMask = 0;
    for (std::size_t v : pick) {
      S.set(v);
      sMask |= std::uint64_t{1} << v;
    }
    std::optional<VertexSet> C = P.choice(S);
    if (!C) {
      ++t.undecided;
      return true;
    }
    std::uint64_t cMask = C->word0();
    t.comp[sMask] = cMask;
    t.bundle[sMask] = idx.incident_union(cMask);
    return true;
  });
  return t;
}

}  // namespace detail

// ---- haven validation -------------------------------------------------------

struct HavenReport {
  bool ok = true;
  std::string detail;
};

inline bool masks_touch(const MaskIndex& idx, std::uint64_t C, std::uint64_t D) {
  return (C & D) != 0 || (idx.neighbourhood(C) & D) != 0;
}

// haven invariants: full domain, choices are components, pairwise touching,
// separator-independence
inline HavenReport check_haven(const Graph& g, const Haven& h, const OracleBudget& budget = {}) {
  MaskIndex idx(g, budget);
  std::size_t k = h.order - 1;
  HavenReport rep;
  std::size_t expected = 0;
  for_each_subset_upto(g.n(), k, [&](const std::vector<std::size_t>&) {
    ++expected;
    return true;
  });
  if (h.choice.size() != expected) {
    rep.ok = false;
    rep.detail = "haven domain incomplete: " + std::to_string(h.choice.size()) + " of " +
                 std::to_string(expected) + " separators";
    return rep;
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
  for (const auto& [S, C] : h.choice) {
    std::uint64_t s = S.word0(), c = C.word0();
    if (S.count() > k) {
      rep.ok = false;
      rep.detail = "separator larger than k";
      return rep;
    }
    if (!c || (c & s) || !idx.is_connected_set(c) || (idx.neighbourhood(c) & ~s)) {
      rep.ok = false;
      rep.detail = "chosen set is not a component of G - S";
      return rep;
    }
    entries.push_back({s, c});
  }
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (!masks_touch(idx, entries[i].second, entries[j].second)) {
        rep.ok = false;
        rep.detail = "chosen components do not touch";
        return rep;
      }
      // a component of both G-S and G-T must be chosen for both or neither
      auto component_of_both = [&](std::uint64_t c, std::uint64_t s) {
        return (c & s) == 0 && (idx.neighbourhood(c) & ~s) == 0;
      };
      if (component_of_both(entries[i].second, entries[j].first) &&
          entries[i].second != entries[j].second) {
        rep.ok = false;
        rep.detail = "separator-independence violated";
        return rep;
      }
      if (component_of_both(entries[j].second, entries[i].first) &&
          entries[j].second != entries[i].second) {
        rep.ok = false;
        rep.detail = "separator-independence violated";
        return rep;
      }
    }
  return rep;
}

namespace detail {

struct GoodnessWitness {
  std::uint64_t S = 0, T = 0;
  std::string why;
};

// goodness on the mask table; table must cover the full separator domain
inline std::optional<GoodnessWitness> goodness_violation(const MaskIndex& idx,
                                                         const MaskHaven& t) {
  std::size_t k = t.order - 1;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(t.comp.begin(), t.comp.end());
  std::vector<std::uint64_t> reach(entries.size());  // closed neighbourhood of choice
  for (std::size_t i = 0; i < entries.size(); ++i)
    reach[i] = entries[i].second | idx.neighbourhood(entries[i].second);
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i; j < entries.size(); ++j) {
      auto [S, C] = entries[i];
      auto [T, D] = entries[j];
      std::uint64_t U = (S | T) & reach[i] & reach[j];
      if (static_cast<std::size_t>(__builtin_popcountll(U)) > k) continue;
      std::uint64_t I = C & D;
      if (!I) return GoodnessWitness{S, T, "corner C&D empty"};
      check_consistent((idx.neighbourhood(I) & ~U) == 0,
                       "corner neighbourhood escapes the touching set");
      auto it = t.comp.find(U);
      check_consistent(it != t.comp.end(), "touching set missing from haven domain");
      // I is a union of components of G-U; the choice at U must be one of them.
      // Requiring equality would wrongly reject havens induced by genuine
      // profiles when the corner is disconnected (two parts joined by a pair
      // of bridges already produce such corners).
      if (it->second & ~I)
        return GoodnessWitness{S, T, "component chosen for U lies outside corner C&D"};
    }
  return std::nullopt;
}

}  // namespace detail

// good haven: for any chosen C (for S) and D (for T), whenever the set U of
// vertices of S cup T touching both C and D has at most k vertices, the
// component chosen for U is a part of C cap D. (C cap D is a disjoint union
// of components of G - U; when it is connected this says C cap D is chosen.)
inline bool is_good_haven(const Graph& g, const Haven& h, const OracleBudget& budget = {},
                          std::string* why = nullptr) {
  HavenReport hr = check_haven(g, h, budget);
  check_input(hr.ok, "is_good_haven: not a haven: " + hr.detail);
  MaskIndex idx(g, budget);
  detail::MaskHaven t;
  t.order = h.order;
  for (const auto& [S, C] : h.choice) {
    t.comp[S.word0()] = C.word0();
    t.bundle[S.word0()] = idx.incident_union(C.word0());
  }
  auto viol = detail::goodness_violation(idx, t);
  if (viol && why)
    *why = viol->why + " at separators {" +
           [&] {
             std::string s;
             for (const auto& id : g.ids_of_vertices(mask_to_bits(viol->S, g.n())))
               s += id + " ";
             return s;
           }() +
           "} {" +
           [&] {
             std::string s;
             for (const auto& id : g.ids_of_vertices(mask_to_bits(viol->T, g.n())))
               s += id + " ";
             return s;
           }() +
           "}";
  return !viol.has_value();
}

// Membership rule of a good haven: X in P iff s_C inside X for the chosen
// C = choice(boundary(X)). Rejects havens that are not good and good havens
// whose membership would contain a singleton (such havens exist; they are not
// induced by any profile).
inline ProfilePtr haven_to_profile(const Graph& g, const Haven& h,
                                   const OracleBudget& budget = {},
                                   const ProfileConfig& cfg = {}) {
  std::string why;
  check_input(is_good_haven(g, h, budget, &why), "haven_to_profile: haven is not good: " + why);
  MaskIndex idx(g, budget);
  std::size_t k = h.order - 1;
  // singleton members would violate the profile axioms
  for (std::size_t e = 0; e < g.m(); ++e) {
    std::uint64_t x = std::uint64_t{1} << e;
    if (cfg.singleton_rule == SingletonRule::single_vertex_side) break;
    std::uint64_t bd = idx.boundary(x);
    if (static_cast<std::size_t>(__builtin_popcountll(bd)) > k) continue;
    auto it = h.choice.find(mask_to_bits(bd, g.n()));
    check_consistent(it != h.choice.end(), "separator missing from haven domain");
    if ((idx.incident_union(it->second.word0()) & ~x) == 0)
      throw input_error("haven_to_profile: membership contains the singleton {" +
                        g.edge(e).id + "}");
  }
  if (cfg.singleton_rule == SingletonRule::single_vertex_side) {
    for (std::size_t v = 0; v < g.n(); ++v) {
      std::uint64_t x = idx.incident(v);
      if (!x) continue;
      std::uint64_t bd = idx.boundary(x);
      if (static_cast<std::size_t>(__builtin_popcountll(bd)) > k) continue;
      auto it = h.choice.find(mask_to_bits(bd, g.n()));
      check_consistent(it != h.choice.end(), "separator missing from haven domain");
      if ((idx.incident_union(it->second.word0()) & ~x) == 0)
        throw input_error("haven_to_profile: membership contains the single-vertex side at " +
                          g.vertex_id(v));
    }
  }
  auto gp = std::make_shared<const Graph>(g);
  return std::make_shared<HavenProfile>(gp, h);
}

// For each separator S, the unique component C of G-S with s_C a member of P.
inline Haven induced_haven(const Profile& P, const OracleBudget& budget = {}) {
  const Graph& g = P.graph();
  MaskIndex idx(g, budget);
  Haven h;
  h.order = P.order();
  for_each_subset_upto(g.n(), P.k(), [&](const std::vector<std::size_t>& pick) {
    VertexSet S(g.n());
    for (std::size_t v : pick) S.set(v);
    std::optional<VertexSet> found;
    for (const VertexSet& C : g.components(S)) {
      if (P.orient(incident_edges(g, C)) == std::optional<bool>(true)) {
        check_consistent(!found.has_value(),
                         "two components of the same separator are members");
        found = C;
      }
    }
    check_consistent(found.has_value(), "no component of a separator is a member");
    h.choice[S] = *found;
    return true;
  });
  return h;
}

// ---- axioms -----------------------------------------------------------------

struct AxiomReport {
  bool pass = true;
  std::string detail;
  std::size_t undecided = 0;  // truncation artifacts: separations oriented by neither side
};

inline AxiomReport check_profile_axioms(const Profile& P, const OracleBudget& budget = {},
                                        const ProfileConfig& cfg = {}) {
  const Graph& g = P.graph();
  std::size_t k = P.k();
  SeparationUniverse uni(g, k, budget);
  const MaskIndex& idx = uni.index();
  detail::MaskHaven t = detail::materialize(P, idx);
  AxiomReport rep;

  auto fail = [&](const std::string& msg) {
    rep.pass = false;
    if (rep.detail.empty()) rep.detail = msg;
  };

  std::vector<SepRec> members;
  for (const SepRec& r : uni.records()) {
    std::optional<bool> o = t.orient(r.x, r.bd);
    if (!o) {
      ++rep.undecided;
      continue;
    }
    // complement consistency and (P0)
    check_consistent(t.orient(idx.edge_complement(r.x), r.bd) == std::optional<bool>(!*o),
                     "orientation not antisymmetric under complement");
    if (*o) members.push_back(r);
  }
  if (rep.undecided)
    fail("truncation artifact: " + std::to_string(rep.undecided) +
         " separations are left undecided, so (P0) fails");
  check_capacity(members.size() <= budget.max_members, "too many members for axiom scan");

  // no singletons
  for (const SepRec& r : members)
    if (detail::is_singleton_mask(idx, r.x, cfg)) {
      fail("membership contains a singleton");
      break;
    }

  // (P1) no two members disjoint
  [&] {
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i; j < members.size(); ++j)
        if ((members[i].x & members[j].x) == 0) {
          fail("(P1) fails: two disjoint members");
          return;
        }
  }();

  // (P2) corners of members with small link overlap are members
  [&] {
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i; j < members.size(); ++j) {
        const SepRec &a = members[i], &b = members[j];
        std::uint64_t L = MaskIndex::link_overlap(a.vx, a.vxc, b.vx, b.vxc);
        if (static_cast<std::size_t>(__builtin_popcountll(L)) > k) continue;
        std::uint64_t corner = a.x & b.x;
        std::uint64_t bd = idx.boundary(corner);
        check_consistent((bd & ~L) == 0, "corner boundary escapes L(X,Y)");
        if (t.orient(corner, bd) != std::optional<bool>(true)) {
          fail("(P2) fails: corner of two members is not a member");
          return;
        }
      }
  }();

  // (P3) every member contains a componental member
  [&] {
    for (const SepRec& r : members) {
      bool found = false;
      for (const SepRec& c : members)
        if (c.componental && (c.x & ~r.x) == 0) {
          found = true;
          break;
        }
      if (!found) {
        fail("(P3) fails: member without componental member inside");
        return;
      }
    }
  }();

  return rep;
}

// ---- robustness ---------------------------------------------------------------

struct RobustnessWitness {
  EdgeSet X, Y;
};

// r-robust: no separation X of order <= r and member Y of order l >= 1 with
// |L(X,Y)| < l, |L(X^c,Y)| < l and neither Y - X nor Y - X^c a member.
inline std::optional<RobustnessWitness> robustness_violation(const Profile& P, std::size_t r,
                                                             const OracleBudget& budget = {}) {
  const Graph& g = P.graph();
  std::size_t k = P.k();
  std::size_t rr = normalize_r(r, g);
  SeparationUniverse uni(g, k, budget);
  const MaskIndex& idx = uni.index();
  detail::MaskHaven t = detail::materialize(P, idx);

  struct Member {
    std::uint64_t y, vy, vyc;
    std::uint32_t ord;
  };
  std::vector<Member> members;
  for (const SepRec& rec : uni.records())
    if (rec.ord >= 1 && t.orient(rec.x, rec.bd) == std::optional<bool>(true))
      members.push_back({rec.x, rec.vx, rec.vxc, rec.ord});
  check_capacity(members.size() <= budget.max_members, "too many members for robustness scan");

  auto is_member = [&](std::uint64_t z) {
    std::uint64_t bd = idx.boundary(z);
    if (static_cast<std::size_t>(__builtin_popcountll(bd)) > k) return false;
    return t.orient(z, bd) == std::optional<bool>(true);
  };

  std::optional<RobustnessWitness> out;
  auto consider = [&](std::uint64_t x) {
    std::uint64_t xc = idx.edge_complement(x);
    if (xc < x) return true;  // the condition is symmetric in X and X^c
    std::uint64_t vx = idx.vertex_set(x), vxc = idx.vertex_set(xc);
    for (const Member& mem : members) {
      std::uint64_t L1 = MaskIndex::link_overlap(vx, vxc, mem.vy, mem.vyc);
      if (static_cast<std::size_t>(__builtin_popcountll(L1)) >= mem.ord) continue;
      std::uint64_t L2 = MaskIndex::link_overlap(vxc, vx, mem.vy, mem.vyc);
      if (static_cast<std::size_t>(__builtin_popcountll(L2)) >= mem.ord) continue;
      if (is_member(mem.y & ~x) || is_member(mem.y & x)) continue;
      out = RobustnessWitness{mask_to_bits(x, g.m()), mask_to_bits(mem.y, g.m())};
      return false;
    }
    return true;
  };

  if (rr >= g.n()) {
    // every separation has order at most |V|, so X ranges over all edge sets
    check_capacity(g.m() <= budget.max_powerset_edges,
                   "too many edges for an infinite-robustness scan");
    std::uint64_t total = std::uint64_t{1} << g.m();
    for (std::uint64_t x = 0; x < total; ++x)
      if (!consider(x)) break;
  } else {
    for (std::uint64_t x : enumerate_separation_masks(idx, rr, budget))
      if (!consider(x)) break;
  }
  return out;
}

inline bool is_r_robust(const Profile& P, std::size_t r, const OracleBudget& budget = {}) {
  return !robustness_violation(P, r, budget).has_value();
}

// ---- distinguishing -----------------------------------------------------------

inline bool distinguishes(const EdgeSet& X, const Profile& P, const Profile& Q) {
  std::size_t kmin = std::min(P.k(), Q.k());
  const Graph& g = P.graph();
  check_input(g.n() == Q.graph().n() && g.m() == Q.graph().m(),
              "distinguishes: profiles live on different graphs");
  check_input(X.universe() == g.m(), "distinguishes: edge set universe mismatch");
  if (order(g, X) > kmin) return false;
  std::optional<bool> a = P.orient(X), b = Q.orient(X);
  return a.has_value() && b.has_value() && *a != *b;
}

// exact minimum order of a distinguishing separation, by exhaustive search
inline std::size_t min_distinguishing_order(const Profile& P, const Profile& Q,
                                            const OracleBudget& budget = {}) {
  check_input(P.graph().n() == Q.graph().n() && P.graph().m() == Q.graph().m(),
              "min_distinguishing_order: profiles live on different graphs");
  std::size_t kmin = std::min(P.k(), Q.k());
  SeparationUniverse uni(P.graph(), kmin, budget);
  for (const SepRec& r : uni.records()) {  // sorted by order
    EdgeSet X = mask_to_bits(r.x, P.graph().m());
    std::optional<bool> a = P.orient(X), b = Q.orient(X);
    if (a.has_value() && b.has_value() && *a != *b) return r.ord;
  }
  throw capacity_error("profiles are not distinguished by any separation of order <= " +
                       std::to_string(kmin));
}

inline bool distinguishes_efficiently(const EdgeSet& X, const Profile& P, const Profile& Q,
                                      const OracleBudget& budget = {}) {
  if (!distinguishes(X, P, Q)) return false;
  return order(P.graph(), X) == min_distinguishing_order(P, Q, budget);
}

// ---- enumeration ----------------------------------------------------------------

namespace detail {

// DFS over haven choice tables in (separator size, lex) order with the
// touching prune; leaves are filtered by goodness and singleton-freeness.
inline std::vector<MaskHaven> search_havens(const MaskIndex& idx, std::size_t k,
                                            const OracleBudget& budget,
                                            const ProfileConfig& cfg) {
  std::vector<std::uint64_t> seps;
  for_each_subset_upto(idx.n(), k, [&](const std::vector<std::size_t>& pick) {
    std::uint64_t s = 0;
    for (std::size_t v : pick) s |= std::uint64_t{1} << v;
    seps.push_back(s);
    return true;
  });
  std::vector<std::vector<std::uint64_t>> comps(seps.size());
  for (std::size_t i = 0; i < seps.size(); ++i) comps[i] = idx.components(seps[i]);

  std::vector<MaskHaven> out;
  std::vector<std::uint64_t> chosen(seps.size(), 0), reach(seps.size(), 0);
  std::size_t nodes = 0;

  auto singleton_free = [&](const MaskHaven& t) {
    for (std::size_t e = 0; e < idx.m(); ++e) {
      std::uint64_t x = std::uint64_t{1} << e;
      if (cfg.singleton_rule == SingletonRule::single_vertex_side) break;
      std::uint64_t bd = idx.boundary(x);
      if (static_cast<std::size_t>(__builtin_popcountll(bd)) > k) continue;
      if (t.orient(x, bd) == std::optional<bool>(true)) return false;
    }
    if (cfg.singleton_rule == SingletonRule::single_vertex_side)
      for (std::size_t v = 0; v < idx.n(); ++v) {
        std::uint64_t x = idx.incident(v);
        if (!x) continue;
        std::uint64_t bd = idx.boundary(x);
        if (static_cast<std::size_t>(__builtin_popcountll(bd)) > k) continue;
        if (t.orient(x, bd) == std::optional<bool>(true)) return false;
      }
    return true;
  };

  auto recurse = [&](auto&& self, std::size_t i) -> void {
    check_capacity(++nodes <= budget.max_search_nodes, "haven search budget exceeded");
    if (i == seps.size()) {
      MaskHaven t;
      t.order = k + 1;
      for (std::size_t j = 0; j < seps.size(); ++j) {
        t.comp[seps[j]] = chosen[j];
        t.bundle[seps[j]] = idx.incident_union(chosen[j]);
      }
      if (goodness_violation(idx, t).has_value()) return;
      if (!singleton_free(t)) return;
      out.push_back(std::move(t));
      return;
    }
    for (std::uint64_t C : comps[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i; ++j)
        if (!(chosen[j] & C) && !(reach[j] & C)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen[i] = C;
      reach[i] = C | idx.neighbourhood(C);
      self(self, i + 1);
    }
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace detail

// All r-robust profiles of order k+1 on a connected graph, deduplicated by
// membership and deterministically ordered. The returned profiles carry the
// canonical induced haven (recomputed from membership).
inline ProfileSet enumerate_profiles(const Graph& g, std::size_t k, std::size_t r,
                                     const OracleBudget& budget = {},
                                     const ProfileConfig& cfg = {}) {
  check_input(g.connected(), "enumerate_profiles requires a connected graph");
  ProfileSet out;
  out.r = r;
  if (g.m() == 0) return out;  // the empty separation may not be a member
  MaskIndex idx(g, budget);
  SeparationUniverse uni(g, k, budget);

  std::vector<detail::MaskHaven> leaves = detail::search_havens(idx, k, budget, cfg);

  // dedupe by membership over the separation universe
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<detail::MaskHaven> unique;
  for (detail::MaskHaven& t : leaves) {
    std::vector<std::uint64_t> key;
    key.reserve(uni.records().size() / 2);
    for (const SepRec& rec : uni.records())
      if (t.orient(rec.x, rec.bd) == std::optional<bool>(true)) key.push_back(rec.x);
    if (seen.insert(std::move(key)).second) unique.push_back(std::move(t));
  }

  auto gp = std::make_shared<const Graph>(g);
  std::vector<ProfilePtr> result;
  for (const detail::MaskHaven& t : unique) {
    Haven h;
    h.order = k + 1;
    for (const auto& [s, c] : t.comp)
      h.choice[mask_to_bits(s, g.n())] = mask_to_bits(c, g.n());
    ProfilePtr p = std::make_shared<HavenProfile>(gp, std::move(h));
    if (is_r_robust(*p, r, budget)) result.push_back(std::move(p));
  }
  // canonical order: by the (separator, component) table
  std::sort(result.begin(), result.end(), [&](const ProfilePtr& a, const ProfilePtr& b) {
    const auto& ta = static_cast<const HavenProfile&>(*a).haven().choice;
    const auto& tb = static_cast<const HavenProfile&>(*b).haven().choice;
    return std::lexicographical_compare(
        ta.begin(), ta.end(), tb.begin(), tb.end(), [](const auto& x, const auto& y) {
          if (x.first != y.first) return x.first < y.first;
          return x.second < y.second;
        });
  });
  out.profiles = std::move(result);
  return out;
}

// Augment a profile set with all restrictions of its members, deduplicated by
// membership per order (exhaustive; desk scale).
inline ProfileSet close_under_restriction(const ProfileSet& ps, const OracleBudget& budget = {}) {
  ProfileSet out;
  out.r = ps.r;
  if (ps.profiles.empty()) return out;
  const Graph& g = ps.profiles.front()->graph();
  std::set<std::pair<std::size_t, std::vector<std::uint64_t>>> seen;
  std::vector<ProfilePtr> work;
  for (const ProfilePtr& p : ps.profiles)
    for (std::size_t j = p->k();; --j) {
      work.push_back(restrict_profile(p, j));
      if (j == 0) break;
    }
  // stable order: by order then by membership signature
  std::vector<std::pair<std::pair<std::size_t, std::vector<std::uint64_t>>, ProfilePtr>> keyed;
  for (const ProfilePtr& p : work) {
    SeparationUniverse uni(g, p->k(), budget);
    detail::MaskHaven t = detail::materialize(*p, uni.index());
    std::vector<std::uint64_t> key;
    for (const SepRec& rec : uni.records())
      if (t.orient(rec.x, rec.bd) == std::optional<bool>(true)) key.push_back(rec.x);
    keyed.push_back({{p->order(), std::move(key)}, p});
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [key, p] : keyed)
    if (seen.insert(key).second) out.profiles.push_back(p);
  return out;
}

}  // namespace sepkit
