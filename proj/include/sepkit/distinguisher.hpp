#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flow.hpp"
#include "lift.hpp"
#include "profiles.hpp"
#include "torso.hpp"

namespace sepkit {

// X strongly disqualifies Y when |boundary(Y)| exceeds both |L(X,Y)| and
// |L(X^c,Y)|; X disqualifies Y when it strongly disqualifies Y or Y^c.
inline bool strongly_disqualifies(const Graph& g, const EdgeSet& X, const EdgeSet& Y) {
  std::size_t ordY = order(g, Y);
  return ordY > link_overlap(g, X, Y).count() && ordY > link_overlap(g, X.complement(), Y).count();
}

inline bool disqualifies(const Graph& g, const EdgeSet& X, const EdgeSet& Y) {
  return strongly_disqualifies(g, X, Y) || strongly_disqualifies(g, X, Y.complement());
}

namespace detail {

// the smaller of X and X^c; nestedness and disqualification tests do not care
// about orientation, so pools and R/S sets are kept in this form
inline EdgeSet canonical_orientation(const EdgeSet& X) {
  EdgeSet xc = X.complement();
  return xc < X ? xc : X;
}

// minimum distinguishing order, or nothing when the two profiles agree on
// every separation of their common domain
inline std::optional<std::size_t> try_min_distinguishing_order(const Profile& P,
                                                               const Profile& Q,
                                                               const OracleBudget& budget) {
  std::size_t kmin = std::min(P.k(), Q.k());
  SeparationUniverse uni(P.graph(), kmin, budget);
  for (const SepRec& r : uni.records()) {
    EdgeSet X = mask_to_bits(r.x, P.graph().m());
    std::optional<bool> a = P.orient(X), b = Q.orient(X);
    if (a.has_value() && b.has_value() && *a != *b) return r.ord;
  }
  return std::nullopt;
}

}  // namespace detail

// All separations of order at most k distinguishing two profiles of the set
// efficiently, in canonical orientation. Exhaustive; desk scale.
inline std::vector<EdgeSet> R_set(const Graph& g, std::size_t k, std::size_t /*r*/,
                                  const std::vector<ProfilePtr>& profiles,
                                  const OracleBudget& budget = {}) {
  // every efficient distinguisher realizes some pair's minimum order, so the
  // scan never needs to go above the largest pairwise minimum
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> want;
  std::size_t kk = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i)
    for (std::size_t j = i + 1; j < profiles.size(); ++j) {
      if (profiles[i]->order() != profiles[j]->order()) continue;
      auto mo = detail::try_min_distinguishing_order(*profiles[i], *profiles[j], budget);
      if (mo && *mo <= k) {
        want.push_back({{i, j}, *mo});
        kk = std::max(kk, *mo);
      }
    }
  std::set<EdgeSet> out;
  if (want.empty()) return {};
  SeparationUniverse uni(g, kk, budget);
  for (const SepRec& rec : uni.records()) {
    EdgeSet X = mask_to_bits(rec.x, g.m());
    for (const auto& [pq, mo] : want) {
      if (rec.ord != mo) continue;
      std::optional<bool> a = profiles[pq.first]->orient(X), b = profiles[pq.second]->orient(X);
      if (a.has_value() && b.has_value() && *a != *b) {
        out.insert(detail::canonical_orientation(X));
        break;
      }
    }
  }
  return {out.begin(), out.end()};
}

// The componental separations s_C of slack components: C a component of
// G - boundary(X) with boundary(s_C) a proper subset of boundary(X), for some
// X in R(k,r).
inline std::vector<EdgeSet> S_set(const Graph& g, std::size_t k, std::size_t r,
                                  const std::vector<ProfilePtr>& profiles,
                                  const OracleBudget& budget = {}) {
  std::set<EdgeSet> out;
  for (const EdgeSet& X : R_set(g, k, r, profiles, budget)) {
    VertexSet bd = boundary(g, X);
    for (const VertexSet& C : g.components(bd)) {
      EdgeSet sC = incident_edges(g, C);
      VertexSet sbd = boundary(g, sC);
      if (sbd.subset_of(bd) && !(sbd == bd)) out.insert(sC);
    }
  }
  return {out.begin(), out.end()};
}

struct NestedSystem {
  std::vector<EdgeSet> members;  // pairwise nested, sorted by (order, lex)
  struct Certificate {
    std::size_t p = 0, q = 0;   // indices into profiles
    std::size_t member = 0;     // index into members
    std::size_t order = 0;      // its order; equals the pair's minimum
  };
  std::vector<Certificate> certificates;
  std::vector<ProfilePtr> profiles;

  struct Stats {
    std::size_t levels = 0, torsos = 0, tilde_runs = 0, blocks = 0;
  } stats;
};

struct DistinguishOptions {
  OracleBudget budget{};
  ProfileConfig profile_config{};
  std::size_t level_cap = 0;  // 0: |V(G)|
  enum class Pool { automatic, exhaustive, harvest } pool = Pool::automatic;
};

// Per block of N: the profiles that still need a high-order separation. A
// profile lands in a block when some separation nested with N, of order above
// k and with its boundary inside the block, distinguishes it efficiently from
// another profile; the result maps it to its induced torso profile.
struct BlockProfiles {
  std::vector<VertexSet> blocks;
  std::vector<std::vector<ProfilePtr>> induced;  // parallel to blocks
};

inline BlockProfiles profile_sets_per_block(const Graph& g, const std::vector<EdgeSet>& N,
                                            const std::vector<ProfilePtr>& profiles,
                                            std::size_t k,
                                            const OracleBudget& budget = {}) {
  BlockProfiles out;
  out.blocks = nested_blocks(g, N, budget);
  out.induced.resize(out.blocks.size());

  std::vector<std::size_t> wanted;  // profile indices needing a home
  for (std::size_t i = 0; i < profiles.size(); ++i)
    for (std::size_t j = 0; j < profiles.size(); ++j) {
      if (i == j) continue;
      std::optional<std::size_t> mo =
          detail::try_min_distinguishing_order(*profiles[i], *profiles[j], budget);
      if (!mo || *mo <= k) continue;
      // a witness of the exact order, nested with N, with boundary in a block
      SeparationUniverse uni(g, *mo, budget);
      bool found = false;
      for (const SepRec& rec : uni.records()) {
        if (rec.ord != *mo) continue;
        EdgeSet Y = mask_to_bits(rec.x, g.m());
        if (!distinguishes(Y, *profiles[i], *profiles[j])) continue;
        bool nested_all = true;
        for (const EdgeSet& X : N) nested_all = nested_all && is_nested(Y, X);
        if (!nested_all) continue;
        VertexSet bd = boundary(g, Y);
        for (std::size_t b = 0; b < out.blocks.size() && !found; ++b)
          if (bd.subset_of(out.blocks[b])) found = true;
        if (found) break;
      }
      if (found) wanted.push_back(i);
      if (found) break;
    }

  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    Torso t = build_torso(g, N, out.blocks[b], budget);
    for (std::size_t i : wanted) {
      try {
        out.induced[b].push_back(induce_profile(t, profiles[i]));
      } catch (const input_error&) {
        // the profile's choices avoid this block; it belongs elsewhere
      }
    }
  }
  return out;
}

// Union of per-block lifted families with the ambient nested set. Each family
// is extended inside its own torso; members lifted from different blocks are
// nested with each other automatically, which is re-verified here.
inline NestedSystem lift_across_blocks(
    const Graph& g, const std::vector<EdgeSet>& N,
    const std::vector<std::pair<VertexSet, std::vector<EdgeSet>>>& families,
    const OracleBudget& budget = {}) {
  std::set<EdgeSet> acc(N.begin(), N.end());
  for (const auto& [B, L] : families) {
    if (L.empty()) continue;
    Torso t = build_torso(g, N, B, budget);
    TildeResult tr = tilde_extend(t, N, L);
    for (const EdgeSet& Y : tr.lifted) acc.insert(Y);
  }
  NestedSystem out;
  out.members.assign(acc.begin(), acc.end());
  std::sort(out.members.begin(), out.members.end(),
            [&](const EdgeSet& a, const EdgeSet& b) {
              std::size_t oa = order(g, a), ob = order(g, b);
              return oa != ob ? oa < ob : a < b;
            });
  for (std::size_t i = 0; i < out.members.size(); ++i)
    for (std::size_t j = i + 1; j < out.members.size(); ++j)
      check_consistent(is_nested(out.members[i], out.members[j]),
                       "lifted members from different blocks are not nested");
  return out;
}

namespace detail {

// A tracked pair of profiles descending through the torso levels. In harvest
// mode the terminal sets witness the two sides; they are the chosen components
// at the boundary of the pair's current nested efficient distinguisher.
struct LocalPair {
  std::size_t idx;  // index into the global pair list
  ProfilePtr P, Q;
  EdgeSet Y;  // efficient distinguisher nested with the ambient nested set
  VertexSet termP, termQ;
};

class Distinguisher {
 public:
  Distinguisher(const Graph& g, std::size_t r, std::vector<ProfilePtr> profiles,
                DistinguishOptions opts)
      : g_(g), r_(normalize_r(r, g)), opts_(std::move(opts)), profiles_(std::move(profiles)) {
    check_input(g_.connected(), "distinguishing requires a connected graph");
    switch (opts_.pool) {
      case DistinguishOptions::Pool::exhaustive: desk_ = true; break;
      case DistinguishOptions::Pool::harvest: desk_ = false; break;
      case DistinguishOptions::Pool::automatic:
        desk_ = g_.n() <= opts_.budget.max_mask_vertices &&
                g_.m() <= opts_.budget.max_mask_edges;
        break;
    }
    if (!desk_)
      for (const ProfilePtr& p : profiles_)
        check_input(anchor_of(p).has_value(),
                    "harvest mode requires class-anchored profiles: " + p->describe());
  }

  NestedSystem run() {
    build_pairs();
    std::size_t cap = opts_.level_cap ? opts_.level_cap : g_.n();
    for (std::size_t level = 1; pending_exists(); ++level) {
      check_consistent(level <= cap,
                       "level cap reached with undistinguished profile pairs remaining");
      ++out_.stats.levels;
      process_level(level);
    }
    finalize();
    return std::move(out_);
  }

 private:
  const Graph& g_;
  std::size_t r_;
  DistinguishOptions opts_;
  std::vector<ProfilePtr> profiles_;
  bool desk_ = true;

  struct PairWork {
    std::size_t p, q;
    std::size_t minord = 0;
    bool done = false;
    std::size_t cert_member = 0;  // index into N_ once done
  };
  std::vector<PairWork> pairs_;
  std::vector<EdgeSet> N_;
  NestedSystem out_;

  static std::optional<VertexSet> anchor_of(const ProfilePtr& p) {
    const Profile* cur = p.get();
    while (true) {
      if (auto* cp = dynamic_cast<const ClassProfile*>(cur)) return cp->anchor_class();
      if (auto* rp = dynamic_cast<const RestrictedProfile*>(cur)) {
        cur = rp->base().get();
        continue;
      }
      return std::nullopt;
    }
  }

  void build_pairs() {
    for (std::size_t i = 0; i < profiles_.size(); ++i)
      for (std::size_t j = i + 1; j < profiles_.size(); ++j) {
        if (profiles_[i]->order() != profiles_[j]->order()) continue;
        std::optional<std::size_t> mo;
        if (desk_) {
          mo = try_min_distinguishing_order(*profiles_[i], *profiles_[j], opts_.budget);
        } else {
          VertexSet a = *anchor_of(profiles_[i]), b = *anchor_of(profiles_[j]);
          if (a == b) continue;  // same surrogate at another order
          mo = min_vertex_cut(g_, a, b).value;
          check_consistent(*mo >= 1, "anchored profiles with a zero-order cut");
          if (*mo > profiles_[i]->k()) continue;  // not distinguishable at this order
        }
        if (!mo) continue;  // equal as profiles
        pairs_.push_back({i, j, *mo, false, 0});
      }
  }

  bool pending_exists() const {
    for (const PairWork& pw : pairs_)
      if (!pw.done) return true;
    return false;
  }

  // a separation of the pair's minimum order distinguishing it efficiently
  // and nested with every member of `nested`, on graph `h` (desk scan)
  std::optional<EdgeSet> desk_nested_efficient(const Graph& h, const Profile& P, const Profile& Q,
                                               std::size_t minord,
                                               const std::vector<EdgeSet>& nested) {
    SeparationUniverse uni(h, minord, opts_.budget);
    for (const SepRec& rec : uni.records()) {
      if (rec.ord != minord) continue;
      EdgeSet X = mask_to_bits(rec.x, h.m());
      std::optional<bool> a = P.orient(X), b = Q.orient(X);
      if (!a.has_value() || !b.has_value() || *a == *b) continue;
      bool ok = true;
      for (const EdgeSet& Z : nested) ok = ok && is_nested(X, Z);
      if (ok) return X;
    }
    return std::nullopt;
  }

  // harvest analogue: componental separations toward either side of each
  // minimum cut between the pair's terminal sets
  std::vector<EdgeSet> harvest_candidates(const Graph& h, const VertexSet& termP,
                                          const VertexSet& termQ) {
    std::vector<EdgeSet> cands;
    for (const VertexSet& S : all_min_cuts(h, termP, termQ, opts_.budget)) {
      if (S.empty()) continue;
      cands.push_back(separation_toward(h, S, termP));
      cands.push_back(separation_toward(h, S, termQ));
    }
    return cands;
  }

  std::optional<EdgeSet> harvest_nested_efficient(const Graph& h, const Profile& P,
                                                  const Profile& Q, std::size_t minord,
                                                  const VertexSet& termP, const VertexSet& termQ,
                                                  const std::vector<EdgeSet>& nested) {
    for (const EdgeSet& X : harvest_candidates(h, termP, termQ)) {
      check_consistent(order(h, X) == minord, "minimum cut candidate of unexpected order");
      std::optional<bool> a = P.orient(X), b = Q.orient(X);
      if (!a.has_value() || !b.has_value() || *a == *b) continue;
      bool ok = true;
      for (const EdgeSet& Z : nested) ok = ok && is_nested(X, Z);
      if (ok) return X;
    }
    return std::nullopt;
  }

  std::optional<EdgeSet> nested_efficient(const Graph& h, const LocalPair& lp, std::size_t minord,
                                          const std::vector<EdgeSet>& nested) {
    if (desk_) return desk_nested_efficient(h, *lp.P, *lp.Q, minord, nested);
    return harvest_nested_efficient(h, *lp.P, *lp.Q, minord, lp.termP, lp.termQ, nested);
  }

  // terminal sets for the next level: the components the two profiles choose
  // at the boundary of the pair's current distinguisher
  void refresh_terminals(const Graph& h, LocalPair& lp) {
    if (desk_) return;
    VertexSet bd = boundary(h, lp.Y);
    std::optional<VertexSet> cp = lp.P->choice(bd), cq = lp.Q->choice(bd);
    check_consistent(cp.has_value() && cq.has_value(),
                     "profile undecided at its own distinguisher's boundary");
    lp.termP = *cp;
    lp.termQ = *cq;
  }

  std::vector<ProfilePtr> closed_profiles(const std::vector<LocalPair>& lps) {
    ProfileSet ps;
    ps.r = r_;
    for (const LocalPair& lp : lps) {
      ps.profiles.push_back(lp.P);
      ps.profiles.push_back(lp.Q);
    }
    if (desk_) return close_under_restriction(ps, opts_.budget).profiles;
    // lazily closed: restrictions of anchored profiles stay anchored
    std::vector<ProfilePtr> out;
    for (const ProfilePtr& p : ps.profiles)
      for (std::size_t j = p->k();; --j) {
        out.push_back(restrict_profile(p, j));
        if (j == 0) break;
      }
    return out;
  }

  // R(level, r) inside a torso in harvest mode: verified efficient
  // distinguishers of the tracked pairs at their minimum order
  std::vector<EdgeSet> harvest_R(const Graph& h, const std::vector<LocalPair>& lps,
                                 std::size_t maxord) {
    std::set<EdgeSet> out;
    for (const LocalPair& lp : lps) {
      std::size_t mo = pairs_[lp.idx].minord;
      if (mo > maxord) continue;
      for (const EdgeSet& X : harvest_candidates(h, lp.termP, lp.termQ)) {
        std::optional<bool> a = lp.P->orient(X), b = lp.Q->orient(X);
        if (a.has_value() && b.has_value() && *a != *b) out.insert(canonical_orientation(X));
      }
    }
    return {out.begin(), out.end()};
  }

  std::vector<EdgeSet> slack_components(const Graph& h, const std::vector<EdgeSet>& R) {
    std::set<EdgeSet> out;
    for (const EdgeSet& X : R) {
      VertexSet bd = boundary(h, X);
      for (const VertexSet& C : h.components(bd)) {
        EdgeSet sC = incident_edges(h, C);
        VertexSet sbd = boundary(h, sC);
        if (sbd.subset_of(bd) && !(sbd == bd)) out.insert(sC);
      }
    }
    return {out.begin(), out.end()};
  }

  void process_level(std::size_t level) {
    // assign every undistinguished pair to the block its nested efficient
    // distinguisher points at; extendability of the current set is a theorem
    // and its failure a reportable inconsistency
    std::vector<VertexSet> blocks = nested_blocks(g_, N_, opts_.budget);
    out_.stats.blocks += blocks.size();
    std::map<std::size_t, std::vector<LocalPair>> by_block;  // index into blocks
    for (std::size_t pi = 0; pi < pairs_.size(); ++pi) {
      PairWork& pw = pairs_[pi];
      if (pw.done) continue;
      LocalPair lp{pi, profiles_[pw.p], profiles_[pw.q], EdgeSet(g_.m()), VertexSet(g_.n()),
                   VertexSet(g_.n())};
      if (!desk_) {
        lp.termP = *anchor_of(lp.P);
        lp.termQ = *anchor_of(lp.Q);
      }
      std::optional<EdgeSet> Y = nested_efficient(g_, lp, pw.minord, N_);
      check_consistent(Y.has_value(),
                       "no efficient distinguisher nested with the current set for pair " +
                           lp.P->describe() + " / " + lp.Q->describe());
      lp.Y = *Y;
      refresh_terminals(g_, lp);
      VertexSet bd = boundary(g_, lp.Y);
      std::optional<std::size_t> home;
      for (std::size_t b = 0; b < blocks.size(); ++b)
        if (bd.subset_of(blocks[b])) {
          check_consistent(!home.has_value(), "distinguisher boundary lies in two blocks");
          home = b;
        }
      check_consistent(home.has_value(), "distinguisher boundary lies in no block");
      by_block[*home].push_back(std::move(lp));
    }

    std::vector<EdgeSet> fresh;  // new members of N at this level
    std::map<std::size_t, std::size_t> certs;  // pair -> index into fresh
    for (auto& [b, lps] : by_block)
      process_block(level, blocks[b], lps, fresh, certs);

    std::size_t base = N_.size();
    std::vector<std::size_t> remap(fresh.size());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      auto it = std::find(N_.begin(), N_.end(), fresh[i]);
      if (it != N_.end()) {
        remap[i] = static_cast<std::size_t>(it - N_.begin());
      } else {
        remap[i] = N_.size();
        N_.push_back(fresh[i]);
      }
    }
    for (std::size_t i = base; i < N_.size(); ++i)
      for (std::size_t j = 0; j < N_.size(); ++j)
        check_consistent(is_nested(N_[i], N_[j]), "nested system lost nestedness");

    // every pair at this level's order must now be settled efficiently
    for (auto& [pi, fi] : certs) {
      PairWork& pw = pairs_[pi];
      const EdgeSet& X = N_[remap[fi]];
      std::optional<bool> a = profiles_[pw.p]->orient(X), bq = profiles_[pw.q]->orient(X);
      check_consistent(a.has_value() && bq.has_value() && *a != *bq,
                       "lifted member fails to distinguish its pair");
      check_consistent(order(g_, X) == pw.minord, "lifted member is not efficient");
      pw.done = true;
      pw.cert_member = remap[fi];
    }
    for (const PairWork& pw : pairs_)
      check_consistent(pw.done || pw.minord > level,
                       "pair left undistinguished at its minimum order's level");
  }

  // the two-stage torso descent of one block at one level
  void process_block(std::size_t level, const VertexSet& B, std::vector<LocalPair>& lps,
                     std::vector<EdgeSet>& fresh, std::map<std::size_t, std::size_t>& certs) {
    Torso TB = build_torso(g_, N_, B, opts_.budget, false);
    ++out_.stats.torsos;
    const Graph& tg = *TB.graph;

    std::vector<LocalPair> tlps;
    for (LocalPair& lp : lps) {
      LocalPair t{lp.idx,
                  induce_profile(TB, lp.P, desk_),
                  induce_profile(TB, lp.Q, desk_),
                  induce_separation(TB, N_, lp.Y),
                  VertexSet(tg.n()),
                  VertexSet(tg.n())};
      std::size_t mo = pairs_[lp.idx].minord;
      check_consistent(order(tg, t.Y) == mo, "induced distinguisher changed order");
      std::optional<bool> a = t.P->orient(t.Y), bq = t.Q->orient(t.Y);
      check_consistent(a.has_value() && bq.has_value() && *a != *bq,
                       "induced separation fails to distinguish the induced profiles");
      refresh_terminals(tg, t);
      tlps.push_back(std::move(t));
    }

    std::vector<ProfilePtr> tprofiles = closed_profiles(tlps);

    // no pair may be distinguishable below this level inside the torso
    if (desk_) {
      check_consistent(level == 0 || R_set(tg, level - 1, r_, tprofiles, opts_.budget).empty(),
                       "torso admits a distinguisher below the current level");
    } else {
      for (const LocalPair& t : tlps) {
        std::size_t flow = min_vertex_cut(tg, t.termP, t.termQ).value;
        check_consistent(flow == pairs_[t.idx].minord,
                         "torso flow disagrees with the pair's minimum order");
      }
    }

    // the slack-component set of this level's efficient distinguishers
    std::vector<EdgeSet> S = desk_ ? S_set(tg, level, r_, tprofiles, opts_.budget)
                                   : slack_components(tg, harvest_R(tg, tlps, level));
    for (std::size_t i = 0; i < S.size(); ++i)
      for (std::size_t j = i + 1; j < S.size(); ++j)
        check_consistent(is_nested(S[i], S[j]), "slack-component set is not nested");

    std::vector<VertexSet> blocks2 = nested_blocks(tg, S, opts_.budget);
    out_.stats.blocks += blocks2.size();
    std::map<std::size_t, std::vector<LocalPair>> by_block2;
    for (LocalPair& t : tlps) {
      std::optional<EdgeSet> Y2 = nested_efficient(tg, t, pairs_[t.idx].minord, S);
      check_consistent(Y2.has_value(),
                       "slack-component set is not extendable for a tracked pair");
      t.Y = *Y2;
      refresh_terminals(tg, t);
      VertexSet bd = boundary(tg, t.Y);
      std::optional<std::size_t> home;
      for (std::size_t b = 0; b < blocks2.size(); ++b)
        if (bd.subset_of(blocks2[b])) {
          check_consistent(!home.has_value(), "distinguisher boundary lies in two blocks");
          home = b;
        }
      check_consistent(home.has_value(), "distinguisher boundary lies in no block");
      by_block2[*home].push_back(std::move(t));
    }

    // members of the block-level nested set, in torso coordinates
    std::vector<EdgeSet> NB = S;
    std::map<std::size_t, std::size_t> certsB;  // pair -> index into NB
    for (auto& [b2, tl2] : by_block2)
      process_inner_block(level, TB, S, blocks2[b2], tl2, NB, certsB);

    for (std::size_t i = 0; i < NB.size(); ++i)
      for (std::size_t j = i + 1; j < NB.size(); ++j)
        check_consistent(is_nested(NB[i], NB[j]), "block-level set is not nested");

    // lift to the host graph compatibly with the ambient nested set
    TildeResult lift = tilde_extend(TB, N_, NB);
    ++out_.stats.tilde_runs;
    std::map<std::size_t, std::size_t> fresh_of;  // NB index -> fresh index
    for (std::size_t i = 0; i < lift.lifted.size(); ++i) {
      const EdgeSet& L = lift.lifted[i];
      if (L.empty() || L.complement().empty()) continue;  // carries no information
      fresh_of[i] = fresh.size();
      fresh.push_back(L);
    }
    for (auto& [pi, nbIdx] : certsB) {
      auto it = fresh_of.find(nbIdx);
      check_consistent(it != fresh_of.end(), "certifying member lifted to a trivial separation");
      certs[pi] = it->second;
    }
  }

  void process_inner_block(std::size_t level, const Torso& TB, const std::vector<EdgeSet>& S,
                           const VertexSet& B2, std::vector<LocalPair>& tl2,
                           std::vector<EdgeSet>& NB, std::map<std::size_t, std::size_t>& certsB) {
    const Graph& tg = *TB.graph;
    Torso TB2 = build_torso(tg, S, B2, opts_.budget, false);
    ++out_.stats.torsos;
    const Graph& tg2 = *TB2.graph;

    std::vector<LocalPair> lps2;
    for (LocalPair& t : tl2) {
      LocalPair u{t.idx,
                  induce_profile(TB2, t.P, desk_),
                  induce_profile(TB2, t.Q, desk_),
                  induce_separation(TB2, S, t.Y),
                  VertexSet(tg2.n()),
                  VertexSet(tg2.n())};
      std::size_t mo = pairs_[t.idx].minord;
      check_consistent(order(tg2, u.Y) == mo, "induced distinguisher changed order");
      std::optional<bool> a = u.P->orient(u.Y), bq = u.Q->orient(u.Y);
      check_consistent(a.has_value() && bq.has_value() && *a != *bq,
                       "induced separation fails to distinguish the induced profiles");
      refresh_terminals(tg2, u);
      lps2.push_back(std::move(u));
    }

    std::vector<ProfilePtr> profiles2 = closed_profiles(lps2);

    // this torso is clean: its own efficient distinguishers have no slack
    std::vector<EdgeSet> R2 = desk_ ? R_set(tg2, level, r_, profiles2, opts_.budget)
                                    : harvest_R(tg2, lps2, level);
    check_consistent(slack_components(tg2, R2).empty(),
                     "inner torso still admits slack components");

    // disqualification filter against efficient distinguishers of every order
    std::vector<EdgeSet> Rrr = desk_ ? R_set(tg2, r_, r_, profiles2, opts_.budget)
                                     : harvest_R(tg2, lps2, r_);

    // candidate pool: nontrivial tight separations of order <= level that no
    // member of R(r,r) disqualifies, greedily inserted in (order, lex) order
    std::vector<EdgeSet> pool;
    if (desk_) {
      SeparationUniverse uni(tg2, level, opts_.budget);
      std::set<EdgeSet> seen;
      for (const SepRec& rec : uni.records()) {
        EdgeSet X = mask_to_bits(rec.x, tg2.m());
        if (X.empty() || X.complement().empty()) continue;
        if (!is_tight(tg2, X)) continue;
        EdgeSet cx = canonical_orientation(X);
        if (!seen.insert(cx).second) continue;
        bool dq = false;
        for (const EdgeSet& Z : Rrr) dq = dq || disqualifies(tg2, Z, cx);
        if (!dq) pool.push_back(cx);
      }
    } else {
      std::set<EdgeSet> seen;
      for (const LocalPair& u : lps2) {
        if (pairs_[u.idx].minord > level) continue;
        for (const EdgeSet& X : harvest_candidates(tg2, u.termP, u.termQ)) {
          if (X.empty() || X.complement().empty()) continue;
          if (!is_tight(tg2, X)) continue;
          EdgeSet cx = canonical_orientation(X);
          if (!seen.insert(cx).second) continue;
          bool dq = false;
          for (const EdgeSet& Z : Rrr) dq = dq || disqualifies(tg2, Z, cx);
          if (!dq) pool.push_back(cx);
        }
      }
    }
    std::sort(pool.begin(), pool.end(), [&](const EdgeSet& a, const EdgeSet& b) {
      std::size_t oa = order(tg2, a), ob = order(tg2, b);
      if (oa != ob) return oa < ob;
      return a < b;
    });

    std::vector<EdgeSet> NB2;
    for (const EdgeSet& X : pool) {
      bool ok = true;
      for (const EdgeSet& Z : NB2) ok = ok && is_nested(X, Z);
      if (ok) NB2.push_back(X);
    }

    // every pair due at this level must be settled by the maximal tight set
    std::map<std::size_t, std::size_t> certs2;  // pair -> index into NB2
    for (const LocalPair& u : lps2) {
      if (pairs_[u.idx].minord > level) continue;
      std::optional<std::size_t> found;
      for (std::size_t i = 0; i < NB2.size() && !found; ++i) {
        if (order(tg2, NB2[i]) != pairs_[u.idx].minord) continue;
        std::optional<bool> a = u.P->orient(NB2[i]), bq = u.Q->orient(NB2[i]);
        if (a.has_value() && bq.has_value() && *a != *bq) found = i;
      }
      check_consistent(found.has_value(),
                       "maximal tight set fails to distinguish a pair at its level: " +
                           u.P->describe() + " / " + u.Q->describe());
      certs2[u.idx] = *found;
    }

    TildeResult lift = tilde_extend(TB2, S, NB2);
    ++out_.stats.tilde_runs;
    std::map<std::size_t, std::size_t> nb_of;
    for (std::size_t i = 0; i < lift.lifted.size(); ++i) {
      const EdgeSet& L = lift.lifted[i];
      if (L.empty() || L.complement().empty()) continue;
      nb_of[i] = NB.size();
      NB.push_back(L);
    }
    for (auto& [pi, i2] : certs2) {
      auto it = nb_of.find(i2);
      check_consistent(it != nb_of.end(), "certifying member lifted to a trivial separation");
      certsB[pi] = it->second;
    }
  }

  void finalize() {
    // deterministic member order, certificates remapped accordingly
    std::vector<std::size_t> perm(N_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      std::size_t oa = order(g_, N_[a]), ob = order(g_, N_[b]);
      if (oa != ob) return oa < ob;
      return N_[a] < N_[b];
    });
    std::vector<std::size_t> where(N_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) where[perm[i]] = i;
    std::vector<EdgeSet> sorted;
    sorted.reserve(N_.size());
    for (std::size_t i : perm) sorted.push_back(N_[i]);
    out_.members = std::move(sorted);
    out_.profiles = profiles_;
    for (const PairWork& pw : pairs_) {
      check_consistent(pw.done, "pair left undistinguished at completion");
      out_.certificates.push_back({pw.p, pw.q, where[pw.cert_member], pw.minord});
    }
  }
};

}  // namespace detail

// The iterative construction: level by level, per-block torsos are cleaned by
// their slack-component sets, maximal nested tight sets are grown inside the
// cleaned torsos, and everything is lifted back compatibly. The result is a
// nested set distinguishing every two distinct same-order profiles of the
// input set efficiently.
inline NestedSystem build_nested_distinguishing_set(const Graph& g, std::size_t r,
                                                    std::vector<ProfilePtr> profiles,
                                                    const DistinguishOptions& opts = {}) {
  detail::Distinguisher d(g, r, std::move(profiles), opts);
  return d.run();
}

// Desk-scale variant: enumerates all r-robust profiles of every order first.
inline NestedSystem build_nested_distinguishing_set(const Graph& g, std::size_t r,
                                                    const DistinguishOptions& opts = {}) {
  std::vector<ProfilePtr> all;
  for (std::size_t k = 1; k < g.n(); ++k) {
    ProfileSet ps = enumerate_profiles(g, k, r, opts.budget, opts.profile_config);
    if (ps.profiles.empty()) break;
    for (const ProfilePtr& p : ps.profiles) all.push_back(p);
  }
  DistinguishOptions o = opts;
  o.pool = DistinguishOptions::Pool::exhaustive;
  return build_nested_distinguishing_set(g, r, std::move(all), o);
}

}  // namespace sepkit
