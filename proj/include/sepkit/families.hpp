#pragma once
// Truncated realizations of the infinite example families. Each growth rule
// produces a chain of finite graphs G_d that grows monotonically by vertex and
// edge labels, together with end surrogates: per surrogate a frontier class at
// the truncation boundary and a ray region along which the end escapes.
// Domination and disjoint-ray structure is estimated per depth by max-flow.

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "flow.hpp"
#include "graph.hpp"
#include "profiles.hpp"

namespace sepkit {

struct TruncatedFamily {
  std::string family;     // growth rule id
  std::size_t depth = 0;  // truncation depth d
  std::size_t n_max = 0;  // realized layers (0 when the rule has none)
  std::shared_ptr<const Graph> graph;
  std::string root;
  std::vector<std::string> end_order;         // deterministic surrogate order
  std::map<std::string, VertexSet> frontier;  // end id -> frontier class
  std::map<std::string, VertexSet> ray;       // end id -> ray region (root path + class)
  std::map<std::string, bool> dominated_by_design;
  std::vector<std::size_t> level;  // per vertex: depth coordinate
};

namespace detail {

// Surrogate ends follow their canonical pattern with zeros forever, so the
// canonical form is the pattern with trailing zeros stripped: it is either
// empty or ends in '1', and stays the same name at every truncation depth.
inline std::string strip_zeros(std::string s) {
  while (!s.empty() && s.back() == '0') s.pop_back();
  return s;
}

inline std::string pad_zeros(std::string s, std::size_t len) {
  check_input(s.size() <= len, "pattern longer than the truncation depth");
  s.append(len - s.size(), '0');
  return s;
}

// Canonical patterns of eventually-zero 0-1-sequences, ordered by switch
// depth and then lexicographically. Prefixes of this list are stable as the
// bound grows, so surrogate indices never shift between depths.
inline std::vector<std::string> zero_tail_patterns(std::size_t max_len) {
  std::vector<std::string> out{""};
  for (std::size_t len = 1; len <= max_len; ++len)
    for (std::size_t x = 0; x < (std::size_t{1} << (len - 1)); ++x) {
      std::string p;
      for (std::size_t i = len - 1; i-- > 0;) p.push_back(((x >> i) & 1) ? '1' : '0');
      p.push_back('1');
      out.push_back(std::move(p));
    }
  return out;
}

// Whether tree node s lies on the ray of the end with canonical pattern q,
// i.e. s is a prefix of q followed by zeros forever.
inline bool on_ray(const std::string& q, const std::string& s) {
  if (s.size() <= q.size()) return std::equal(s.begin(), s.end(), q.begin());
  if (!std::equal(q.begin(), q.end(), s.begin())) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(q.size()), s.end(),
                     [](char c) { return c == '0'; });
}

inline std::string node_id(const std::string& pattern) { return "r" + pattern; }
inline std::string end_id(const std::string& pattern) { return "w" + pattern; }
inline std::string clone_id(std::size_t layer, const std::string& pattern) {
  return "h" + std::to_string(layer) + ":" + pattern;
}
inline std::string dom_id(const std::string& pattern) { return "dom:" + end_id(pattern); }

inline std::string alternating_pattern(std::size_t len) {
  std::string a;
  for (std::size_t i = 0; i < len; ++i) a.push_back(i % 2 ? '1' : '0');
  return a;
}

// All 0-1 strings of length 0..d in (length, lex) order.
inline std::vector<std::string> tree_patterns(std::size_t d) {
  std::vector<std::string> out{""};
  std::size_t first = 0;
  for (std::size_t len = 1; len <= d; ++len) {
    std::size_t last = out.size();
    for (std::size_t i = first; i < last; ++i) {
      out.push_back(out[i] + '0');
      out.push_back(out[i] + '1');
    }
    first = last;
  }
  std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

inline VertexSet ids_to_set(const Graph& g, const std::vector<std::string>& ids) {
  VertexSet s(g.n());
  for (const std::string& id : ids) s.set(g.vertex_index(id));
  return s;
}

inline void finish_family(TruncatedFamily& f,
                          std::vector<std::string> vertices,
                          const std::vector<std::pair<std::string, std::string>>& edges,
                          const std::map<std::string, std::vector<std::string>>& frontier_ids,
                          const std::map<std::string, std::vector<std::string>>& ray_ids,
                          const std::map<std::string, std::size_t>& levels) {
  f.graph = std::make_shared<Graph>(Graph::from_edge_list(std::move(vertices), edges));
  const Graph& g = *f.graph;
  f.level.assign(g.n(), 0);
  for (std::size_t v = 0; v < g.n(); ++v) f.level[v] = levels.at(g.vertex_id(v));
  VertexSet seen(g.n());
  for (const std::string& e : f.end_order) {
    VertexSet cls = ids_to_set(g, frontier_ids.at(e));
    check_consistent(cls.any(), "empty frontier class: " + e);
    check_consistent(!cls.intersects(seen), "frontier classes overlap at " + e);
    seen = seen | cls;
    f.frontier.emplace(e, cls);
    VertexSet r = ids_to_set(g, ray_ids.at(e));
    check_consistent(cls.subset_of(r), "ray region must contain the frontier class");
    f.ray.emplace(e, r);
  }
  check_consistent(g.connected(), "family truncation must be connected");
}

inline TruncatedFamily generate_binary(std::size_t d, bool dominators) {
  check_input(d >= 1, "binary truncation needs depth >= 1");
  TruncatedFamily f;
  f.family = dominators ? "dominated-binary" : "binary-tree";
  f.depth = d;
  f.root = node_id("");

  std::vector<std::string> verts;
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::size_t> levels;
  for (const std::string& s : tree_patterns(d)) {
    verts.push_back(node_id(s));
    levels[node_id(s)] = s.size();
    if (!s.empty()) edges.emplace_back(node_id(s.substr(0, s.size() - 1)), node_id(s));
  }

  std::map<std::string, std::vector<std::string>> frontier_ids, ray_ids;
  for (const std::string& q : zero_tail_patterns(d)) {
    std::string e = end_id(q);
    f.end_order.push_back(e);
    f.dominated_by_design[e] = dominators;
    std::string leaf = pad_zeros(q, d);
    frontier_ids[e] = {node_id(leaf)};
    std::vector<std::string> path;
    for (std::size_t i = 0; i <= d; ++i) path.push_back(node_id(leaf.substr(0, i)));
    ray_ids[e] = path;
    if (dominators) {
      std::string dv = dom_id(q);
      verts.push_back(dv);
      levels[dv] = d;
      for (const std::string& p : path) edges.emplace_back(dv, p);
    }
  }
  finish_family(f, std::move(verts), edges, frontier_ids, ray_ids, levels);
  return f;
}

inline TruncatedFamily generate_thin_thick(std::size_t d, std::size_t n_max) {
  check_input(d >= 4, "layered truncation needs depth >= 4");
  check_input(n_max >= 1, "layered truncation needs at least one layer");
  std::size_t c = (d + 1) / 2;
  std::vector<std::string> gamma = zero_tail_patterns(c);
  check_input(n_max <= gamma.size(), "layer count exceeds the realized tail-constant ends");

  TruncatedFamily f;
  f.family = "thin-thick";
  f.depth = d;
  f.n_max = n_max;
  f.root = node_id("");

  std::vector<std::string> verts;
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::size_t> levels;
  std::vector<std::string> nodes = tree_patterns(d);
  for (const std::string& s : nodes) {
    verts.push_back(node_id(s));
    levels[node_id(s)] = s.size();
    if (!s.empty()) edges.emplace_back(node_id(s.substr(0, s.size() - 1)), node_id(s));
  }

  // Layer m clones the tree minus the rays of the first m surrogates; each
  // surviving clone is joined to its original and keeps its tree edges.
  auto survives = [&](std::size_t m, const std::string& s) {
    for (std::size_t i = 0; i < m; ++i)
      if (on_ray(gamma[i], s)) return false;
    return true;
  };
  for (std::size_t m = 1; m <= n_max; ++m)
    for (const std::string& s : nodes) {
      if (!survives(m, s)) continue;
      std::string cv = clone_id(m, s);
      verts.push_back(cv);
      levels[cv] = s.size();
      edges.emplace_back(node_id(s), cv);
      if (!s.empty() && survives(m, s.substr(0, s.size() - 1)))
        edges.emplace_back(clone_id(m, s.substr(0, s.size() - 1)), cv);
    }

  std::map<std::string, std::vector<std::string>> frontier_ids, ray_ids;
  auto track = [&](const std::string& e, const std::string& full) {
    f.end_order.push_back(e);
    f.dominated_by_design[e] = false;
    std::vector<std::string> cls{node_id(full)};
    for (std::size_t m = 1; m <= n_max; ++m)
      if (survives(m, full)) cls.push_back(clone_id(m, full));
    frontier_ids[e] = cls;
    std::vector<std::string> region;
    for (std::size_t i = 0; i <= d; ++i) region.push_back(node_id(full.substr(0, i)));
    for (std::size_t i = 1; i < cls.size(); ++i) region.push_back(cls[i]);
    ray_ids[e] = region;
  };
  for (std::size_t n = 1; n <= n_max; ++n) track(end_id(gamma[n - 1]), pad_zeros(gamma[n - 1], d));
  track("walt", alternating_pattern(d));

  finish_family(f, std::move(verts), edges, frontier_ids, ray_ids, levels);
  return f;
}

inline std::string grid_base_id(std::size_t l, std::size_t i) {
  return "g:" + std::to_string(l) + "," + std::to_string(i);
}
inline std::string grid_strip_id(std::size_t k, std::size_t t, std::size_t s) {
  return "h" + std::to_string(k) + ":" + std::to_string(t) + "," + std::to_string(s);
}
// The glue path of strip k: base column-2 cells of rows 1..k, then cell (k,3).
inline std::string grid_glue_id(std::size_t k, std::size_t s) {
  return s < k ? grid_base_id(s + 1, 2) : grid_base_id(k, 3);
}

inline TruncatedFamily generate_grid(std::size_t d, std::size_t n_max) {
  check_input(d >= 2, "grid truncation needs depth >= 2");
  check_input(n_max >= 1, "grid truncation needs at least one strip");
  check_input(n_max <= d, "strip count exceeds the realized rows");

  TruncatedFamily f;
  f.family = "grid-product";
  f.depth = d;
  f.n_max = n_max;
  f.root = grid_base_id(1, 1);

  std::vector<std::string> verts;
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::size_t> levels;
  for (std::size_t l = 1; l <= d; ++l)
    for (std::size_t i = 1; i <= 3; ++i) {
      verts.push_back(grid_base_id(l, i));
      levels[grid_base_id(l, i)] = l;
      if (l > 1) edges.emplace_back(grid_base_id(l - 1, i), grid_base_id(l, i));
      if (i > 1) edges.emplace_back(grid_base_id(l, i - 1), grid_base_id(l, i));
    }
  for (std::size_t k = 1; k <= n_max; ++k)
    for (std::size_t t = 2; t <= d; ++t)
      for (std::size_t s = 0; s <= k; ++s) {
        verts.push_back(grid_strip_id(k, t, s));
        levels[grid_strip_id(k, t, s)] = t;
        edges.emplace_back(t == 2 ? grid_glue_id(k, s) : grid_strip_id(k, t - 1, s),
                           grid_strip_id(k, t, s));
        if (s > 0) edges.emplace_back(grid_strip_id(k, t, s - 1), grid_strip_id(k, t, s));
      }

  std::map<std::string, std::vector<std::string>> frontier_ids, ray_ids;
  for (std::size_t k = 1; k <= n_max; ++k) {
    std::string e = "w" + std::to_string(k);
    f.end_order.push_back(e);
    f.dominated_by_design[e] = false;
    std::vector<std::string> cls, region{grid_glue_id(k, 0)};
    for (std::size_t s = 0; s <= k; ++s) cls.push_back(grid_strip_id(k, d, s));
    for (std::size_t t = 2; t <= d; ++t) region.push_back(grid_strip_id(k, t, 0));
    for (std::size_t s = 1; s <= k; ++s) region.push_back(grid_strip_id(k, d, s));
    frontier_ids[e] = cls;
    ray_ids[e] = region;
  }
  finish_family(f, std::move(verts), edges, frontier_ids, ray_ids, levels);
  return f;
}

}  // namespace detail

inline TruncatedFamily generate(const std::string& family, std::size_t depth,
                                std::size_t n_max = 0) {
  if (family == "binary-tree") return detail::generate_binary(depth, false);
  if (family == "dominated-binary") return detail::generate_binary(depth, true);
  if (family == "thin-thick") return detail::generate_thin_thick(depth, n_max ? n_max : 2);
  if (family == "grid-product") return detail::generate_grid(depth, n_max ? n_max : 2);
  check_input(false, "unknown family: " + family);
  return {};
}

namespace detail {

inline void check_depths(const std::vector<std::size_t>& depths) {
  check_input(!depths.empty(), "no depths given");
  for (std::size_t i = 1; i < depths.size(); ++i)
    check_input(depths[i - 1] < depths[i], "depths must be strictly increasing");
}

}  // namespace detail

// Per listed depth, the largest fan of v-(ray region) paths that are pairwise
// vertex-disjoint except at v. A vertex dominating the end keeps feeding the
// fan as the ray grows; for an undominated end the fan stays bounded.
inline std::vector<std::size_t> domination_sequence(const TruncatedFamily& f,
                                                    const std::string& v_id,
                                                    const std::string& end,
                                                    const std::vector<std::size_t>& depths) {
  detail::check_depths(depths);
  check_input(f.frontier.count(end) != 0, "unknown end surrogate: " + end);
  std::vector<std::size_t> seq;
  for (std::size_t d : depths) {
    TruncatedFamily fd = generate(f.family, d, f.n_max);
    const Graph& g = *fd.graph;
    std::size_t v = g.vertex_index(v_id);
    check_input(fd.frontier.count(end) != 0, "end surrogate not realized at depth");
    check_input(!fd.frontier.at(end).test(v), "vertex lies in the frontier class");
    VertexSet targets = fd.ray.at(end);
    targets.reset(v);
    seq.push_back(fan_count(g, v, targets));
  }
  for (std::size_t i = 1; i < seq.size(); ++i)
    check_consistent(seq[i - 1] <= seq[i], "domination fan must grow with depth");
  return seq;
}

// Per listed depth, the maximum number of paths from the root region (all
// vertices of depth coordinate <= ceil(d/2)) to the frontier class, disjoint
// outside the terminals. Thin ends plateau at their ray bound; ends with many
// disjoint rays keep at least one path per realized layer.
inline std::vector<std::size_t> disjoint_ray_bound(const TruncatedFamily& f,
                                                   const std::string& end,
                                                   const std::vector<std::size_t>& depths) {
  detail::check_depths(depths);
  check_input(f.frontier.count(end) != 0, "unknown end surrogate: " + end);
  std::vector<std::size_t> seq;
  for (std::size_t d : depths) {
    check_input(d >= 4, "depth too shallow to separate the root region from the frontier");
    TruncatedFamily fd = generate(f.family, d, f.n_max);
    const Graph& g = *fd.graph;
    VertexSet cls = fd.frontier.at(end);
    VertexSet region(g.n());
    for (std::size_t v = 0; v < g.n(); ++v)
      if (fd.level[v] <= (d + 1) / 2) region.set(v);
    check_input(!region.intersects(cls), "frontier class reaches the root region");
    seq.push_back(min_vertex_cut(g, region, cls).value);
  }
  for (std::size_t i = 1; i < seq.size(); ++i)
    check_consistent(seq[i - 1] <= seq[i], "disjoint-ray bound must not shrink with depth");
  return seq;
}

// Flow heuristic for the domination flag: the end counts as dominated when
// some vertex off the ray region reaches almost the whole root path in one
// fan. By design the dominator fans into every ray vertex, while any other
// vertex only touches a bounded patch of the ray.
inline bool estimate_dominated(const TruncatedFamily& f, const std::string& end) {
  check_input(f.frontier.count(end) != 0, "unknown end surrogate: " + end);
  const Graph& g = *f.graph;
  const VertexSet& targets = f.ray.at(end);
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (targets.test(v)) continue;
    if (fan_count(g, v, targets) >= f.depth) return true;
  }
  return false;
}

// Profile of order k+1 anchored at the frontier class of the given surrogate.
inline ProfilePtr end_profile(const TruncatedFamily& f, const std::string& end, std::size_t k) {
  check_input(f.frontier.count(end) != 0, "unknown end surrogate: " + end);
  return std::make_shared<ClassProfile>(f.graph, k + 1, f.frontier.at(end), end);
}

}  // namespace sepkit
