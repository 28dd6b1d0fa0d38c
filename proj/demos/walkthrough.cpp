// End-to-end tour: build a small graph, find its robust profiles, separate
// them with one nested set, and print the resulting block tree. Then build a
// star decomposition around the root of a truncated binary tree.

#include <cstdio>
#include <string>

#include <sepkit/sepkit.hpp>

using namespace sepkit;

namespace {

std::string id_list(const Graph& g, const VertexSet& s) {
  std::string out;
  for (const std::string& id : g.ids_of_vertices(s)) {
    if (!out.empty()) out += ' ';
    out += id;
  }
  return out;
}

}  // namespace

int main() {
  // Two triangles joined by a bridge: one 2-robust profile per triangle.
  Graph g = Graph::from_edge_list({"a", "b", "c", "d", "e", "f"},
                                  {{"a", "b"}, {"b", "c"}, {"a", "c"},
                                   {"c", "d"}, {"d", "e"}, {"e", "f"}, {"d", "f"}});
  std::printf("graph: %zu vertices, %zu edges\n", g.n(), g.m());

  ProfileSet ps = enumerate_profiles(g, 1, r_infinity);
  std::printf("robust profiles of order 2: %zu\n", ps.profiles.size());
  for (const ProfilePtr& p : ps.profiles)
    std::printf("  %s\n", p->describe().c_str());

  NestedSystem ns = build_nested_distinguishing_set(g, r_infinity);
  std::printf("nested distinguishing set: %zu members\n", ns.members.size());
  for (const EdgeSet& x : ns.members)
    std::printf("  order %zu, boundary {%s}\n", order(g, x), id_list(g, boundary(g, x)).c_str());

  TreeDecomposition td = nested_to_tree_decomposition(g, ns.members);
  TdReport rep = validate_td(g, td);
  std::printf("block tree: %zu parts, adhesion %zu, valid: %s\n", td.size(),
              rep.adhesion, rep.ok ? "yes" : "no");
  for (const VertexSet& part : td.parts)
    std::printf("  part {%s}\n", id_list(g, part).c_str());

  // A depth-3 binary tree with its four shallowest end classes, decomposed
  // into a star around the root.
  TruncatedFamily f = generate("binary-tree", 3);
  const Graph& t = *f.graph;
  VertexSet w(t.n());
  w.set(t.vertex_index(f.root));
  StarDecomposition sd = star_decomposition(t, w, surrogates_of(f));
  std::printf("binary tree depth 3: star with center {%s} and %zu leaves\n",
              id_list(t, sd.center).c_str(), sd.leaves.size());
  for (std::size_t i = 0; i < sd.leaves.size(); ++i) {
    std::string ends;
    for (const std::string& e : sd.leaf_ends[i]) {
      if (!ends.empty()) ends += ' ';
      ends += e;
    }
    std::printf("  leaf {%s} hosting ends {%s}\n", id_list(t, sd.leaves[i]).c_str(),
                ends.c_str());
  }
  return 0;
}
