#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include <sepkit/torso.hpp>

#include "testutil.hpp"

using namespace sepkit;

namespace {

std::vector<std::string> sorted_ids(const Graph& g, const EdgeSet& x) {
  auto ids = g.ids_of_edges(x);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

TEST_CASE("nested_blocks") {
  Graph g = tu::path("abcd");
  CHECK(nested_blocks(g, {}) == std::vector<VertexSet>{g.all_vertices()});

  EdgeSet sa = incident_edges(g, tu::verts(g, {"a"}));
  auto blocks = nested_blocks(g, {sa});
  REQUIRE(blocks.size() == 2);
  std::vector<VertexSet> want = {tu::verts(g, {"a", "b"}), tu::verts(g, {"b", "c", "d"})};
  std::sort(want.begin(), want.end());
  CHECK(blocks == want);

  Graph db = tu::dumbbell();
  EdgeSet left = incident_edges(db, tu::verts(db, {"a", "b", "c"}));
  auto dblocks = nested_blocks(db, {left});
  REQUIRE(dblocks.size() == 2);
  std::vector<VertexSet> dwant = {tu::verts(db, {"a", "b", "c", "d"}),
                                  tu::verts(db, {"d", "e", "f"})};
  std::sort(dwant.begin(), dwant.end());
  CHECK(dblocks == dwant);
}

TEST_CASE("check_nested_set rejects crossing members") {
  Graph s = tu::star(4);
  EdgeSet f12 = tu::edges_of(s, {"c|x1", "c|x2"});
  EdgeSet f23 = tu::edges_of(s, {"c|x2", "c|x3"});
  CHECK_THROWS_AS(check_nested_set(s, {f12, f23}), input_error);
  CHECK_NOTHROW(check_nested_set(s, {f12}));
}

TEST_CASE("block_containing") {
  Graph g = tu::path("abcd");
  EdgeSet sa = incident_edges(g, tu::verts(g, {"a"}));
  auto blocks = nested_blocks(g, {sa});
  CHECK(block_containing(g, blocks, tu::verts(g, {"c", "d"})) == tu::verts(g, {"b", "c", "d"}));
  CHECK_THROWS_AS(block_containing(g, blocks, tu::verts(g, {"a", "d"})), input_error);
}

TEST_CASE("build_torso keeps real edges and adds virtual edges at boundaries") {
  // block of the whole graph: torso is the graph itself
  Graph g = tu::path("abcd");
  Torso whole = build_torso(g, {}, g.all_vertices());
  CHECK(whole.graph->n() == g.n());
  CHECK(whole.graph->m() == g.m());

  // path block: induced edges only, no virtual edge
  EdgeSet sa = incident_edges(g, tu::verts(g, {"a"}));
  Torso right = build_torso(g, {sa}, tu::verts(g, {"b", "c", "d"}));
  CHECK(right.graph->n() == 3);
  CHECK(right.graph->m() == 2);
  for (const Edge& e : right.graph->edges()) CHECK_FALSE(e.is_virtual);

  // 4-cycle with the corner cut off: the gap is closed by virtual edge b|d
  Graph c4 = tu::cycle("abcd");
  EdgeSet corner = incident_edges(c4, tu::verts(c4, {"a"}));
  Torso t = build_torso(c4, {corner}, tu::verts(c4, {"b", "c", "d"}));
  CHECK(t.graph->n() == 3);
  REQUIRE(t.graph->m() == 3);
  auto virt = t.graph->edge_index("virt:b|d");
  REQUIRE(virt.has_value());
  CHECK(t.graph->edge(*virt).is_virtual);

  // a non-block is rejected unless verification is waived
  CHECK_THROWS_AS(build_torso(c4, {corner}, tu::verts(c4, {"b", "c"})), input_error);
  CHECK_NOTHROW(build_torso(c4, {corner}, tu::verts(c4, {"b", "c"}), {}, false));
}

TEST_CASE("induce_separation") {
  Graph db = tu::dumbbell();
  EdgeSet left = incident_edges(db, tu::verts(db, {"a", "b", "c"}));

  // whole-graph block: identity on edge ids
  Torso whole = build_torso(db, {}, db.all_vertices());
  EdgeSet y = tu::edges_of(db, {"c|d"});
  CHECK(sorted_ids(*whole.graph, induce_separation(whole, {}, y)) ==
        std::vector<std::string>{"c|d"});
  CHECK(induce_separation(whole, {}, db.no_edges()).empty());

  // left block of the dumbbell keeps the bridge edge
  Torso lt = build_torso(db, {left}, tu::verts(db, {"a", "b", "c", "d"}));
  EdgeSet ly = induce_separation(lt, {left}, y);
  CHECK(sorted_ids(*lt.graph, ly) == std::vector<std::string>{"c|d"});
  // the induced boundary stays inside the original boundary
  VertexSet tbd = boundary(*lt.graph, ly);
  for (std::size_t v = tbd.find_first(); v != Bits::npos; v = tbd.find_next(v))
    CHECK(boundary(db, y).test(lt.to_host[v]));

  // 4-cycle: the separation crossing the removed corner maps to the virtual edge
  Graph c4 = tu::cycle("abcd");
  EdgeSet corner = incident_edges(c4, tu::verts(c4, {"a"}));
  Torso t = build_torso(c4, {corner}, tu::verts(c4, {"b", "c", "d"}));
  EdgeSet iy = induce_separation(t, {corner}, corner);
  CHECK(sorted_ids(*t.graph, iy) == std::vector<std::string>{"virt:b|d"});

  // non-nested input is rejected
  EdgeSet cross = tu::edges_of(c4, {"a|b", "b|c"});
  CHECK_THROWS_AS(induce_separation(t, {corner}, cross), input_error);
}

TEST_CASE("induce_haven") {
  Graph db = tu::dumbbell();
  auto ps = enumerate_profiles(db, 1, r_infinity);
  REQUIRE(ps.profiles.size() == 3);
  EdgeSet left = incident_edges(db, tu::verts(db, {"a", "b", "c"}));

  // identify the two triangle profiles by the sides they claim
  ProfilePtr pl, pr;
  for (const ProfilePtr& cand : ps.profiles) {
    if (cand->contains(incident_edges(db, tu::verts(db, {"a", "b"})))) pl = cand;
    if (cand->contains(incident_edges(db, tu::verts(db, {"e", "f"})))) pr = cand;
  }
  REQUIRE(pl);
  REQUIRE(pr);
  REQUIRE(pl->contains(left));
  REQUIRE_FALSE(pr->contains(left));

  VertexSet lblock = tu::verts(db, {"a", "b", "c", "d"});
  Torso lt = build_torso(db, {left}, lblock);

  Haven hl = induce_haven(lt, induced_haven(*pl));
  CHECK(hl.order == 2);
  CHECK(check_haven(*lt.graph, hl).ok);
  // at the separator {c} the induced haven still points at the triangle side
  VertexSet sc(lt.graph->n());
  sc.set(lt.graph->vertex_index("c"));
  CHECK(hl.choice.at(sc) == lt.graph->vertices_from_ids({"a", "b"}));

  // the right-leaning haven avoids the left block beyond the bridge: rejected
  CHECK_THROWS_AS(induce_haven(lt, induced_haven(*pr)), input_error);

  // whole-graph block: the haven comes back unchanged
  Torso whole = build_torso(db, {}, db.all_vertices());
  Haven base = induced_haven(*pl);
  Haven same = induce_haven(whole, base);
  CHECK(same.order == base.order);
  for (const auto& [s, c] : base.choice) {
    VertexSet ts = db.project_vertices(s, *whole.graph);
    CHECK(whole.graph->project_vertices(same.choice.at(ts), db) == c);
  }
}

TEST_CASE("induce_profile") {
  Graph db = tu::dumbbell();
  auto ps = enumerate_profiles(db, 1, r_infinity);
  REQUIRE(ps.profiles.size() == 3);
  EdgeSet left = incident_edges(db, tu::verts(db, {"a", "b", "c"}));
  ProfilePtr pl, pr;
  for (const ProfilePtr& cand : ps.profiles) {
    if (cand->contains(incident_edges(db, tu::verts(db, {"a", "b"})))) pl = cand;
    if (cand->contains(incident_edges(db, tu::verts(db, {"e", "f"})))) pr = cand;
  }
  REQUIRE(pl);
  REQUIRE(pr);

  VertexSet lblock = tu::verts(db, {"a", "b", "c", "d"});
  Torso lt = build_torso(db, {left}, lblock);

  ProfilePtr ind = induce_profile(lt, pl);
  CHECK(ind->order() == 2);
  CHECK(check_profile_axioms(*ind).pass);
  // the induced profile keeps pointing at the triangle
  EdgeSet tri = incident_edges(*lt.graph, lt.graph->vertices_from_ids({"a", "b"}));
  CHECK(ind->orient(tri) == std::optional<bool>(true));

  CHECK_THROWS_AS(induce_profile(lt, pr), input_error);
}

TEST_CASE("torso of a 2-connected block keeps only one virtual edge per gap") {
  // two squares joined by a bridge; cutting at the bridge leaves square blocks
  Graph g = tu::square_dumbbell();
  EdgeSet leftsq = incident_edges(g, tu::verts(g, {"a1", "a2", "a3", "a4"}));
  auto blocks = nested_blocks(g, {leftsq});
  REQUIRE(blocks.size() == 2);
  for (const VertexSet& b : blocks) {
    Torso t = build_torso(g, {leftsq}, b);
    // boundaries of the member are singletons inside each block: no virtuals
    for (const Edge& e : t.graph->edges()) CHECK_FALSE(e.is_virtual);
  }
}
