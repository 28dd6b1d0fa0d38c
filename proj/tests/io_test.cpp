#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include <sepkit/io.hpp>
#include <sepkit/torso.hpp>

#include "testutil.hpp"

using namespace sepkit;

TEST_CASE("graph JSON round-trip") {
  Graph g = tu::dumbbell();
  json j = graph_to_json(g);
  CHECK(j["schema"] == schema_tag);
  CHECK(j["type"] == "graph");
  Graph h = graph_from_json(j);
  REQUIRE(h.n() == g.n());
  REQUIRE(h.m() == g.m());
  for (std::size_t v = 0; v < g.n(); ++v) CHECK(h.vertex_id(v) == g.vertex_id(v));
  for (const Edge& e : g.edges()) CHECK(h.edge_index(e.id).has_value());
  CHECK(graph_to_json(h) == j);
}

TEST_CASE("graph JSON guards") {
  CHECK_THROWS_AS(graph_from_json(json{{"type", "graph"}}), input_error);
  CHECK_THROWS_AS(graph_from_json(json{{"schema", schema_tag}, {"type", "nested"}}),
                  input_error);
  json bad{{"schema", schema_tag},
           {"type", "graph"},
           {"vertices", {"a", "b"}},
           {"edges", {{"a", "b", "a"}}}};
  CHECK_THROWS_AS(graph_from_json(bad), input_error);
}

TEST_CASE("vertex and edge set JSON round-trips") {
  Graph g = tu::dumbbell();
  VertexSet S = tu::verts(g, {"a", "c", "f"});
  CHECK(vertex_set_from_json(g, vertex_set_to_json(g, S)) == S);
  EdgeSet X = tu::edges_of(g, {"a|b", "c|d"});
  CHECK(edge_set_from_json(g, edge_set_to_json(g, X)) == X);
  CHECK_THROWS_AS(vertex_set_from_json(g, json{{"no", "array"}}), input_error);
  CHECK_THROWS_AS(edge_set_from_json(g, json::array({"z|z"})), input_error);
}

TEST_CASE("load_json reads files and rejects garbage") {
  const std::string good = "io_test_good.json";
  const std::string bad = "io_test_bad.json";
  {
    std::ofstream out(good);
    out << graph_to_json(tu::path("abc")).dump();
  }
  {
    std::ofstream out(bad);
    out << "{ this is not json";
  }
  CHECK(graph_from_json(load_json(good)).n() == 3);
  CHECK_THROWS_AS(load_json(bad), input_error);
  CHECK_THROWS_AS(load_json("does_not_exist_7781.json"), input_error);
  std::remove(good.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("end surrogate JSON round-trip") {
  TruncatedFamily f = generate("binary-tree", 2);
  const Graph& g = *f.graph;
  std::vector<EndSurrogate> ends = surrogates_of(f);
  std::vector<EndSurrogate> back = surrogates_from_json(g, surrogates_to_json(g, ends));
  REQUIRE(back.size() == ends.size());
  for (std::size_t i = 0; i < ends.size(); ++i) {
    CHECK(back[i].id == ends[i].id);
    CHECK(back[i].cls == ends[i].cls);
    CHECK(back[i].dominated == ends[i].dominated);
  }
  CHECK_THROWS_AS(surrogates_from_json(g, json{{"schema", schema_tag}, {"type", "ends"}}),
                  input_error);
}

TEST_CASE("profiles document builds class-anchored profiles") {
  auto g = std::make_shared<const Graph>(tu::dumbbell());
  json doc{{"schema", schema_tag},
           {"type", "profiles"},
           {"order", 2},
           {"profiles",
            {{{"name", "left"}, {"class", {"a", "b"}}},
             {{"name", "right"}, {"class", {"e", "f"}}}}}};
  ProfileDoc pd = profiles_from_json(g, doc);
  CHECK(pd.order == 2);
  REQUIRE(pd.profiles.size() == 2);
  CHECK(min_distinguishing_order(*pd.profiles[0], *pd.profiles[1]) == 1);

  doc["order"] = 0;
  CHECK_THROWS_AS(profiles_from_json(g, doc), input_error);
}

TEST_CASE("nested system JSON round-trip") {
  Graph g = tu::dumbbell();
  std::vector<EdgeSet> N{incident_edges(g, tu::verts(g, {"a", "b", "c"})),
                         tu::edges_of(g, {"a|b"})};
  json j = nested_to_json(g, N);
  CHECK(j["members"][0]["order"] == 1);
  CHECK(j["members"][1]["order"] == 2);
  std::vector<EdgeSet> back = nested_from_json(g, j);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == N[0]);
  CHECK(back[1] == N[1]);
}

TEST_CASE("tree and star decompositions export their shape") {
  Graph g = tu::dumbbell();
  std::vector<EdgeSet> N{incident_edges(g, tu::verts(g, {"a", "b", "c"}))};
  TreeDecomposition td = nested_to_tree_decomposition(g, N);
  json j = td_to_json(g, td);
  CHECK(j["type"] == "tree-decomposition");
  REQUIRE(j["parts"].size() == 2);
  CHECK(j["tree"].size() == 1);
  CHECK(j.contains("root"));

  TruncatedFamily f = generate("binary-tree", 2);
  VertexSet w(f.graph->n());
  w.set(f.graph->vertex_index(f.root));
  StarDecomposition sd = star_decomposition(*f.graph, w, surrogates_of(f));
  json sj = star_to_json(*f.graph, sd);
  CHECK(sj["type"] == "star-decomposition");
  CHECK(sj["leaves"].size() == 4);
  CHECK(sj["center"].size() == 3);
}

TEST_CASE("family JSON round-trip") {
  TruncatedFamily f = generate("thin-thick", 4, 2);
  json j = family_to_json(f);
  TruncatedFamily back = family_from_json(j);
  CHECK(back.family == f.family);
  CHECK(back.depth == f.depth);
  CHECK(back.n_max == f.n_max);
  CHECK(back.root == f.root);
  CHECK(back.end_order == f.end_order);
  CHECK(back.graph->n() == f.graph->n());
  CHECK(back.graph->m() == f.graph->m());
  for (const std::string& e : f.end_order) {
    CHECK(f.graph->ids_of_vertices(f.frontier.at(e)) ==
          back.graph->ids_of_vertices(back.frontier.at(e)));
    CHECK(f.graph->ids_of_vertices(f.ray.at(e)) ==
          back.graph->ids_of_vertices(back.ray.at(e)));
  }
  CHECK(family_to_json(back) == j);  // stable re-export
  CHECK_THROWS_AS(family_from_json(json{{"schema", schema_tag}, {"type", "family"}}),
                  input_error);
}

TEST_CASE("DOT export dashes virtual edges") {
  Graph g = tu::cycle("abcd");
  std::string plain = graph_to_dot(g);
  CHECK(plain.find("\"a\" -- \"b\"") != std::string::npos);
  CHECK(plain.find("style=dashed") == std::string::npos);

  std::vector<EdgeSet> N{incident_edges(g, tu::verts(g, {"a"}))};
  std::vector<VertexSet> blocks = nested_blocks(g, N);
  VertexSet far = block_containing(g, blocks, tu::verts(g, {"c"}));
  Torso t = build_torso(g, N, far);
  std::string dashed = graph_to_dot(*t.graph, "T");
  CHECK(dashed.find("style=dashed") != std::string::npos);
  CHECK(dashed.find("virt:b|d") != std::string::npos);
}
