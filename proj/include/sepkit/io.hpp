#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "decomposition.hpp"
#include "families.hpp"

namespace sepkit {

using nlohmann::json;

inline constexpr const char* schema_tag = "sepkit/1";

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  check_input(in.good(), "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw input_error("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void check_schema(const json& j, const std::string& type) {
  check_input(j.is_object(), "expected a JSON object");
  check_input(j.value("schema", "") == schema_tag, "missing or unknown schema tag");
  check_input(j.value("type", "") == type, "expected a document of type " + type);
}

inline json ids_json(const std::vector<std::string>& ids) { return json(ids); }

inline json vertex_set_to_json(const Graph& g, const VertexSet& S) {
  return json(g.ids_of_vertices(S));
}

inline VertexSet vertex_set_from_json(const Graph& g, const json& j) {
  check_input(j.is_array(), "vertex set must be an array of ids");
  return g.vertices_from_ids(j.get<std::vector<std::string>>());
}

inline json edge_set_to_json(const Graph& g, const EdgeSet& X) {
  return json(g.ids_of_edges(X));
}

inline EdgeSet edge_set_from_json(const Graph& g, const json& j) {
  check_input(j.is_array(), "edge set must be an array of ids");
  return g.edges_from_ids(j.get<std::vector<std::string>>());
}

inline json graph_to_json(const Graph& g) {
  json verts = json::array(), edges = json::array();
  for (std::size_t v = 0; v < g.n(); ++v) verts.push_back(g.vertex_id(v));
  for (const Edge& e : g.edges()) edges.push_back({g.vertex_id(e.u), g.vertex_id(e.v)});
  return json{{"schema", schema_tag}, {"type", "graph"}, {"vertices", verts},
              {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
  check_schema(j, "graph");
  check_input(j.contains("vertices") && j["vertices"].is_array(), "graph needs vertices");
  check_input(j.contains("edges") && j["edges"].is_array(), "graph needs edges");
  std::vector<std::string> verts = j["vertices"].get<std::vector<std::string>>();
  std::vector<std::pair<std::string, std::string>> edges;
  for (const json& e : j["edges"]) {
    check_input(e.is_array() && e.size() == 2, "each edge must be a pair of vertex ids");
    edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return Graph::from_edge_list(std::move(verts), edges);
}

inline json surrogates_to_json(const Graph& g, const std::vector<EndSurrogate>& ends) {
  json arr = json::array();
  for (const EndSurrogate& e : ends)
    arr.push_back(json{{"id", e.id}, {"class", vertex_set_to_json(g, e.cls)},
                       {"dominated", e.dominated}});
  return json{{"schema", schema_tag}, {"type", "ends"}, {"ends", arr}};
}

inline std::vector<EndSurrogate> surrogates_from_json(const Graph& g, const json& j) {
  check_schema(j, "ends");
  check_input(j.contains("ends") && j["ends"].is_array(), "ends document needs an ends array");
  std::vector<EndSurrogate> out;
  for (const json& e : j["ends"]) {
    check_input(e.is_object() && e.contains("id") && e.contains("class"),
                "each end needs an id and a class");
    out.push_back({e["id"].get<std::string>(), vertex_set_from_json(g, e["class"]),
                   e.value("dominated", false)});
  }
  return out;
}

// Class-anchored profiles given by name, anchor class, and a common order.
struct ProfileDoc {
  std::size_t order = 0;
  std::vector<ProfilePtr> profiles;
};

inline ProfileDoc profiles_from_json(std::shared_ptr<const Graph> g, const json& j) {
  check_schema(j, "profiles");
  check_input(j.contains("order") && j["order"].is_number_unsigned(),
              "profiles document needs an unsigned order");
  check_input(j.contains("profiles") && j["profiles"].is_array(),
              "profiles document needs a profiles array");
  ProfileDoc out;
  out.order = j["order"].get<std::size_t>();
  check_input(out.order >= 1, "profile order must be positive");
  for (const json& p : j["profiles"]) {
    check_input(p.is_object() && p.contains("name") && p.contains("class"),
                "each profile needs a name and a class");
    out.profiles.push_back(std::make_shared<ClassProfile>(
        g, out.order, vertex_set_from_json(*g, p["class"]), p["name"].get<std::string>()));
  }
  return out;
}

inline json nested_to_json(const Graph& g, const std::vector<EdgeSet>& members) {
  json arr = json::array();
  for (const EdgeSet& X : members)
    arr.push_back(json{{"order", order(g, X)}, {"edges", edge_set_to_json(g, X)}});
  return json{{"schema", schema_tag}, {"type", "nested"}, {"members", arr}};
}

inline std::vector<EdgeSet> nested_from_json(const Graph& g, const json& j) {
  check_schema(j, "nested");
  check_input(j.contains("members") && j["members"].is_array(),
              "nested document needs a members array");
  std::vector<EdgeSet> out;
  for (const json& m : j["members"]) {
    check_input(m.is_object() && m.contains("edges"), "each member needs an edge array");
    out.push_back(edge_set_from_json(g, m["edges"]));
  }
  return out;
}

inline json td_to_json(const Graph& g, const TreeDecomposition& td) {
  json parts = json::array();
  for (std::size_t i = 0; i < td.parts.size(); ++i)
    parts.push_back(json{{"vertices", vertex_set_to_json(g, td.parts[i])},
                         {"edges", edge_set_to_json(g, td.part_edges[i])}});
  json tree = json::array();
  for (const auto& [a, b] : td.tree_edges) tree.push_back({a, b});
  json out{{"schema", schema_tag}, {"type", "tree-decomposition"}, {"parts", parts},
           {"tree", tree}};
  if (td.root) out["root"] = *td.root;
  return out;
}

inline json star_to_json(const Graph& g, const StarDecomposition& sd) {
  json leaves = json::array();
  for (std::size_t i = 0; i < sd.leaves.size(); ++i)
    leaves.push_back(json{{"vertices", vertex_set_to_json(g, sd.leaves[i])},
                          {"ends", json(sd.leaf_ends[i])}});
  return json{{"schema", schema_tag}, {"type", "star-decomposition"},
              {"center", vertex_set_to_json(g, sd.center)}, {"leaves", leaves}};
}

inline json family_to_json(const TruncatedFamily& f) {
  check_input(f.graph != nullptr, "family without a realized graph");
  const Graph& g = *f.graph;
  json ends = json::array();
  for (const std::string& e : f.end_order)
    ends.push_back(json{{"id", e}, {"class", vertex_set_to_json(g, f.frontier.at(e))},
                        {"ray", vertex_set_to_json(g, f.ray.at(e))},
                        {"dominated", f.dominated_by_design.at(e)}});
  return json{{"schema", schema_tag}, {"type", "family"}, {"family", f.family},
              {"depth", f.depth},     {"n_max", f.n_max}, {"root", f.root},
              {"level", f.level},     {"graph", graph_to_json(g)}, {"ends", ends}};
}

inline TruncatedFamily family_from_json(const json& j) {
  check_schema(j, "family");
  for (const char* key : {"family", "depth", "root", "graph", "ends", "level"})
    check_input(j.contains(key), std::string("family document needs ") + key);
  TruncatedFamily f;
  f.family = j["family"].get<std::string>();
  f.depth = j["depth"].get<std::size_t>();
  f.n_max = j.value("n_max", std::size_t{0});
  f.graph = std::make_shared<const Graph>(graph_from_json(j["graph"]));
  f.root = j["root"].get<std::string>();
  check_input(f.graph->has_vertex(f.root), "family root is not a vertex");
  f.level = j["level"].get<std::vector<std::size_t>>();
  check_input(f.level.size() == f.graph->n(), "level array length mismatch");
  for (const json& e : j["ends"]) {
    check_input(e.is_object() && e.contains("id") && e.contains("class") && e.contains("ray"),
                "each family end needs id, class, and ray");
    std::string id = e["id"].get<std::string>();
    f.end_order.push_back(id);
    f.frontier[id] = vertex_set_from_json(*f.graph, e["class"]);
    f.ray[id] = vertex_set_from_json(*f.graph, e["ray"]);
    f.dominated_by_design[id] = e.value("dominated", false);
  }
  return f;
}

// Undirected DOT rendering; virtual torso edges come out dashed.
inline std::string graph_to_dot(const Graph& g, const std::string& name = "G") {
  std::string out = "graph " + name + " {\n";
  for (std::size_t v = 0; v < g.n(); ++v) out += "  \"" + g.vertex_id(v) + "\";\n";
  for (const Edge& e : g.edges()) {
    out += "  \"" + g.vertex_id(e.u) + "\" -- \"" + g.vertex_id(e.v) + "\"";
    if (e.is_virtual) out += " [style=dashed]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace sepkit
