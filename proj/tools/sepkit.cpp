// Command-line front end: family generation, profile enumeration, nested
// distinguishing sets, decompositions, spanning trees, brute-force oracles,
// and a property suite. Exit codes: 0 success, 1 invariant failure, 2 input
// error, 3 capacity exceeded.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <sepkit/sepkit.hpp>

namespace {

using namespace sepkit;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  check_input(out.good(), "cannot write " + out_path);
  out << text;
}

std::string dumps(const json& j) { return j.dump(2) + "\n"; }

std::size_t parse_r(long long r) {
  return r < 0 ? r_infinity : static_cast<std::size_t>(r);
}

std::shared_ptr<const Graph> load_graph(const std::string& path) {
  return std::make_shared<const Graph>(graph_from_json(load_json(path)));
}

VertexSet parse_vertices(const Graph& g, const std::vector<std::string>& ids) {
  return g.vertices_from_ids(ids);
}

// ---- check-invariants: the property suite on one graph ----

struct SuiteResult {
  bool all_ok = true;
};

void suite_row(SuiteResult& sr, const std::string& name, bool ok) {
  std::cout << (ok ? "PASS  " : "FAIL  ") << name << "\n";
  sr.all_ok = sr.all_ok && ok;
}

void suite_skip(const std::string& name, const std::string& why) {
  std::cout << "SKIP  " << name << " (" << why << ")\n";
}

int run_suite(const Graph& g, std::size_t k, std::size_t r) {
  check_input(g.connected(), "the property suite needs a connected graph");
  OracleBudget budget;
  SuiteResult sr;
  SeparationUniverse uni(g, k, budget);
  const std::vector<SepRec>& recs = uni.records();

  if (g.m() <= budget.max_powerset_edges) {
    std::vector<std::uint64_t> fast = enumerate_separation_masks(uni.index(), k, budget);
    std::vector<std::uint64_t> slow = separation_masks_powerset(uni.index(), k, budget);
    suite_row(sr, "separator enumeration matches the power-set filter", fast == slow);
  } else {
    suite_skip("separator enumeration matches the power-set filter", "too many edges");
  }

  {
    // |L(X,Y)| + |L(X^c,Y^c)| = |bd(X)| + |bd(Y)| on a deterministic sample
    bool ok = true;
    std::size_t budget_pairs = 20000, step = 1;
    while (recs.size() && recs.size() * recs.size() / (step * step) > budget_pairs) ++step;
    for (std::size_t i = 0; i < recs.size() && ok; i += step)
      for (std::size_t j = 0; j < recs.size() && ok; j += step) {
        EdgeSet X = mask_to_bits(recs[i].x, g.m()), Y = mask_to_bits(recs[j].x, g.m());
        std::size_t lhs = link_overlap(g, X, Y).count() +
                          link_overlap(g, X.complement(), Y.complement()).count();
        ok = lhs == recs[i].ord + recs[j].ord;
      }
    suite_row(sr, "link identity over sampled separation pairs", ok);
  }

  {
    bool ok = true;
    for (const SepRec& rec : recs)
      ok = ok && order(g, mask_to_bits(rec.x, g.m())) ==
                     order(g, mask_to_bits(rec.x, g.m()).complement());
    suite_row(sr, "separation order is complement-invariant", ok);
  }

  ProfileSet ps;
  bool have_profiles = false;
  try {
    ps = enumerate_profiles(g, k, r, budget);
    have_profiles = true;
    std::cout << "      (" << ps.profiles.size() << " profiles of order " << k + 1 << ")\n";
  } catch (const capacity_error&) {
    suite_skip("profile axioms hold for every enumerated profile", "profile budget");
  }

  if (have_profiles) {
    bool ok = true;
    for (const ProfilePtr& p : ps.profiles) ok = ok && check_profile_axioms(*p, budget).pass;
    suite_row(sr, "profile axioms hold for every enumerated profile", ok);

    bool rt = true;
    for (const ProfilePtr& p : ps.profiles) {
      ProfilePtr back = haven_to_profile(g, induced_haven(*p, budget), budget);
      for (const SepRec& rec : recs) {
        EdgeSet X = mask_to_bits(rec.x, g.m());
        rt = rt && p->orient(X) == back->orient(X);
      }
      if (!rt) break;
    }
    suite_row(sr, "profile round-trips through its induced haven", rt);

    if (ps.profiles.size() >= 2) {
      try {
        NestedSystem ns = build_nested_distinguishing_set(g, r, ps.profiles);
        bool nested_ok = true;
        for (std::size_t i = 0; i < ns.members.size(); ++i)
          for (std::size_t j = i + 1; j < ns.members.size(); ++j)
            nested_ok = nested_ok && is_nested(ns.members[i], ns.members[j]);
        suite_row(sr, "distinguishing set is pairwise nested", nested_ok);

        bool eff = true;
        for (std::size_t i = 0; i < ps.profiles.size() && eff; ++i)
          for (std::size_t j = i + 1; j < ps.profiles.size() && eff; ++j) {
            std::size_t want = min_distinguishing_order(*ps.profiles[i], *ps.profiles[j], budget);
            bool found = false;
            for (const EdgeSet& X : ns.members)
              found = found || (order(g, X) == want &&
                                distinguishes(X, *ps.profiles[i], *ps.profiles[j]));
            eff = found;
          }
        suite_row(sr, "every profile pair is distinguished at the oracle minimum", eff);
      } catch (const capacity_error&) {
        suite_skip("distinguishing set checks", "distinguisher budget");
      }
    } else {
      suite_skip("distinguishing set checks", "fewer than two profiles");
    }
  }

  return sr.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sepkit;

  CLI::App app{"finite separation-calculus toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  // generate
  auto* gen = app.add_subcommand("generate", "realize a finite truncation of a graph family");
  std::string gen_family = "binary-tree", gen_out;
  std::size_t gen_depth = 4, gen_nmax = 0;
  bool gen_dot = false;
  gen->add_option("--family", gen_family,
                  "binary-tree | dominated-binary | thin-thick | grid-product")
      ->capture_default_str();
  gen->add_option("--depth", gen_depth, "truncation depth")->required();
  gen->add_option("--n-max", gen_nmax, "realized layers for layered families");
  gen->add_option("--out", gen_out, "output path (default stdout)");
  gen->add_flag("--dot", gen_dot, "emit the graph in DOT instead of JSON");
  gen->callback([&] {
    TruncatedFamily f = generate(gen_family, gen_depth, gen_nmax);
    emit(gen_dot ? graph_to_dot(*f.graph) : dumps(family_to_json(f)), gen_out);
  });

  // profiles
  auto* prof = app.add_subcommand("profiles", "enumerate robust profiles of a small graph");
  std::string prof_graph;
  std::size_t prof_k = 1;
  long long prof_r = -1;
  prof->add_option("--graph", prof_graph, "graph JSON")->required();
  prof->add_option("--k", prof_k, "orient all separations of order <= k")->required();
  prof->add_option("--r", prof_r, "robustness parameter, -1 for unbounded")
      ->capture_default_str();
  prof->callback([&] {
    std::shared_ptr<const Graph> g = load_graph(prof_graph);
    ProfileSet ps = enumerate_profiles(*g, prof_k, parse_r(prof_r));
    std::cout << ps.profiles.size() << " profiles of order " << prof_k + 1 << "\n";
    for (std::size_t i = 0; i < ps.profiles.size(); ++i)
      std::cout << i << ": " << ps.profiles[i]->describe() << "\n";
  });

  // distinguish
  auto* dis = app.add_subcommand("distinguish",
                                 "build a nested set distinguishing the given profiles");
  std::string dis_graph, dis_profiles, dis_out, dis_pool = "auto";
  long long dis_r = -1;
  std::size_t dis_cap = 0;
  dis->add_option("--graph", dis_graph, "graph JSON")->required();
  dis->add_option("--profiles", dis_profiles, "class-anchored profiles JSON")->required();
  dis->add_option("--r", dis_r, "robustness parameter, -1 for unbounded")
      ->capture_default_str();
  dis->add_option("--level-cap", dis_cap, "stop after this order level (0: |V|)");
  dis->add_option("--pool", dis_pool, "auto | exhaustive | harvest")->capture_default_str();
  dis->add_option("--out", dis_out, "output path (default stdout)");
  dis->callback([&] {
    std::shared_ptr<const Graph> g = load_graph(dis_graph);
    ProfileDoc doc = profiles_from_json(g, load_json(dis_profiles));
    DistinguishOptions opts;
    opts.level_cap = dis_cap;
    if (dis_pool == "auto") opts.pool = DistinguishOptions::Pool::automatic;
    else if (dis_pool == "exhaustive") opts.pool = DistinguishOptions::Pool::exhaustive;
    else if (dis_pool == "harvest") opts.pool = DistinguishOptions::Pool::harvest;
    else check_input(false, "unknown pool: " + dis_pool);
    NestedSystem ns = build_nested_distinguishing_set(*g, parse_r(dis_r), doc.profiles, opts);
    json out = nested_to_json(*g, ns.members);
    json certs = json::array();
    for (const NestedSystem::Certificate& c : ns.certificates)
      certs.push_back(json{{"p", c.p}, {"q", c.q}, {"member", c.member}, {"order", c.order}});
    out["certificates"] = certs;
    emit(dumps(out), dis_out);
  });

  // decompose
  auto* dec = app.add_subcommand(
      "decompose", "tree decomposition from a nested set or a family truncation");
  std::string dec_graph, dec_nested, dec_family, dec_out;
  std::size_t dec_rounds = 3;
  dec->add_option("--graph", dec_graph, "graph JSON (with --nested)");
  dec->add_option("--nested", dec_nested, "nested members JSON (block tree mode)");
  dec->add_option("--family", dec_family, "family JSON (iterated star mode)");
  dec->add_option("--rounds", dec_rounds, "refinement rounds in family mode")
      ->capture_default_str();
  dec->add_option("--out", dec_out, "output path (default stdout)");
  dec->callback([&] {
    TreeDecomposition td;
    std::shared_ptr<const Graph> g;
    if (!dec_family.empty()) {
      check_input(dec_graph.empty() && dec_nested.empty(),
                  "family mode takes no graph or nested input");
      TruncatedFamily f = family_from_json(load_json(dec_family));
      g = f.graph;
      td = recursive_end_tree_decomposition(f, dec_rounds);
    } else {
      check_input(!dec_graph.empty() && !dec_nested.empty(),
                  "block tree mode needs --graph and --nested");
      g = load_graph(dec_graph);
      td = nested_to_tree_decomposition(*g, nested_from_json(*g, load_json(dec_nested)));
    }
    TdReport rep = validate_td(*g, td);
    for (const std::string& v : rep.violations) std::cerr << "violation: " << v << "\n";
    check_consistent(rep.ok, "decomposition failed validation");
    json out = td_to_json(*g, td);
    out["adhesion"] = rep.adhesion;
    emit(dumps(out), dec_out);
  });

  // star
  auto* star = app.add_subcommand("star", "one-round star decomposition around a local part");
  std::string star_graph, star_ends, star_family, star_out;
  std::vector<std::string> star_w;
  star->add_option("--graph", star_graph, "graph JSON (with --ends and --w)");
  star->add_option("--ends", star_ends, "end surrogates JSON");
  star->add_option("--w", star_w, "local part vertex ids");
  star->add_option("--family", star_family, "family JSON (local part: the root)");
  star->add_option("--out", star_out, "output path (default stdout)");
  star->callback([&] {
    std::shared_ptr<const Graph> g;
    StarDecomposition sd;
    if (!star_family.empty()) {
      TruncatedFamily f = family_from_json(load_json(star_family));
      g = f.graph;
      VertexSet w(g->n());
      w.set(g->vertex_index(f.root));
      sd = star_decomposition(*g, w, surrogates_of(f));
    } else {
      check_input(!star_graph.empty() && !star_ends.empty() && !star_w.empty(),
                  "explicit mode needs --graph, --ends, and --w");
      g = load_graph(star_graph);
      std::vector<EndSurrogate> ends = surrogates_from_json(*g, load_json(star_ends));
      sd = star_decomposition(*g, parse_vertices(*g, star_w), ends);
    }
    emit(dumps(star_to_json(*g, sd)), star_out);
  });

  // spanning-tree
  auto* span = app.add_subcommand("spanning-tree",
                                  "end-faithful spanning tree of a family truncation");
  std::string span_family, span_out;
  std::size_t span_rounds = 3;
  span->add_option("--family", span_family, "family JSON")->required();
  span->add_option("--rounds", span_rounds, "refinement rounds")->capture_default_str();
  span->add_option("--out", span_out, "output path (default stdout)");
  span->callback([&] {
    TruncatedFamily f = family_from_json(load_json(span_family));
    EdgeSet tree = end_faithful_spanning_tree(f, span_rounds);
    json out{{"schema", schema_tag}, {"type", "spanning-tree"}, {"root", f.root},
             {"edges", edge_set_to_json(*f.graph, tree)}};
    emit(dumps(out), span_out);
  });

  // oracle
  auto* ora = app.add_subcommand("oracle", "exhaustive brute-force queries");
  ora->require_subcommand(1);
  auto* mino = ora->add_subcommand("min-order",
                                   "minimum order of a separation distinguishing two profiles");
  std::string mino_graph, mino_profiles;
  mino->add_option("--graph", mino_graph, "graph JSON")->required();
  mino->add_option("--profiles", mino_profiles, "profiles JSON with exactly two entries")
      ->required();
  mino->callback([&] {
    std::shared_ptr<const Graph> g = load_graph(mino_graph);
    ProfileDoc doc = profiles_from_json(g, load_json(mino_profiles));
    check_input(doc.profiles.size() == 2, "min-order takes exactly two profiles");
    std::cout << min_distinguishing_order(*doc.profiles[0], *doc.profiles[1]) << "\n";
  });
  auto* enu = ora->add_subcommand("enumerate", "count all separations of order <= k");
  std::string enu_graph;
  std::size_t enu_k = 1;
  enu->add_option("--graph", enu_graph, "graph JSON")->required();
  enu->add_option("--k", enu_k, "order bound")->required();
  enu->callback([&] {
    std::shared_ptr<const Graph> g = load_graph(enu_graph);
    std::vector<EdgeSet> seps = enumerate_separations(*g, enu_k);
    std::vector<std::size_t> per_order(enu_k + 1, 0);
    for (const EdgeSet& X : seps) ++per_order[order(*g, X)];
    std::cout << seps.size() << " separations of order <= " << enu_k << "\n";
    for (std::size_t o = 0; o <= enu_k; ++o)
      std::cout << "order " << o << ": " << per_order[o] << "\n";
  });

  // check-invariants
  auto* chk = app.add_subcommand("check-invariants",
                                 "run the property suite on a graph and print a table");
  std::string chk_graph;
  std::size_t chk_k = 1;
  long long chk_r = -1;
  chk->add_option("--graph", chk_graph, "graph JSON")->required();
  chk->add_option("--k", chk_k, "order bound for the suite")->required();
  chk->add_option("--r", chk_r, "robustness parameter, -1 for unbounded")
      ->capture_default_str();
  chk->callback([&] {
    std::shared_ptr<const Graph> g = load_graph(chk_graph);
    rc = run_suite(*g, chk_k, parse_r(chk_r));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const capacity_error& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return 3;
  } catch (const consistency_error& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
