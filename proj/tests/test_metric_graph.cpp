#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "horomodel/builders.hpp"
#include "horomodel/metric_graph.hpp"

using namespace horomodel;

namespace {

// Exhaustive simple-path minimum, the independent check on Dijkstra.
double brute_force_distance(int n, const std::vector<std::tuple<int, int, double>>& edges, int a,
                            int b) {
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& [u, v, w] : edges) {
    adj[u].push_back({v, w});
    adj[v].push_back({u, w});
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(n, 0);
  std::function<void(int, double)> dfs = [&](int u, double acc) {
    if (acc >= best) return;
    if (u == b) {
      best = acc;
      return;
    }
    used[u] = 1;
    for (const auto& [v, w] : adj[u]) {
      if (!used[v]) dfs(v, acc + w);
    }
    used[u] = 0;
  };
  dfs(a, 0.0);
  return best;
}

struct RandomGraph {
  std::vector<std::string> ids;
  std::vector<std::tuple<int, int, double>> edges;
};

RandomGraph random_graph(std::mt19937& rng) {
  RandomGraph g;
  std::uniform_int_distribution<int> size_dist(2, 12);
  const int n = size_dist(rng);
  for (int i = 0; i < n; ++i) g.ids.push_back("v" + std::to_string(i));
  std::uniform_real_distribution<double> weight(0.1, 10.0);
  // Spanning chain keeps everything connected, then random extras.
  for (int i = 1; i < n; ++i) g.edges.push_back({i - 1, i, weight(rng)});
  std::uniform_int_distribution<int> extra_dist(0, n * 2);
  std::uniform_int_distribution<int> pick(0, n - 1);
  const int extras = extra_dist(rng);
  for (int e = 0; e < extras; ++e) {
    const int a = pick(rng), b = pick(rng);
    if (a != b) g.edges.push_back({a, b, weight(rng)});
  }
  return g;
}

}  // namespace

TEST_CASE("dijkstra agrees with exhaustive simple-path enumeration") {
  std::mt19937 rng(20260824);
  for (int trial = 0; trial < 200; ++trial) {
    auto rg = random_graph(rng);
    auto g = MetricGraph::from_edges(rg.ids, rg.edges);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(rg.ids.size()) - 1);
    const int a = g.find(rg.ids[pick(rng)]);
    const int b = g.find(rg.ids[pick(rng)]);
    // from_edges re-sorts by id; map indices through ids
    const auto& ia = g.node(a).id;
    const auto& ib = g.node(b).id;
    const int oa = std::stoi(ia.substr(1));
    const int ob = std::stoi(ib.substr(1));
    const double expected = brute_force_distance(static_cast<int>(rg.ids.size()), rg.edges, oa, ob);
    CAPTURE(trial, ia, ib);
    CHECK(g.shortest_distance(a, b) == expected);
  }
}

TEST_CASE("metric axioms on a discretized model") {
  auto m = build(FamilyParams{IBoundedParams{{4, 8}}}).model;
  auto g = MetricGraph::discretize(m);

  std::vector<int> sample;
  for (int i = 0; i < g.node_count(); i += std::max(1, g.node_count() / 12)) sample.push_back(i);

  for (int a : sample) {
    CHECK(g.shortest_distance(a, a) == 0.0);
    for (int b : sample) {
      const double ab = g.shortest_distance(a, b);
      CHECK(ab == g.shortest_distance(b, a));
      CHECK(ab >= 0.0);
      for (int c : sample) {
        CHECK(g.shortest_distance(a, c) <= ab + g.shortest_distance(b, c) + 1e-12);
      }
    }
  }
}

TEST_CASE("discretization is deterministic") {
  auto m = build(FamilyParams{split_counterexample_params(4)}).model;
  auto g1 = MetricGraph::discretize(m);
  auto g2 = MetricGraph::discretize(m);
  std::ostringstream a, b;
  g1.export_csv(a);
  g2.export_csv(b);
  CHECK(a.str() == b.str());

  REQUIRE(g1.node_count() == g2.node_count());
  auto r1 = g1.run_dijkstra({g1.base_node()});
  auto r2 = g2.run_dijkstra({g2.base_node()});
  CHECK(r1.dist == r2.dist);
  CHECK(r1.parent == r2.parent);
}

TEST_CASE("node ids are lexicographically ordered") {
  auto m = build(FamilyParams{FluteParams{3}}).model;
  auto g = MetricGraph::discretize(m);
  for (int i = 1; i < g.node_count(); ++i) {
    CHECK(g.node(i - 1).id < g.node(i).id);
  }
}

TEST_CASE("invalid model is refused with its report attached") {
  ModelEnd m;
  try {
    MetricGraph::discretize(m);
    FAIL("expected InvalidModelError");
  } catch (const InvalidModelError& e) {
    REQUIRE_FALSE(e.report.valid());
    CHECK(e.report.violations.front().rule == "nonempty");
  }
}

TEST_CASE("tube annulus crossing costs the full descent") {
  // Side L and side R of a crossing tube meet only at the core.  The flute
  // glues distinct components through each neck, so there is no surface
  // shortcut around the annulus.
  auto m = build(FamilyParams{FluteParams{2}}).model;
  auto g = MetricGraph::discretize(m);
  const auto& tube = std::get<ThinBlock>(m.blocks[0].variant).tubes[0];
  const int depth = std::max(1, static_cast<int>(std::ceil(tube.depth())));

  const int left = g.find("t:N0000:L:d00:p00000000");
  const int right = g.find("t:N0000:R:d00:p00000000");
  const int core = g.find("t:N0000:zcore");
  CHECK(g.rung_depth(core) == depth);

  const double cross = g.shortest_distance(left, right);
  // Descend depth rungs, touch the core twice, climb depth rungs.
  CHECK(cross >= 2.0 * depth);
  CHECK(g.shortest_distance(left, core) >= depth);
}

TEST_CASE("depth filter prunes deep rungs") {
  auto m = build(FamilyParams{IBoundedParams{{16}}}).model;
  auto g = MetricGraph::discretize(m);
  const int core = g.find("t:M0000:zcore");
  const int surface = g.find("s:0001:S");
  CHECK(g.shortest_distance(core, surface) > 0.0);
  QueryFilter shallow;
  shallow.max_depth = 0;
  CHECK_THROWS_AS(g.shortest_distance(core, surface, shallow), UnreachableError);
}

TEST_CASE("block thickness of a thick stack") {
  auto m = build(FamilyParams{BoundedGeometryParams{3}}).model;
  auto g = MetricGraph::discretize(m);
  for (int b = 0; b < 3; ++b) {
    CHECK(g.block_thickness(b) == 1.0);
  }
}

TEST_CASE("export formats") {
  auto m = build(FamilyParams{BoundedGeometryParams{2}}).model;
  auto g = MetricGraph::discretize(m);

  std::ostringstream csv;
  g.export_csv(csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "node_id_a,node_id_b,weight");
  int edges = 0;
  while (std::getline(lines, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
    ++edges;
  }
  CHECK(edges == 2);  // s0--s1, s1--s2

  std::ostringstream dot;
  g.export_dot(dot);
  CHECK(dot.str().rfind("graph model {", 0) == 0);
  CHECK(dot.str().find("\"s:0000:S\" -- \"s:0001:S\"") != std::string::npos);
}

TEST_CASE("injectivity radius floor outside tubes, decay inside") {
  auto m = build(FamilyParams{IBoundedParams{{8}}}).model;
  auto g = MetricGraph::discretize(m);
  const double eps0 = m.constants.eps0;
  for (int i = 0; i < g.node_count(); ++i) {
    const Node& n = g.node(i);
    if (std::holds_alternative<SurfaceLocus>(n.locus)) {
      CHECK(n.inj == eps0);
    } else if (const auto* r = std::get_if<TubeRungLocus>(&n.locus)) {
      CHECK(n.inj == std::max(1.0 / 16.0, eps0 * std::exp(-r->depth)));
    } else {
      CHECK(n.inj == 1.0 / 16.0);  // half the core length 1/8
    }
  }
}
