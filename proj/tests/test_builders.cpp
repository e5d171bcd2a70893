#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "horomodel/builders.hpp"
#include "horomodel/metric_graph.hpp"
#include "horomodel/ray.hpp"

using namespace horomodel;

TEST_CASE("every family validates and carries a consistent tally") {
  std::vector<BuildResult> builds;
  builds.push_back(build(FamilyParams{BoundedGeometryParams{6}}));
  builds.push_back(build(FamilyParams{FluteParams{6}}));
  builds.push_back(build(FamilyParams{i_bounded_params(4)}));
  builds.push_back(build(FamilyParams{amalg_counterexample_params(3)}));
  builds.push_back(build(FamilyParams{split_counterexample_params(4)}));
  builds.push_back(build(FamilyParams{ThinAllParams{{64, 128, 256}}}));

  for (const auto& b : builds) {
    CAPTURE(b.model.blocks.size());
    CHECK(validate(b.model).valid());
    CHECK(validate_hierarchy(b.hierarchy.geodesics, b.hierarchy.path).valid());
    CHECK(check_tally(b.model, b.hierarchy).valid());
  }
}

TEST_CASE("parameter invariants are enforced") {
  CHECK_THROWS_AS(build(FamilyParams{BoundedGeometryParams{0}}), std::invalid_argument);
  CHECK_THROWS_AS(build(FamilyParams{FluteParams{0}}), std::invalid_argument);
  CHECK_THROWS_AS(build(FamilyParams{IBoundedParams{{1}}}), std::invalid_argument);
  CHECK_THROWS_AS(build(FamilyParams{SplitFamilyParams{{{4, 4, 7}}}}), std::invalid_argument);
  CHECK_THROWS_AS(build(FamilyParams{ThinAllParams{{2}}}), std::invalid_argument);

  try {
    build(FamilyParams{SplitFamilyParams{{{4, 4, 7}}}});
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("n_i >= l_i + m_i fails at block 0") != std::string::npos);
  }
  try {
    build(FamilyParams{ThinAllParams{{8}}});
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("k_i*d/2 > 4*ln(k_i) + C fails") != std::string::npos);
  }
}

TEST_CASE("split family route costs favor the hanging tubes") {
  // Crossing the hanging annulus must beat both the crossing-tube annulus and
  // the compressed product region, otherwise the deep route is never taken.
  auto p = split_counterexample_params(6);
  auto m = build(FamilyParams{p}).model;
  auto g = MetricGraph::discretize(m);

  for (int b = 1; b <= 4; ++b) {
    const auto& rp = p.blocks[b - 1];  // hanging tube H(b-1) spans levels b-1, b
    // crude depth of each ladder from its boundary count
    const double h_depth = std::ceil(std::log1p(static_cast<double>(rp.l + rp.m)));
    const double t_depth = std::ceil(std::log1p(static_cast<double>(1 + rp.n)));
    // hanging crossing beats the crossing-tube annulus (core length 4 vs
    // 1/(l+m)) and beats the compressed product region (weight m)
    CHECK(2.0 * h_depth + 1.0 / (rp.l + rp.m) < 2.0 * t_depth + 4.0);
    CHECK(2.0 * h_depth < static_cast<double>(rp.m));
  }

  // The minimizing ray actually dives: its deepest rung at interior levels is
  // a hanging-tube rung.
  auto ray = trace_ray(g, MinimizingStrategy{}, g.levels());
  bool saw_hanging_depth = false;
  for (const auto& seg : ray.segments) {
    for (int v : seg.nodes) {
      const Node& n = g.node(v);
      if (!n.tube.empty() && n.tube[0] == 'H' && n.depth >= 2) saw_hanging_depth = true;
    }
  }
  CHECK(saw_hanging_depth);
}

TEST_CASE("thin-all blocks are cheaper through the tube than over the top") {
  ThinAllParams p{{64, 128}};
  auto m = build(FamilyParams{p}).model;
  auto g = MetricGraph::discretize(m);

  for (int b = 0; b < 2; ++b) {
    const int k = p.js[b];
    const double shallow = g.block_thickness(b, 0);
    const double deep = g.block_thickness(b);
    CHECK(shallow >= k * p.d / 2.0);
    CHECK(deep <= 4.0 * std::log(static_cast<double>(k)) + 6.0);
    CHECK(deep + p.C < shallow);
  }
}

TEST_CASE("flute necks pinch harder and harder") {
  auto m = build(FamilyParams{FluteParams{20}}).model;
  auto g = MetricGraph::discretize(m);
  for (int b = 0; b < 20; ++b) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "N%04d", b);
    const int core = g.find("t:" + std::string(buf) + ":zcore");
    CHECK(g.injectivity_radius(core) == 1.0 / (2.0 * (b + 1)));
  }
  // Every bottom-to-top crossing passes the core: thickness reflects the
  // pinch rather than staying bounded below.
  auto ray = trace_ray(g, MinimizingStrategy{}, g.levels());
  const auto profile = deficit_profile(g, ray);
  CHECK(profile.samples.back().inj <= 1.0 / (2.0 * 19.0));
}

TEST_CASE("i-bounded thin blocks alternate with thick ones") {
  auto p = i_bounded_params(4);
  auto b = build(FamilyParams{p});
  REQUIRE(b.model.blocks.size() == 8);
  for (int i = 0; i < 8; ++i) {
    if (i % 2 == 0) {
      CHECK(std::holds_alternative<ThickBlock>(b.model.blocks[i].variant));
    } else {
      const auto& tb = std::get<ThinBlock>(b.model.blocks[i].variant);
      REQUIRE(tb.tubes.size() == 1);
      const int n = p.twists[i / 2];
      CHECK(tb.tubes[0].total_count() == n);
      CHECK(tb.tubes[0].core_length == 1.0 / n);
    }
  }
}

TEST_CASE("amalgamated counterexample thickness grows like the block index") {
  auto m = build(FamilyParams{amalg_counterexample_params(6)}).model;
  auto g = MetricGraph::discretize(m);
  double prev = 0.0;
  for (int b = 0; b < 6; ++b) {
    const double th = g.block_thickness(b);
    const double interior = 2.0 * (b + 1);  // sum of (m_j + 1) over j = 1..b+1
    CHECK(th <= interior);
    CHECK(th > prev);
    prev = th;
  }
}
