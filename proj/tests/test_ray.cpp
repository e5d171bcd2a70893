#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "horomodel/builders.hpp"
#include "horomodel/metric_graph.hpp"
#include "horomodel/ray.hpp"

using namespace horomodel;

namespace {

DeficitProfile profile_of(const MetricGraph& g, const Strategy& s, int horizon) {
  auto ray = trace_ray(g, s, horizon);
  return deficit_profile(g, ray);
}

}  // namespace

TEST_CASE("deficit is nonnegative and non-decreasing") {
  std::vector<BuildResult> builds;
  builds.push_back(build(FamilyParams{BoundedGeometryParams{25}}));
  builds.push_back(build(FamilyParams{i_bounded_params(6)}));
  builds.push_back(build(FamilyParams{amalg_counterexample_params(5)}));
  builds.push_back(build(FamilyParams{split_counterexample_params(6)}));

  for (const auto& b : builds) {
    auto g = MetricGraph::discretize(b.model);
    for (const Strategy& s : {Strategy{MinimizingStrategy{}}, Strategy{VerticalStrategy{"S"}}}) {
      if (std::holds_alternative<VerticalStrategy>(s) && !g.contains("s:0000:S")) continue;
      auto profile = profile_of(g, s, g.levels());
      double prev = 0.0;
      for (const auto& sample : profile.samples) {
        CHECK(sample.delta >= 0.0);
        CHECK(sample.delta >= prev - 1e-9);
        prev = sample.delta;
      }
    }
  }
}

TEST_CASE("minimizing rays have zero deficit by construction") {
  auto g = MetricGraph::discretize(build(FamilyParams{i_bounded_params(5)}).model);
  auto profile = profile_of(g, MinimizingStrategy{}, g.levels());
  // Checkpoints sit on base-shortest paths up to segment concatenation slack:
  // each segment is itself geodesic, so deficit stays below one hop.
  for (const auto& s : profile.samples) CHECK(s.delta <= 2.0 * 2.0);
  CHECK(profile.trend.kind == TrendKind::Bounded);
}

TEST_CASE("trend fitting distinguishes the three shapes") {
  auto mk = [](std::vector<double> deltas) {
    std::vector<DeficitSample> s;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      s.push_back({static_cast<double>(i + 1), deltas[i], 0.1, 0});
    }
    return s;
  };

  SECTION("flat") {
    std::vector<double> d(40, 0.7);
    auto fit = rays::select_trend(mk(d));
    CHECK(fit.kind == TrendKind::Bounded);
    CHECK(fit.a == 0.7);
  }
  SECTION("zero") {
    std::vector<double> d(40, 0.0);
    auto fit = rays::select_trend(mk(d));
    CHECK(fit.kind == TrendKind::Bounded);
    CHECK(fit.a == 0.0);
  }
  SECTION("logarithmic") {
    std::vector<double> d;
    for (int i = 1; i <= 40; ++i) d.push_back(2.0 * std::log(static_cast<double>(i)));
    auto fit = rays::select_trend(mk(d));
    CHECK(fit.kind == TrendKind::Logarithmic);
    CHECK(fit.b == Catch::Approx(2.0).margin(0.1));
  }
  SECTION("linear") {
    std::vector<double> d;
    for (int i = 1; i <= 40; ++i) d.push_back(0.5 * i);
    auto fit = rays::select_trend(mk(d));
    CHECK(fit.kind == TrendKind::Linear);
    CHECK(fit.b == Catch::Approx(0.5).margin(0.01));
  }
}

TEST_CASE("winding inflates the deficit without bound") {
  auto g = MetricGraph::discretize(build(FamilyParams{i_bounded_params(10)}).model);
  const int horizon = g.levels();
  std::vector<long long> loops(horizon, 0);
  for (int l = 1; l < horizon; l += 2) loops[l] = 1LL << (l / 2 + 2);
  auto winding = profile_of(g, WindingStrategy{loops}, horizon);
  auto straight = profile_of(g, MinimizingStrategy{}, horizon);
  CHECK(winding.samples.back().delta > straight.samples.back().delta + 10.0);
  CHECK(winding.trend.kind != TrendKind::Bounded);
}

TEST_CASE("classification requires a horizon of at least 20 checkpoints") {
  auto g = MetricGraph::discretize(build(FamilyParams{BoundedGeometryParams{30}}).model);
  auto short_ray = trace_ray(g, MinimizingStrategy{}, 10);
  CHECK_THROWS_WITH(classify(g, short_ray, 8.0, 0.1),
                    "horizon too short for trend classification");
  auto long_ray = trace_ray(g, MinimizingStrategy{}, 30);
  auto v = classify(g, long_ray, 8.0, 0.1);
  CHECK(v.exiting);
  CHECK(v.almost_minimizing);
  CHECK(v.thick);
  REQUIRE(v.horosphere.has_value());
  CHECK(*v.horosphere == Horosphere::ProperlyEmbedded);
}

TEST_CASE("explicit rays detect non-exiting behavior") {
  auto g = MetricGraph::discretize(build(FamilyParams{BoundedGeometryParams{30}}).model);
  ExplicitStrategy bounce;
  for (int i = 0; i < 30; ++i) {
    const int level = i % 3;  // stuck near the bottom
    char buf[16];
    std::snprintf(buf, sizeof buf, "s:%04d:S", level);
    bounce.nodes.push_back(buf);
  }
  auto ray = trace_ray(g, bounce, 30);
  auto v = classify(g, ray, 8.0, 0.1);
  CHECK_FALSE(v.exiting);
  CHECK_FALSE(v.horosphere.has_value());
}

TEST_CASE("tail classification ignores the start of the ray") {
  // Same model, one ray burdened with an early detour: the asymptotic verdict
  // must agree with the clean ray's.
  auto g = MetricGraph::discretize(build(FamilyParams{i_bounded_params(10)}).model);
  const int horizon = g.levels();

  std::vector<long long> early(horizon, 0);
  early[1] = 4;  // small fixed detour near the base
  auto burdened = classify(g, trace_ray(g, WindingStrategy{early}, horizon), 8.0, 0.05);
  auto clean = classify(g, trace_ray(g, MinimizingStrategy{}, horizon), 8.0, 0.05);
  CHECK(burdened.thick == clean.thick);
  CHECK(burdened.almost_minimizing == clean.almost_minimizing);
}

TEST_CASE("per-block minimizing segments obey the local bound") {
  // Across an amalgamated block the minimizing ray's segment stays within
  // (D0 + 2L) + C of a straight crossing.
  const int D0 = 4;
  AmalgFamilyParams p;
  for (int b = 0; b < 10; ++b) {
    std::vector<AmalgParams> list;
    for (int j = 0; j < D0 / 2; ++j) list.push_back({1, 8});
    p.blocks.push_back(std::move(list));
  }
  auto g = MetricGraph::discretize(build(FamilyParams{p}).model);
  auto ray = trace_ray(g, MinimizingStrategy{}, g.levels());
  const double bound = (D0 + 2.0 * 1.0) + 8.0;
  for (std::size_t k = 1; k < ray.segments.size(); ++k) {
    CHECK(ray.segments[k].length <= bound);
  }
}

TEST_CASE("split family minimizing rays keep diving deeper") {
  auto p = split_counterexample_params(8);
  auto g = MetricGraph::discretize(build(FamilyParams{p}).model);
  auto ray = trace_ray(g, MinimizingStrategy{}, g.levels());
  const auto profile = deficit_profile(g, ray);
  // Blocks i >= 2 route through the hanging tube at depth >= ln(l_i) - 2.
  for (int i = 3; i <= 8; ++i) {
    const double l = static_cast<double>(p.blocks[i - 1].l);
    CHECK(profile.samples[i].depth >= std::log(l) - 2.0);
  }
}
