#include <catch2/catch_amalgamated.hpp>

#include "horomodel/builders.hpp"
#include "horomodel/model.hpp"

using namespace horomodel;

namespace {

bool has_rule(const ValidationReport& r, const std::string& rule) {
  for (const auto& v : r.violations)
    if (v.rule == rule) return true;
  return false;
}

ModelEnd two_thick_blocks() {
  return build(FamilyParams{BoundedGeometryParams{2}}).model;
}

ModelEnd thin_pair() {
  return build(FamilyParams{IBoundedParams{{4}}}).model;
}

}  // namespace

TEST_CASE("empty model is rejected") {
  ModelEnd m;
  auto r = validate(m);
  REQUIRE_FALSE(r.valid());
  CHECK(has_rule(r, "nonempty"));
  CHECK(r.violations.front().message == "model must contain >=1 block");
}

TEST_CASE("well-formed families validate cleanly") {
  CHECK(validate(two_thick_blocks()).valid());
  CHECK(validate(thin_pair()).valid());
  CHECK(validate(build(FamilyParams{FluteParams{5}}).model).valid());
  CHECK(validate(build(FamilyParams{amalg_counterexample_params(3)}).model).valid());
  CHECK(validate(build(FamilyParams{split_counterexample_params(4)}).model).valid());
  CHECK(validate(build(FamilyParams{ThinAllParams{{64, 128}}}).model).valid());
}

TEST_CASE("block indices must be consecutive") {
  auto m = two_thick_blocks();
  m.blocks[1].index = 5;
  CHECK(has_rule(validate(m), "block-indices"));
}

TEST_CASE("tube invariants") {
  auto m = thin_pair();
  auto& tube = std::get<ThinBlock>(m.blocks[1].variant).tubes[0];

  SECTION("core length must be positive") {
    tube.core_length = 0.0;
    CHECK(has_rule(validate(m), "tube-core-length"));
  }
  SECTION("crossing tube needs at least one abutting block") {
    tube.left_count = 0;
    tube.right_count = 0;
    CHECK(has_rule(validate(m), "tube-total-count"));
  }
  SECTION("crossing tube must touch both horizontal boundaries") {
    for (auto& c : m.blocks[1].top.components) c.boundary_tubes.clear();
    auto r = validate(m);
    CHECK(has_rule(r, "crossing-placement"));
  }
}

TEST_CASE("thick blocks expose no tubes") {
  auto m = two_thick_blocks();
  CHECK(m.blocks[0].all_tubes().empty());
  CHECK(validate(m).valid());
}

TEST_CASE("split region parameter chain") {
  auto m = build(FamilyParams{split_counterexample_params(3)}).model;
  auto& sb = std::get<SplitBlock>(m.blocks[0].variant);
  sb.region_params.n = sb.region_params.l + sb.region_params.m - 1;
  auto r = validate(m);
  CHECK(has_rule(r, "split-region-params"));
  bool found = false;
  for (const auto& v : r.violations) {
    if (v.message.find("n_i >= l_i + m_i fails") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("hanging tube rules") {
  auto m = build(FamilyParams{split_counterexample_params(3)}).model;
  auto& sb = std::get<SplitBlock>(m.blocks[1].variant);
  REQUIRE_FALSE(sb.hanging_tubes.empty());

  SECTION("vertical extent below eta0") {
    sb.hanging_tubes[0].vertical_extent = 0.5;
    CHECK(has_rule(validate(m), "hanging-extent"));
  }
  SECTION("kind mismatch") {
    sb.hanging_tubes[0].kind = TubeKind::Crossing;
    auto r = validate(m);
    CHECK(has_rule(r, "hanging-kind"));
  }
}

TEST_CASE("component complexity floor is a pair of pants") {
  auto m = two_thick_blocks();
  m.blocks[0].bottom.components[0].complexity = 2;
  CHECK(has_rule(validate(m), "component-complexity"));
}

TEST_CASE("unknown boundary tube") {
  auto m = two_thick_blocks();
  m.blocks[0].top.components[0].boundary_tubes.insert("ghost");
  m.blocks[1].bottom.components[0].boundary_tubes.insert("ghost");
  CHECK(has_rule(validate(m), "unknown-tube"));
}

TEST_CASE("gluing requires matching surfaces") {
  auto m = two_thick_blocks();
  m.blocks[1].bottom.components[0].complexity = 5;
  CHECK(has_rule(validate(m), "gluing"));
}

TEST_CASE("vertical weights reference real components and are positive") {
  auto m = two_thick_blocks();
  SECTION("missing component") {
    m.blocks[0].vertical_weights = {{"S", "nope", 1.0}};
    CHECK(has_rule(validate(m), "vertical-weight"));
  }
  SECTION("nonpositive weight") {
    m.blocks[0].vertical_weights = {{"S", "S", 0.0}};
    CHECK(has_rule(validate(m), "vertical-weight"));
  }
}

TEST_CASE("tube span bounded by n_max") {
  ModelEnd m;
  m.surface_complexity = 6;
  Tube t;
  t.id = "T";
  t.core_length = 0.5;
  t.left_count = 1;
  const int n = 18;  // > n_max = 16
  for (int b = 0; b < n; ++b) {
    Block blk;
    blk.index = b;
    blk.variant = ThinBlock{{t}};
    blk.bottom = {b, {{"S", 6, {"T"}}}};
    blk.top = {b + 1, {{"S", 6, {"T"}}}};
    m.blocks.push_back(std::move(blk));
  }
  CHECK(has_rule(validate(m), "tube-span"));
}

TEST_CASE("meridian coefficient") {
  Tube t;
  t.id = "M";
  t.core_length = 0.25;
  t.twist = 4;
  t.left_count = 2;
  t.right_count = 2;
  auto [tw, n] = meridian_coefficient(t);
  CHECK(tw == 4.0);
  CHECK(n == 4.0);

  t.kind = TubeKind::HangingUpper;
  CHECK_THROWS_AS(meridian_coefficient(t), std::invalid_argument);
}

TEST_CASE("amalgamated interior cost") {
  AmalgamatedBlock a;
  a.amalgamation_params = {{1, 16}, {1, 32}};
  CHECK(a.interior_cost() == 4.0);
  a.amalgamation_params.clear();
  CHECK(a.interior_cost() == 1.0);  // floor
}

TEST_CASE("effective vertical weights default per variant") {
  auto m = two_thick_blocks();
  auto w = m.blocks[0].effective_vertical_weights();
  REQUIRE(w.size() == 1);
  CHECK(w[0].weight == 1.0);

  auto am = build(FamilyParams{amalg_counterexample_params(2)}).model;
  auto w2 = am.blocks[1].effective_vertical_weights();
  REQUIRE(w2.size() == 2);
  // block 2 carries j = 1..2, interior cost (1+1) + (1+1) = 4
  CHECK(w2[0].weight == 4.0);
}
