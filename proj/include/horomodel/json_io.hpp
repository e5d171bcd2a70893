#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "horomodel/hierarchy.hpp"
#include "horomodel/model.hpp"

namespace horomodel {

// JSON (de)serialization for models and hierarchy annotations.  The format is
// a direct transliteration of the in-memory structures; round-tripping is the
// identity.

using nlohmann::json;

struct ModelDocument {
  ModelEnd model;
  std::optional<HierarchyAnnotation> hierarchy;
};

namespace jsonio {

inline json tube_to_json(const Tube& t) {
  json j{{"id", t.id},
         {"core_length", t.core_length},
         {"twist", t.twist},
         {"left_count", t.left_count},
         {"right_count", t.right_count},
         {"kind", to_string(t.kind)}};
  if (t.hanging()) j["vertical_extent"] = t.vertical_extent;
  if (!t.side_of_component.empty()) {
    json sides = json::object();
    for (const auto& [comp, side] : t.side_of_component) sides[comp] = std::string(1, side);
    j["sides"] = sides;
  }
  return j;
}

inline Tube tube_from_json(const json& j) {
  Tube t;
  t.id = j.at("id").get<std::string>();
  t.core_length = j.at("core_length").get<double>();
  t.twist = j.value("twist", 0);
  t.left_count = j.value("left_count", 0);
  t.right_count = j.value("right_count", 0);
  const std::string kind = j.value("kind", "crossing");
  if (kind == "crossing") {
    t.kind = TubeKind::Crossing;
  } else if (kind == "hanging_upper") {
    t.kind = TubeKind::HangingUpper;
  } else if (kind == "hanging_lower") {
    t.kind = TubeKind::HangingLower;
  } else {
    throw std::invalid_argument("unknown tube kind: " + kind);
  }
  t.vertical_extent = j.value("vertical_extent", 1.0);
  if (j.contains("sides")) {
    for (const auto& [comp, side] : j.at("sides").items()) {
      const auto s = side.get<std::string>();
      if (s != "L" && s != "R") throw std::invalid_argument("tube side must be L or R");
      t.side_of_component[comp] = s[0];
    }
  }
  return t;
}

inline json surface_to_json(const SplitSurfaceSpec& s) {
  json comps = json::array();
  for (const auto& c : s.components) {
    comps.push_back({{"id", c.id},
                     {"complexity", c.complexity},
                     {"boundary_tubes", c.boundary_tubes}});
  }
  return {{"level", s.level}, {"components", comps}};
}

inline SplitSurfaceSpec surface_from_json(const json& j) {
  SplitSurfaceSpec s;
  s.level = j.value("level", 0);
  for (const auto& cj : j.at("components")) {
    SurfaceComponent c;
    c.id = cj.at("id").get<std::string>();
    c.complexity = cj.value("complexity", 3);
    if (cj.contains("boundary_tubes"))
      c.boundary_tubes = cj.at("boundary_tubes").get<std::set<std::string>>();
    s.components.push_back(std::move(c));
  }
  return s;
}

inline json block_to_json(const Block& b) {
  json j{{"index", b.index},
         {"type", b.variant_name()},
         {"bottom", surface_to_json(b.bottom)},
         {"top", surface_to_json(b.top)}};
  if (const auto* t = std::get_if<ThickBlock>(&b.variant)) {
    j["bilipschitz_constant"] = t->bilipschitz_constant;
  } else if (const auto* t = std::get_if<ThinBlock>(&b.variant)) {
    json tubes = json::array();
    for (const auto& tb : t->tubes) tubes.push_back(tube_to_json(tb));
    j["tubes"] = tubes;
  } else if (const auto* a = std::get_if<AmalgamatedBlock>(&b.variant)) {
    json tubes = json::array();
    for (const auto& tb : a->tubes) tubes.push_back(tube_to_json(tb));
    j["tubes"] = tubes;
    json params = json::array();
    for (const auto& p : a->amalgamation_params) params.push_back({{"m", p.m}, {"n", p.n}});
    j["amalgamation_params"] = params;
  } else if (const auto* s = std::get_if<SplitBlock>(&b.variant)) {
    json tubes = json::array();
    for (const auto& tb : s->tubes) tubes.push_back(tube_to_json(tb));
    j["tubes"] = tubes;
    json hanging = json::array();
    for (const auto& tb : s->hanging_tubes) hanging.push_back(tube_to_json(tb));
    j["hanging_tubes"] = hanging;
    j["region_params"] = {{"l", s->region_params.l},
                          {"m", s->region_params.m},
                          {"n", s->region_params.n}};
  }
  if (!b.vertical_weights.empty()) {
    json vws = json::array();
    for (const auto& vw : b.vertical_weights) {
      vws.push_back({{"bottom", vw.bottom_component},
                     {"top", vw.top_component},
                     {"weight", vw.weight}});
    }
    j["vertical_weights"] = vws;
  }
  return j;
}

inline Block block_from_json(const json& j) {
  Block b;
  b.index = j.at("index").get<int>();
  const std::string type = j.at("type").get<std::string>();
  if (type == "thick") {
    ThickBlock t;
    t.bilipschitz_constant = j.value("bilipschitz_constant", 1.0);
    b.variant = t;
  } else if (type == "thin") {
    ThinBlock t;
    for (const auto& tj : j.value("tubes", json::array())) t.tubes.push_back(tube_from_json(tj));
    b.variant = std::move(t);
  } else if (type == "amalgamated") {
    AmalgamatedBlock a;
    for (const auto& tj : j.value("tubes", json::array())) a.tubes.push_back(tube_from_json(tj));
    for (const auto& pj : j.value("amalgamation_params", json::array()))
      a.amalgamation_params.push_back({pj.at("m").get<int>(), pj.at("n").get<int>()});
    b.variant = std::move(a);
  } else if (type == "split") {
    SplitBlock s;
    for (const auto& tj : j.value("tubes", json::array())) s.tubes.push_back(tube_from_json(tj));
    for (const auto& tj : j.value("hanging_tubes", json::array()))
      s.hanging_tubes.push_back(tube_from_json(tj));
    const auto& rp = j.at("region_params");
    s.region_params = {rp.at("l").get<int>(), rp.at("m").get<int>(), rp.at("n").get<int>()};
    b.variant = std::move(s);
  } else {
    throw std::invalid_argument("unknown block type: " + type);
  }
  b.bottom = surface_from_json(j.at("bottom"));
  b.top = surface_from_json(j.at("top"));
  for (const auto& vj : j.value("vertical_weights", json::array())) {
    b.vertical_weights.push_back({vj.at("bottom").get<std::string>(),
                                  vj.at("top").get<std::string>(),
                                  vj.at("weight").get<double>()});
  }
  return b;
}

inline json constants_to_json(const ModelConstants& c) {
  return {{"L", c.L},           {"eps0", c.eps0}, {"diameter_bound", c.diameter_bound},
          {"C0", c.C0},         {"n_max", c.n_max}, {"eta0", c.eta0}};
}

inline ModelConstants constants_from_json(const json& j) {
  ModelConstants c;
  c.L = j.value("L", c.L);
  c.eps0 = j.value("eps0", c.eps0);
  c.diameter_bound = j.value("diameter_bound", c.diameter_bound);
  c.C0 = j.value("C0", c.C0);
  c.n_max = j.value("n_max", c.n_max);
  c.eta0 = j.value("eta0", c.eta0);
  return c;
}

inline json hierarchy_to_json(const HierarchyAnnotation& h) {
  json geodesics = json::array();
  for (const auto& g : h.geodesics) {
    json dj{{"id", g.domain.id},
            {"complexity", g.domain.complexity},
            {"boundary_curves", g.domain.boundary_curves}};
    if (!g.domain.tube_side.empty()) {
      json sides = json::object();
      for (const auto& [tid, side] : g.domain.tube_side) sides[tid] = std::string(1, side);
      dj["tube_side"] = sides;
    }
    if (g.domain.parent) {
      dj["parent"] = {{"geodesic", g.domain.parent->first}, {"curve", g.domain.parent->second}};
    }
    json simplices = json::array();
    for (const auto& s : g.simplices) simplices.push_back(s);
    geodesics.push_back({{"id", g.id},
                         {"domain", dj},
                         {"simplices", simplices},
                         {"initial_marking", g.initial_marking},
                         {"terminal_marking", g.terminal_marking}});
  }
  json path = json::array();
  for (const auto& p : h.path) path.push_back(p);
  json j{{"geodesics", geodesics}, {"path", path}};
  if (!h.resolution.slices.empty()) {
    json slices = json::array();
    for (const auto& s : h.resolution.slices) {
      json pairs = json::array();
      for (const auto& p : s.pairs)
        pairs.push_back({{"geodesic", p.geodesic}, {"simplex_index", p.simplex_index}});
      slices.push_back({{"pairs", pairs}, {"bottom", s.bottom}});
    }
    j["resolution"] = {{"slices", slices}};
  }
  if (!h.disjoint.empty()) {
    json dis = json::array();
    for (const auto& [a, b] : h.disjoint) dis.push_back(json::array({a, b}));
    j["disjoint"] = dis;
  }
  return j;
}

inline HierarchyAnnotation hierarchy_from_json(const json& j) {
  HierarchyAnnotation h;
  for (const auto& gj : j.value("geodesics", json::array())) {
    TightGeodesic g;
    g.id = gj.at("id").get<std::string>();
    const auto& dj = gj.at("domain");
    g.domain.id = dj.at("id").get<std::string>();
    g.domain.complexity = dj.value("complexity", 4);
    if (dj.contains("boundary_curves"))
      g.domain.boundary_curves = dj.at("boundary_curves").get<CurveSet>();
    if (dj.contains("tube_side")) {
      for (const auto& [tid, side] : dj.at("tube_side").items())
        g.domain.tube_side[tid] = side.get<std::string>().at(0);
    }
    if (dj.contains("parent")) {
      g.domain.parent = {dj.at("parent").at("geodesic").get<std::string>(),
                         dj.at("parent").at("curve").get<std::string>()};
    }
    for (const auto& sj : gj.at("simplices")) g.simplices.push_back(sj.get<CurveSet>());
    if (gj.contains("initial_marking")) g.initial_marking = gj.at("initial_marking").get<CurveSet>();
    if (gj.contains("terminal_marking"))
      g.terminal_marking = gj.at("terminal_marking").get<CurveSet>();
    h.geodesics.push_back(std::move(g));
  }
  for (const auto& pj : j.value("path", json::array())) h.path.push_back(pj.get<CurveSet>());
  if (j.contains("resolution")) {
    for (const auto& sj : j.at("resolution").value("slices", json::array())) {
      Slice s;
      for (const auto& pj : sj.at("pairs"))
        s.pairs.push_back({pj.at("geodesic").get<std::string>(), pj.at("simplex_index").get<int>()});
      s.bottom = sj.value("bottom", 0);
      h.resolution.slices.push_back(std::move(s));
    }
  }
  for (const auto& dj : j.value("disjoint", json::array())) {
    std::string a = dj.at(0).get<std::string>();
    std::string b = dj.at(1).get<std::string>();
    h.disjoint.insert({std::min(a, b), std::max(a, b)});
  }
  return h;
}

}  // namespace jsonio

inline json to_json(const ModelEnd& model) {
  json blocks = json::array();
  for (const auto& b : model.blocks) blocks.push_back(jsonio::block_to_json(b));
  return {{"surface_complexity", model.surface_complexity},
          {"constants", jsonio::constants_to_json(model.constants)},
          {"blocks", blocks}};
}

inline ModelEnd model_from_json(const json& j) {
  ModelEnd model;
  model.surface_complexity = j.value("surface_complexity", 6);
  if (j.contains("constants")) model.constants = jsonio::constants_from_json(j.at("constants"));
  for (const auto& bj : j.at("blocks")) model.blocks.push_back(jsonio::block_from_json(bj));
  return model;
}

inline json to_json(const ModelDocument& doc) {
  json j = to_json(doc.model);
  if (doc.hierarchy) j["hierarchy"] = jsonio::hierarchy_to_json(*doc.hierarchy);
  return j;
}

inline ModelDocument document_from_json(const json& j) {
  ModelDocument doc;
  doc.model = model_from_json(j);
  if (j.contains("hierarchy")) doc.hierarchy = jsonio::hierarchy_from_json(j.at("hierarchy"));
  return doc;
}

inline void save_document(std::ostream& os, const ModelDocument& doc) {
  os << to_json(doc).dump(2) << "\n";
}

inline ModelDocument load_document(std::istream& is) {
  json j = json::parse(is);
  return document_from_json(j);
}

}  // namespace horomodel
