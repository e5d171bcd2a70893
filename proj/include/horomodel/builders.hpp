#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "horomodel/hierarchy.hpp"
#include "horomodel/model.hpp"

namespace horomodel {

// Parameterized generators for the example families, together with the
// hierarchy annotations that certify their tube ladder counts.

struct BoundedGeometryParams {
  int n_blocks = 1;
};

struct FluteParams {
  int n_necks = 1;
};

struct IBoundedParams {
  std::vector<int> twists;  // n_i per thin block
};

struct AmalgFamilyParams {
  // One list of (m_j, n_j) pairs per block; interior cost is sum(m_j + 1).
  std::vector<std::vector<AmalgParams>> blocks;
};

struct SplitFamilyParams {
  std::vector<RegionParams> blocks;  // (l_i, m_i, n_i) per block
};

struct ThinAllParams {
  std::vector<int> js;  // k_i per block
  double d = 1.0;       // per-block height of the thick route
  double C = 8.0;       // target almost-minimizing constant for the criterion
};

using FamilyVariant = std::variant<BoundedGeometryParams, FluteParams, IBoundedParams,
                                   AmalgFamilyParams, SplitFamilyParams, ThinAllParams>;

struct FamilyParams {
  FamilyVariant family;
  unsigned seed = 0;  // reserved for randomized padding; generation is exact
};

struct BuildResult {
  ModelEnd model;
  HierarchyAnnotation hierarchy;
};

namespace build_detail {

inline std::string pad4(int v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", v);
  return buf;
}

struct GeodesicSpec {
  std::string tube;
  char side = 'L';
  int length = 1;
};

// Uniform hierarchy recipe: a bottom geodesic sweeping one simplex per level
// (the tube curves entering at that slot plus a filler curve), and one
// complexity-4 geodesic per ladder-count contribution, hung off the bottom
// geodesic at the tube's first slot.
inline HierarchyAnnotation make_hierarchy(const ModelEnd& model,
                                          const std::vector<GeodesicSpec>& specs) {
  HierarchyAnnotation ann;
  const int slots = model.level_count();
  const auto spans = model.tube_spans();

  TightGeodesic base;
  base.id = "g:base";
  base.domain.id = "S:base";
  base.domain.complexity = std::max(5, model.surface_complexity);
  for (int l = 0; l < slots; ++l) {
    CurveSet s;
    s.insert("c:" + pad4(l));
    for (const auto& [tid, span] : spans) {
      if (span.first == l) s.insert(tid);
    }
    base.simplices.push_back(std::move(s));
  }
  base.initial_marking = base.simplices.front();
  base.terminal_marking = base.simplices.back();

  std::vector<TightGeodesic> supported;
  std::map<std::string, int> per_tube;
  for (const auto& spec : specs) {
    if (spec.length < 1) continue;
    const int j = per_tube[spec.tube]++;
    TightGeodesic g;
    const std::string tag = spec.tube + ":" + spec.side + std::to_string(j);
    g.id = "g:" + tag;
    g.domain.id = "W:" + tag;
    g.domain.complexity = 4;
    g.domain.boundary_curves = {spec.tube};
    g.domain.tube_side[spec.tube] = spec.side;
    g.domain.parent = {std::string("g:base"), spec.tube};
    for (int k = 0; k < spec.length; ++k) {
      g.simplices.push_back({"x:" + tag + ":" + std::to_string(k)});
    }
    g.initial_marking = g.simplices.front();
    g.terminal_marking = g.simplices.back();
    supported.push_back(std::move(g));
  }

  // Pants-decomposition path and the synchronized resolution.
  for (int l = 0; l < slots; ++l) {
    CurveSet rho = base.simplices[l];
    Slice slice;
    slice.pairs.push_back({"g:base", l});
    slice.bottom = 0;
    for (const auto& g : supported) {
      const std::string& tid = *g.domain.boundary_curves.begin();
      if (spans.at(tid).first != l) continue;
      for (const auto& c : g.simplices.front()) rho.insert(c);
      slice.pairs.push_back({g.id, 0});
    }
    ann.path.push_back(std::move(rho));
    ann.resolution.slices.push_back(std::move(slice));
  }

  // Disjointness: consecutive base simplices, and consecutive vertices of
  // each supported geodesic.  Nothing else is declared disjoint.
  auto declare = [&ann](const CurveSet& a, const CurveSet& b) {
    for (const auto& x : a)
      for (const auto& y : b)
        if (x != y) ann.disjoint.insert({std::min(x, y), std::max(x, y)});
  };
  for (int l = 0; l + 1 < slots; ++l) declare(base.simplices[l], base.simplices[l + 1]);
  for (const auto& g : supported) {
    for (std::size_t k = 0; k + 1 < g.simplices.size(); ++k) {
      declare(g.simplices[k], g.simplices[k + 1]);
    }
  }

  ann.geodesics.push_back(std::move(base));
  for (auto& g : supported) ann.geodesics.push_back(std::move(g));
  return ann;
}

inline SplitSurfaceSpec at_level(int level, std::vector<SurfaceComponent> comps) {
  return {level, std::move(comps)};
}

[[noreturn]] inline void reject(const std::string& condition) {
  throw std::invalid_argument("family parameter invariant violated: " + condition);
}

inline BuildResult build_bounded_geometry(const BoundedGeometryParams& p) {
  if (p.n_blocks < 1) reject("BoundedGeometry requires n_blocks >= 1");
  BuildResult out;
  out.model.surface_complexity = 6;
  for (int b = 0; b < p.n_blocks; ++b) {
    Block blk;
    blk.index = b;
    blk.variant = ThickBlock{1.0};
    blk.bottom = at_level(b, {{"S", 6, {}}});
    blk.top = at_level(b + 1, {{"S", 6, {}}});
    out.model.blocks.push_back(std::move(blk));
  }
  out.hierarchy = make_hierarchy(out.model, {});
  return out;
}

inline BuildResult build_flute(const FluteParams& p) {
  if (p.n_necks < 1) reject("Flute requires n_necks >= 1");
  BuildResult out;
  out.model.surface_complexity = 4;

  auto comp = [&](int level) {
    SurfaceComponent c{"F" + pad4(level), 4, {}};
    if (level > 0) c.boundary_tubes.insert("N" + pad4(level - 1));
    if (level < p.n_necks) c.boundary_tubes.insert("N" + pad4(level));
    return c;
  };

  std::vector<GeodesicSpec> specs;
  for (int b = 0; b < p.n_necks; ++b) {
    // Neck n = b + 1 is a totally geodesic annulus of core length 1/n; the
    // only way past it leads through the core.
    Tube neck;
    neck.id = "N" + pad4(b);
    neck.core_length = 1.0 / (b + 1);
    neck.left_count = 1;
    neck.right_count = 1;
    neck.side_of_component = {{"F" + pad4(b), 'L'}, {"F" + pad4(b + 1), 'R'}};

    Block blk;
    blk.index = b;
    blk.variant = ThinBlock{{neck}};
    blk.bottom = at_level(b, {comp(b)});
    blk.top = at_level(b + 1, {comp(b + 1)});
    out.model.blocks.push_back(std::move(blk));

    specs.push_back({neck.id, 'L', 1});
    specs.push_back({neck.id, 'R', 1});
  }
  out.hierarchy = make_hierarchy(out.model, specs);
  return out;
}

inline BuildResult build_i_bounded(const IBoundedParams& p) {
  if (p.twists.empty()) reject("IBounded requires >= 1 twist");
  for (int n : p.twists)
    if (n < 2) reject("IBounded requires every n_i >= 2");
  BuildResult out;
  out.model.surface_complexity = 6;

  auto comp = [&](int level) {
    SurfaceComponent c{"S", 6, {}};
    const int lo = level - 1, hi = level;
    for (int b : {lo, hi}) {
      if (b >= 0 && b < 2 * static_cast<int>(p.twists.size()) && b % 2 == 1) {
        c.boundary_tubes.insert("M" + pad4(b / 2));
      }
    }
    return c;
  };

  std::vector<GeodesicSpec> specs;
  for (int i = 0; i < static_cast<int>(p.twists.size()); ++i) {
    const int n = p.twists[i];
    Block thick;
    thick.index = 2 * i;
    thick.variant = ThickBlock{1.0};
    thick.bottom = at_level(2 * i, {comp(2 * i)});
    thick.top = at_level(2 * i + 1, {comp(2 * i + 1)});
    out.model.blocks.push_back(std::move(thick));

    Tube tube;
    tube.id = "M" + pad4(i);
    tube.core_length = 1.0 / n;
    tube.twist = n;
    tube.left_count = (n + 1) / 2;
    tube.right_count = n / 2;

    Block thin;
    thin.index = 2 * i + 1;
    thin.variant = ThinBlock{{tube}};
    thin.bottom = at_level(2 * i + 1, {comp(2 * i + 1)});
    thin.top = at_level(2 * i + 2, {comp(2 * i + 2)});
    out.model.blocks.push_back(std::move(thin));

    specs.push_back({tube.id, 'L', tube.left_count});
    specs.push_back({tube.id, 'R', tube.right_count});
  }
  out.hierarchy = make_hierarchy(out.model, specs);
  return out;
}

inline BuildResult build_amalgamated(const AmalgFamilyParams& p) {
  if (p.blocks.empty()) reject("AmalgCounterexample requires >= 1 block");
  BuildResult out;
  out.model.surface_complexity = 6;

  const int count = static_cast<int>(p.blocks.size());
  auto comp = [&](int level, const std::string& id, int xi) {
    SurfaceComponent c{id, xi, {}};
    if (level > 0) c.boundary_tubes.insert("T" + pad4(level - 1));
    if (level < count) c.boundary_tubes.insert("T" + pad4(level));
    return c;
  };

  std::vector<GeodesicSpec> specs;
  for (int b = 0; b < count; ++b) {
    int boundary = 0;
    for (const auto& [m, n] : p.blocks[b]) {
      if (m < 0 || n < 1) reject("AmalgCounterexample requires m_j >= 0 and n_j >= 1");
      boundary += m + n;
    }
    if (boundary < 1) reject("AmalgCounterexample requires sum(m_j + n_j) >= 1 per block");

    Tube tube;
    tube.id = "T" + pad4(b);
    tube.core_length = 1.0;
    tube.left_count = boundary;
    tube.right_count = boundary;
    tube.side_of_component = {{"K", 'L'}, {"R", 'R'}};

    Block blk;
    blk.index = b;
    blk.variant = AmalgamatedBlock{{tube}, p.blocks[b]};
    blk.bottom = at_level(b, {comp(b, "K", 4), comp(b, "R", 5)});
    blk.top = at_level(b + 1, {comp(b + 1, "K", 4), comp(b + 1, "R", 5)});
    out.model.blocks.push_back(std::move(blk));

    for (const auto& [m, n] : p.blocks[b]) {
      for (char side : {'L', 'R'}) {
        specs.push_back({tube.id, side, n});
        if (m > 0) specs.push_back({tube.id, side, m});
      }
    }
  }
  out.hierarchy = make_hierarchy(out.model, specs);
  return out;
}

inline BuildResult build_split(const SplitFamilyParams& p) {
  const int count = static_cast<int>(p.blocks.size());
  if (count < 1) reject("SplitCounterexample requires >= 1 block");
  for (int b = 0; b < count; ++b) {
    const auto& [l, m, n] = p.blocks[b];
    if (l < 1 || m < 1) reject("SplitCounterexample requires l_i >= 1 and m_i >= 1");
    if (n < l + m) {
      reject("n_i >= l_i + m_i fails at block " + std::to_string(b));
    }
  }
  BuildResult out;
  out.model.surface_complexity = 5;  // sphere with five holes

  auto tube_id = [](int b) { return "T" + pad4(b); };
  auto hang_id = [](int b) { return "H" + pad4(b); };
  auto p_id = [](int l) { return "p" + pad4(l); };
  auto q_id = [](int l) { return "q" + pad4(l); };

  auto make_level = [&](int level) {
    SurfaceComponent pc{p_id(level), 3, {}};
    SurfaceComponent qc{q_id(level), 4, {}};
    if (level < count) {
      pc.boundary_tubes.insert(tube_id(level));
      qc.boundary_tubes.insert(tube_id(level));
    }
    if (level > 0) qc.boundary_tubes.insert(tube_id(level - 1));
    if (level >= 1 && level <= count - 1) {
      pc.boundary_tubes.insert(hang_id(level - 1));
      qc.boundary_tubes.insert(hang_id(level - 1));
    }
    return std::vector<SurfaceComponent>{pc, qc};
  };

  auto crossing_tube = [&](int b) {
    // Short side: the one-block pants column A_b.  Long side: the n_b
    // surfaces stacked along the complementary region, entered from below
    // only -- the region's upper reaches are compressed into the product
    // weight.  The fat core prices the annulus crossing out against the
    // hanging tubes, whose ladders reach the same depth.
    Tube t;
    t.id = tube_id(b);
    t.core_length = 4.0;
    t.twist = 1;
    t.left_count = 1;
    t.right_count = p.blocks[b].n;
    t.side_of_component = {{p_id(b), 'L'}, {q_id(b + 1), 'L'}, {q_id(b), 'R'}};
    return t;
  };
  auto hanging_tube = [&](int b, TubeKind kind) {
    const auto& [l, m, n] = p.blocks[b];
    Tube t;
    t.id = hang_id(b);
    t.kind = kind;
    t.core_length = 1.0 / (l + m);
    t.left_count = l;
    t.right_count = m;
    t.vertical_extent = 1.0;
    t.side_of_component = {{q_id(b + 1), 'L'}, {p_id(b + 1), 'R'}};
    return t;
  };

  std::vector<GeodesicSpec> specs;
  for (int b = 0; b < count; ++b) {
    SplitBlock sb;
    sb.tubes.push_back(crossing_tube(b));
    if (b >= 1) sb.hanging_tubes.push_back(hanging_tube(b - 1, TubeKind::HangingLower));
    if (b <= count - 2) sb.hanging_tubes.push_back(hanging_tube(b, TubeKind::HangingUpper));
    sb.region_params = p.blocks[b];

    Block blk;
    blk.index = b;
    blk.variant = std::move(sb);
    blk.bottom = at_level(b, make_level(b));
    blk.top = at_level(b + 1, make_level(b + 1));
    blk.vertical_weights = {
        {p_id(b), q_id(b + 1), 1.0},
        {q_id(b), p_id(b + 1), static_cast<double>(p.blocks[b].m)},
    };
    out.model.blocks.push_back(std::move(blk));

    specs.push_back({tube_id(b), 'L', 1});
    specs.push_back({tube_id(b), 'R', p.blocks[b].n});
    if (b <= count - 2) {
      specs.push_back({hang_id(b), 'L', p.blocks[b].l});
      specs.push_back({hang_id(b), 'R', p.blocks[b].m});
    }
  }
  out.hierarchy = make_hierarchy(out.model, specs);
  return out;
}

inline BuildResult build_thin_all(const ThinAllParams& p) {
  if (p.js.empty()) reject("ThinAll requires >= 1 block");
  for (int k : p.js) {
    if (k < 2) reject("ThinAll requires every k_i >= 2");
    if (!(k * p.d / 2.0 > 4.0 * std::log(static_cast<double>(k)) + p.C)) {
      reject("k_i*d/2 > 4*ln(k_i) + C fails for k_i = " + std::to_string(k));
    }
  }
  BuildResult out;
  out.model.surface_complexity = 6;

  const int count = static_cast<int>(p.js.size());
  auto comp = [&](int level) {
    SurfaceComponent c{"S", 6, {}};
    if (level > 0) c.boundary_tubes.insert("K" + pad4(level - 1));
    if (level < count) c.boundary_tubes.insert("K" + pad4(level));
    return c;
  };

  std::vector<GeodesicSpec> specs;
  for (int b = 0; b < count; ++b) {
    const int k = p.js[b];
    Tube tube;
    tube.id = "K" + pad4(b);
    tube.core_length = 1.0 / k;
    tube.twist = k;
    tube.left_count = k;
    tube.right_count = 0;

    Block blk;
    blk.index = b;
    blk.variant = ThinBlock{{tube}};
    blk.bottom = at_level(b, {comp(b)});
    blk.top = at_level(b + 1, {comp(b + 1)});
    blk.vertical_weights = {{"S", "S", k * p.d / 2.0}};
    out.model.blocks.push_back(std::move(blk));

    specs.push_back({tube.id, 'L', k});
  }
  out.hierarchy = make_hierarchy(out.model, specs);
  return out;
}

}  // namespace build_detail

inline BuildResult build(const FamilyParams& params) {
  using namespace build_detail;
  return std::visit(
      [](const auto& p) -> BuildResult {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BoundedGeometryParams>) return build_bounded_geometry(p);
        else if constexpr (std::is_same_v<T, FluteParams>) return build_flute(p);
        else if constexpr (std::is_same_v<T, IBoundedParams>) return build_i_bounded(p);
        else if constexpr (std::is_same_v<T, AmalgFamilyParams>) return build_amalgamated(p);
        else if constexpr (std::is_same_v<T, SplitFamilyParams>) return build_split(p);
        else return build_thin_all(p);
      },
      params.family);
}

// Canonical parameterizations used by the examples and reports.

// l_i = m_i = 2^{i+2}, n_i = 2^{i+3} for i = 1..count, exponents capped so
// large-horizon runs stay desk-sized.
inline SplitFamilyParams split_counterexample_params(int count, int cap_exponent = 30) {
  SplitFamilyParams p;
  for (int i = 1; i <= count; ++i) {
    const int le = std::min(i + 2, cap_exponent);
    const int ne = std::min(i + 3, cap_exponent + 1);
    p.blocks.push_back({1 << le, 1 << le, 1 << ne});
  }
  return p;
}

// m_j = 1, n_j = 8 * 2^j, block i carries the cumulative list j = 1..i.
inline AmalgFamilyParams amalg_counterexample_params(int count) {
  AmalgFamilyParams p;
  for (int i = 1; i <= count; ++i) {
    std::vector<AmalgParams> list;
    for (int j = 1; j <= i; ++j) list.push_back({1, 8 * (1 << j)});
    p.blocks.push_back(std::move(list));
  }
  return p;
}

inline IBoundedParams i_bounded_params(int count) {
  IBoundedParams p;
  for (int i = 1; i <= count; ++i) p.twists.push_back(1 << i);
  return p;
}

}  // namespace horomodel
