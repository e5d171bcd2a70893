#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace horomodel {

// Block/tube/surface vocabulary for combinatorial models of degenerate ends.
// A model is an ordered stack of blocks glued end to end; tubes are the thin
// solid-torus pieces threading through them.

enum class TubeKind { Crossing, HangingUpper, HangingLower };

inline const char* to_string(TubeKind k) {
  switch (k) {
    case TubeKind::Crossing: return "crossing";
    case TubeKind::HangingUpper: return "hanging_upper";
    case TubeKind::HangingLower: return "hanging_lower";
  }
  return "?";
}

struct Tube {
  std::string id;
  double core_length = 0.0;
  int twist = 0;       // signed Dehn-twist count tw_T
  int left_count = 0;  // abutting blocks on the left vertical boundary
  int right_count = 0;
  TubeKind kind = TubeKind::Crossing;
  double vertical_extent = 1.0;  // hanging kinds only
  // Optional explicit side assignment for bounding components; components not
  // listed fall back to the id-order convention.
  std::map<std::string, char> side_of_component;

  int total_count() const { return left_count + right_count; }
  bool hanging() const { return kind != TubeKind::Crossing; }

  // Derived tube depth: radius of the collar grows like log of boundary size.
  double depth() const { return std::log1p(static_cast<double>(total_count())); }
};

// (tw_T, n_T); the tube-boundary torus parameter is within C0 of tw + i*n.
inline std::pair<double, double> meridian_coefficient(const Tube& tube) {
  if (tube.hanging()) {
    throw std::invalid_argument("meridian coefficient defined for crossing tubes only");
  }
  return {static_cast<double>(tube.twist), static_cast<double>(tube.total_count())};
}

struct SurfaceComponent {
  std::string id;
  int complexity = 3;  // xi(S_{g,b}) = 3g + b; a pair of pants has xi = 3
  std::set<std::string> boundary_tubes;

  bool operator==(const SurfaceComponent&) const = default;
};

struct SplitSurfaceSpec {
  int level = 0;
  std::vector<SurfaceComponent> components;

  const SurfaceComponent* find(const std::string& id) const {
    for (const auto& c : components)
      if (c.id == id) return &c;
    return nullptr;
  }
  bool same_structure(const SplitSurfaceSpec& other) const {
    if (components.size() != other.components.size()) return false;
    for (const auto& c : components) {
      const auto* o = other.find(c.id);
      if (o == nullptr || o->complexity != c.complexity || o->boundary_tubes != c.boundary_tubes)
        return false;
    }
    return true;
  }
};

struct ThickBlock {
  double bilipschitz_constant = 1.0;
};

struct ThinBlock {
  std::vector<Tube> tubes;
};

struct AmalgParams {
  int m = 0;
  int n = 0;
};

struct AmalgamatedBlock {
  std::vector<Tube> tubes;
  std::vector<AmalgParams> amalgamation_params;

  double interior_cost() const {
    double s = 0.0;
    for (const auto& p : amalgamation_params) s += p.m + 1;
    return std::max(1.0, s);
  }
};

struct RegionParams {
  int l = 0;
  int m = 0;
  int n = 0;
};

struct SplitBlock {
  std::vector<Tube> tubes;
  std::vector<Tube> hanging_tubes;
  RegionParams region_params;
};

using BlockVariant = std::variant<ThickBlock, ThinBlock, AmalgamatedBlock, SplitBlock>;

// Vertical gluing datum inside one block: the product (or amalgamation) region
// joining a bottom component to a top component, with its traversal cost.
struct VerticalWeight {
  std::string bottom_component;
  std::string top_component;
  double weight = 1.0;
};

struct Block {
  int index = 0;
  BlockVariant variant;
  SplitSurfaceSpec bottom;
  SplitSurfaceSpec top;
  // Empty means the per-variant default (unit weight on matching component
  // ids; amalgamated blocks default to their interior cost).
  std::vector<VerticalWeight> vertical_weights;

  const char* variant_name() const {
    switch (variant.index()) {
      case 0: return "thick";
      case 1: return "thin";
      case 2: return "amalgamated";
      case 3: return "split";
    }
    return "?";
  }

  std::vector<const Tube*> all_tubes() const {
    std::vector<const Tube*> out;
    if (const auto* t = std::get_if<ThinBlock>(&variant)) {
      for (const auto& tb : t->tubes) out.push_back(&tb);
    } else if (const auto* a = std::get_if<AmalgamatedBlock>(&variant)) {
      for (const auto& tb : a->tubes) out.push_back(&tb);
    } else if (const auto* s = std::get_if<SplitBlock>(&variant)) {
      for (const auto& tb : s->tubes) out.push_back(&tb);
      for (const auto& tb : s->hanging_tubes) out.push_back(&tb);
    }
    return out;
  }

  std::vector<VerticalWeight> effective_vertical_weights() const {
    if (!vertical_weights.empty()) return vertical_weights;
    std::vector<VerticalWeight> out;
    double w = 1.0;
    if (const auto* a = std::get_if<AmalgamatedBlock>(&variant)) w = a->interior_cost();
    for (const auto& c : bottom.components) {
      if (top.find(c.id) != nullptr) out.push_back({c.id, c.id, w});
    }
    return out;
  }
};

struct ModelConstants {
  double L = 1.0;              // bilipschitz constant, idealized to 1
  double eps0 = 0.1;           // injectivity-radius floor outside tubes
  double diameter_bound = 2.0; // D, horizontal diameter of a level surface
  double C0 = 2.0;             // meridian coefficient tolerance (unanchored)
  int n_max = 16;              // max consecutive blocks a crossing tube spans
  double eta0 = 1.0;           // lower bound on hanging-tube vertical extent
};

struct Violation {
  int block_index = -1;  // -1 for model-wide rules
  std::string rule;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

struct ModelEnd {
  std::vector<Block> blocks;
  int surface_complexity = 6;
  ModelConstants constants;

  int level_count() const { return blocks.empty() ? 0 : static_cast<int>(blocks.size()) + 1; }

  // Every tube named anywhere in the model, keyed by id.  A tube spanning
  // several blocks appears once; per-block copies must agree.
  std::map<std::string, Tube> tube_table() const {
    std::map<std::string, Tube> out;
    for (const auto& b : blocks)
      for (const auto* t : b.all_tubes()) out.emplace(t->id, *t);
    return out;
  }

  // Consecutive block range [first, last] a tube appears in.
  std::map<std::string, std::pair<int, int>> tube_spans() const {
    std::map<std::string, std::pair<int, int>> out;
    for (const auto& b : blocks) {
      for (const auto* t : b.all_tubes()) {
        auto [it, fresh] = out.emplace(t->id, std::make_pair(b.index, b.index));
        if (!fresh) {
          it->second.first = std::min(it->second.first, b.index);
          it->second.second = std::max(it->second.second, b.index);
        }
      }
    }
    return out;
  }
};

namespace detail {

inline void check_tube(const ModelEnd& model, const Block& b, const Tube& t,
                       std::vector<Violation>& out) {
  if (!(t.core_length > 0.0)) {
    out.push_back({b.index, "tube-core-length", "tube " + t.id + " must have core_length > 0"});
  }
  if (!t.hanging() && t.total_count() < 1) {
    out.push_back({b.index, "tube-total-count",
                   "crossing tube " + t.id + " must have left_count + right_count >= 1"});
  }
  if (t.hanging() && t.vertical_extent < model.constants.eta0) {
    std::ostringstream os;
    os << "hanging tube " << t.id << " has vertical_extent " << t.vertical_extent
       << " < eta0 = " << model.constants.eta0;
    out.push_back({b.index, "hanging-extent", os.str()});
  }
}

inline bool surface_lists_tube(const SplitSurfaceSpec& s, const std::string& tube_id) {
  for (const auto& c : s.components)
    if (c.boundary_tubes.count(tube_id) > 0) return true;
  return false;
}

}  // namespace detail

// Pure validation; violations are data, not failures.
inline ValidationReport validate(const ModelEnd& model) {
  ValidationReport report;
  auto& out = report.violations;

  if (model.blocks.empty()) {
    out.push_back({-1, "nonempty", "model must contain >=1 block"});
    return report;
  }

  for (std::size_t i = 0; i < model.blocks.size(); ++i) {
    const Block& b = model.blocks[i];
    if (b.index != static_cast<int>(i)) {
      std::ostringstream os;
      os << "block at position " << i << " has index " << b.index
         << "; indices must be consecutive from 0";
      out.push_back({b.index, "block-indices", os.str()});
    }

    for (const auto* t : b.all_tubes()) detail::check_tube(model, b, *t, out);

    if (std::holds_alternative<ThickBlock>(b.variant) && !b.all_tubes().empty()) {
      out.push_back({b.index, "thick-no-tubes", "thick block carries tubes"});
    }

    if (const auto* s = std::get_if<SplitBlock>(&b.variant)) {
      const auto& rp = s->region_params;
      if (rp.n < rp.l + rp.m) {
        std::ostringstream os;
        os << "n_i >= l_i + m_i fails (" << rp.n << " < " << rp.l + rp.m << ")";
        out.push_back({b.index, "split-region-params", os.str()});
      }
      for (const auto& h : s->hanging_tubes) {
        if (!h.hanging()) {
          out.push_back({b.index, "hanging-kind",
                         "tube " + h.id + " listed as hanging but has crossing kind"});
        }
      }
    }

    // Tube placement on the horizontal boundaries.
    for (const auto* t : b.all_tubes()) {
      const bool in_bottom = detail::surface_lists_tube(b.bottom, t->id);
      const bool in_top = detail::surface_lists_tube(b.top, t->id);
      switch (t->kind) {
        case TubeKind::Crossing:
          if (!in_bottom || !in_top) {
            out.push_back({b.index, "crossing-placement",
                           "crossing tube " + t->id + " must appear in both bottom and top"});
          }
          break;
        case TubeKind::HangingUpper:
          if (!in_top || in_bottom) {
            out.push_back({b.index, "hanging-placement",
                           "hanging_upper tube " + t->id + " must appear in top only"});
          }
          break;
        case TubeKind::HangingLower:
          if (!in_bottom || in_top) {
            out.push_back({b.index, "hanging-placement",
                           "hanging_lower tube " + t->id + " must appear in bottom only"});
          }
          break;
      }
    }

    // Every listed boundary tube exists somewhere in the model, components
    // have at least pair-of-pants complexity, and no tube bounds more than
    // two components of one surface.
    auto tubes = model.tube_table();
    for (const SplitSurfaceSpec* surf : {&b.bottom, &b.top}) {
      std::map<std::string, int> bounded;
      for (const auto& c : surf->components) {
        if (c.complexity < 3) {
          std::ostringstream os;
          os << "component " << c.id << " has complexity " << c.complexity << " < 3";
          out.push_back({b.index, "component-complexity", os.str()});
        }
        for (const auto& tid : c.boundary_tubes) {
          if (tubes.count(tid) == 0) {
            out.push_back({b.index, "unknown-tube",
                           "component " + c.id + " lists unknown tube " + tid});
          }
          ++bounded[tid];
        }
      }
      for (const auto& [tid, cnt] : bounded) {
        if (cnt > 2) {
          out.push_back({b.index, "tube-adjacency",
                         "tube " + tid + " bounds more than two components of one surface"});
        }
      }
    }

    // Gluing end to end.
    if (i + 1 < model.blocks.size()) {
      if (!b.top.same_structure(model.blocks[i + 1].bottom)) {
        std::ostringstream os;
        os << "top of block " << b.index << " does not match bottom of block " << b.index + 1;
        out.push_back({b.index, "gluing", os.str()});
      }
    }

    for (const auto& vw : b.effective_vertical_weights()) {
      if (b.bottom.find(vw.bottom_component) == nullptr ||
          b.top.find(vw.top_component) == nullptr) {
        out.push_back({b.index, "vertical-weight",
                       "vertical weight references missing component " + vw.bottom_component +
                           "/" + vw.top_component});
      }
      if (!(vw.weight > 0.0)) {
        out.push_back({b.index, "vertical-weight", "vertical weight must be positive"});
      }
    }
  }

  // Weak split geometry item: a crossing tube splits boundedly many surfaces.
  for (const auto& [tid, span] : model.tube_spans()) {
    const int blocks_spanned = span.second - span.first + 1;
    if (blocks_spanned > model.constants.n_max) {
      std::ostringstream os;
      os << "tube " << tid << " spans " << blocks_spanned << " consecutive blocks > n_max = "
         << model.constants.n_max;
      out.push_back({span.first, "tube-span", os.str()});
    }
  }

  return report;
}

}  // namespace horomodel
