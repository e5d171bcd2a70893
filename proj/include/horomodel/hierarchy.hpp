#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "horomodel/model.hpp"

namespace horomodel {

// Combinatorial bookkeeping layer: tight geodesics in component domains,
// slices, resolutions.  Curves are opaque identifiers; the only relation
// available is an optional disjointness set supplied by builders.

using CurveSet = std::set<std::string>;

struct DomainSpec {
  std::string id;
  int complexity = 4;
  CurveSet boundary_curves;
  // For boundary curves realized as tubes: which vertical side of the tube
  // this domain's blocks abut.
  std::map<std::string, char> tube_side;
  // Present for non-bottom domains: (geodesic id, curve) this domain is a
  // component domain of.
  std::optional<std::pair<std::string, std::string>> parent;
};

struct TightGeodesic {
  std::string id;
  DomainSpec domain;
  std::vector<CurveSet> simplices;
  CurveSet initial_marking;
  CurveSet terminal_marking;

  // Convention here: length counts simplices.
  int length() const { return static_cast<int>(simplices.size()); }
};

struct SlicePair {
  std::string geodesic;
  int simplex_index = 0;
};

struct Slice {
  std::vector<SlicePair> pairs;
  int bottom = 0;  // index into pairs
};

struct Resolution {
  std::vector<Slice> slices;
};

struct HierarchyAnnotation {
  std::vector<TightGeodesic> geodesics;
  std::vector<CurveSet> path;  // pants decompositions, one per slot
  Resolution resolution;       // empty or synchronized with path
  std::set<std::pair<std::string, std::string>> disjoint;  // unordered curve pairs

  const TightGeodesic* find(const std::string& id) const {
    for (const auto& g : geodesics)
      if (g.id == id) return &g;
    return nullptr;
  }
  bool curves_disjoint(const std::string& a, const std::string& b) const {
    return disjoint.count({std::min(a, b), std::max(a, b)}) > 0;
  }
};

namespace detail {

inline bool subset(const CurveSet& inner, const CurveSet& outer) {
  for (const auto& c : inner)
    if (outer.count(c) == 0) return false;
  return true;
}

}  // namespace detail

inline ValidationReport validate_geodesic(const TightGeodesic& g,
                                          const HierarchyAnnotation* ann = nullptr) {
  ValidationReport report;
  auto& out = report.violations;
  if (g.simplices.empty()) {
    out.push_back({-1, "geodesic-nonempty", "geodesic " + g.id + " has no simplices"});
    return report;
  }
  if (g.domain.complexity < 4) {
    out.push_back({-1, "domain-complexity",
                   "domain of " + g.id + " must have complexity >= 4"});
  }
  if (!detail::subset(g.simplices.front(), g.initial_marking)) {
    out.push_back({-1, "initial-marking",
                   "first simplex of " + g.id + " not contained in initial marking"});
  }
  if (!detail::subset(g.simplices.back(), g.terminal_marking)) {
    out.push_back({-1, "terminal-marking",
                   "last simplex of " + g.id + " not contained in terminal marking"});
  }
  // Tightness is a builder promise; with only a disjointness relation we can
  // check the short cases: adjacent simplices disjoint, distance-2 simplices
  // not disjoint.
  if (ann != nullptr) {
    for (std::size_t i = 0; i + 1 < g.simplices.size(); ++i) {
      for (const auto& a : g.simplices[i])
        for (const auto& b : g.simplices[i + 1])
          if (a != b && !ann->curves_disjoint(a, b)) {
            out.push_back({-1, "tight-adjacent",
                           "simplices " + std::to_string(i) + "," + std::to_string(i + 1) +
                               " of " + g.id + " not disjoint"});
          }
    }
    for (std::size_t i = 0; i + 2 < g.simplices.size(); ++i) {
      for (const auto& a : g.simplices[i])
        for (const auto& b : g.simplices[i + 2])
          if (a == b || ann->curves_disjoint(a, b)) {
            out.push_back({-1, "tight-distance",
                           "simplices " + std::to_string(i) + "," + std::to_string(i + 2) +
                               " of " + g.id + " at distance < 2"});
          }
    }
  }
  return report;
}

// Hierarchy-path conditions: every component domain occupies a connected
// interval of slots whose decompositions contain its boundary, and each such
// slot carries a simplex of the supported geodesic.
inline ValidationReport validate_hierarchy(const std::vector<TightGeodesic>& geodesics,
                                           const std::vector<CurveSet>& path) {
  ValidationReport report;
  auto& out = report.violations;
  for (const auto& g : geodesics) {
    std::vector<int> slots;
    for (std::size_t j = 0; j < path.size(); ++j) {
      if (detail::subset(g.domain.boundary_curves, path[j])) slots.push_back(static_cast<int>(j));
    }
    if (slots.empty()) {
      out.push_back({-1, "interval-empty",
                     "J_Y empty: no slot contains the boundary of domain " + g.domain.id});
      continue;
    }
    for (std::size_t k = 0; k + 1 < slots.size(); ++k) {
      if (slots[k + 1] != slots[k] + 1) {
        std::ostringstream os;
        os << "J_Y disconnected for domain " << g.domain.id << " (gap between slots "
           << slots[k] << " and " << slots[k + 1] << ")";
        out.push_back({-1, "interval-connected", os.str()});
        break;
      }
    }
    for (int j : slots) {
      bool has_simplex = false;
      for (const auto& s : g.simplices) {
        if (detail::subset(s, path[j])) {
          has_simplex = true;
          break;
        }
      }
      if (!has_simplex) {
        std::ostringstream os;
        os << "no simplex of " << g.id << " appears in slot " << j;
        out.push_back({-1, "slot-membership", os.str()});
      }
    }
  }
  return report;
}

inline ValidationReport validate_slice(const Slice& slice, const HierarchyAnnotation& ann) {
  ValidationReport report;
  auto& out = report.violations;
  if (slice.pairs.empty()) {
    out.push_back({-1, "slice-nonempty", "slice has no pairs"});
    return report;
  }
  if (slice.bottom < 0 || slice.bottom >= static_cast<int>(slice.pairs.size())) {
    out.push_back({-1, "slice-bottom", "bottom index out of range"});
    return report;
  }
  std::set<std::string> seen;
  for (const auto& p : slice.pairs) {
    if (!seen.insert(p.geodesic).second) {
      out.push_back({-1, "slice-multiplicity",
                     "geodesic " + p.geodesic + " appears more than once in slice"});
    }
    const auto* g = ann.find(p.geodesic);
    if (g == nullptr) {
      out.push_back({-1, "slice-unknown-geodesic", "unknown geodesic " + p.geodesic});
      continue;
    }
    if (p.simplex_index < 0 || p.simplex_index >= g->length()) {
      out.push_back({-1, "slice-simplex-range",
                     "simplex index out of range for " + p.geodesic});
    }
  }
  for (std::size_t i = 0; i < slice.pairs.size(); ++i) {
    if (static_cast<int>(i) == slice.bottom) continue;
    const auto* g = ann.find(slice.pairs[i].geodesic);
    if (g == nullptr) continue;
    if (!g->domain.parent) {
      out.push_back({-1, "slice-domain",
                     "non-bottom domain " + g->domain.id + " has no parent datum"});
      continue;
    }
    const auto& [parent_geodesic, parent_curve] = *g->domain.parent;
    bool ok = false;
    for (const auto& q : slice.pairs) {
      if (q.geodesic != parent_geodesic) continue;
      const auto* pg = ann.find(q.geodesic);
      if (pg != nullptr && q.simplex_index >= 0 && q.simplex_index < pg->length() &&
          pg->simplices[q.simplex_index].count(parent_curve) > 0) {
        ok = true;
      }
    }
    if (!ok) {
      out.push_back({-1, "slice-domain",
                     "domain " + g->domain.id + " is not a component domain of any pair in the slice"});
    }
  }
  return report;
}

// Vertex-set law: the curves of slice i are exactly the decomposition at i.
inline ValidationReport validate_resolution(const HierarchyAnnotation& ann) {
  ValidationReport report;
  auto& out = report.violations;
  const auto& slices = ann.resolution.slices;
  if (slices.size() != ann.path.size()) {
    out.push_back({-1, "resolution-length",
                   "resolution has " + std::to_string(slices.size()) + " slices but path has " +
                       std::to_string(ann.path.size()) + " slots"});
    return report;
  }
  for (std::size_t i = 0; i < slices.size(); ++i) {
    auto sub = validate_slice(slices[i], ann);
    for (auto& v : sub.violations) {
      v.message = "slice " + std::to_string(i) + ": " + v.message;
      out.push_back(v);
    }
    CurveSet vertices;
    for (const auto& p : slices[i].pairs) {
      const auto* g = ann.find(p.geodesic);
      if (g != nullptr && p.simplex_index >= 0 && p.simplex_index < g->length()) {
        for (const auto& c : g->simplices[p.simplex_index]) vertices.insert(c);
      }
    }
    if (vertices != ann.path[i]) {
      out.push_back({-1, "resolution-vertex-set",
                     "slice " + std::to_string(i) +
                         " vertex set differs from the pants decomposition at that index"});
    }
  }
  return report;
}

// Tubes with long cores admit only short geodesics on abutting domains.
inline ValidationReport check_abut_bound(const ModelEnd& model, const HierarchyAnnotation& ann,
                                         double l, int n) {
  ValidationReport report;
  const auto tubes = model.tube_table();
  for (const auto& g : ann.geodesics) {
    for (const auto& curve : g.domain.boundary_curves) {
      auto it = tubes.find(curve);
      if (it == tubes.end()) continue;
      if (it->second.core_length > l && g.length() > n) {
        std::ostringstream os;
        os << "geodesic " << g.id << " has length " << g.length() << " > " << n
           << " on a domain abutting tube " << curve << " with core length "
           << it->second.core_length;
        report.violations.push_back({-1, "abut-bound", os.str()});
      }
    }
  }
  return report;
}

struct SideTally {
  int left = 0;
  int right = 0;
  bool operator==(const SideTally&) const = default;
};

// Count the blocks assigned to edges of complexity-4 geodesics abutting each
// tube side.  This is the independent route to the tube's (n_Tl, n_Tr).
inline std::map<std::string, SideTally> minsky_block_tally(const ModelEnd& model,
                                                           const HierarchyAnnotation& ann) {
  std::map<std::string, SideTally> tally;
  for (const auto& [tid, tube] : model.tube_table()) {
    (void)tube;
    tally[tid];  // every tube gets an entry, possibly (0, 0)
  }
  for (const auto& g : ann.geodesics) {
    if (g.domain.complexity != 4) continue;
    for (const auto& curve : g.domain.boundary_curves) {
      auto it = tally.find(curve);
      if (it == tally.end()) continue;
      char side = 'L';
      auto sit = g.domain.tube_side.find(curve);
      if (sit != g.domain.tube_side.end()) side = sit->second;
      if (side == 'L') {
        it->second.left += g.length();
      } else {
        it->second.right += g.length();
      }
    }
  }
  return tally;
}

inline ValidationReport check_tally(const ModelEnd& model, const HierarchyAnnotation& ann) {
  ValidationReport report;
  const auto tally = minsky_block_tally(model, ann);
  for (const auto& [tid, tube] : model.tube_table()) {
    const auto& t = tally.at(tid);
    if (t.left != tube.left_count || t.right != tube.right_count) {
      std::ostringstream os;
      os << "tube " << tid << " stores counts (" << tube.left_count << "," << tube.right_count
         << ") but tally finds (" << t.left << "," << t.right << ")";
      report.violations.push_back({-1, "tally-mismatch", os.str()});
    }
  }
  return report;
}

}  // namespace horomodel
