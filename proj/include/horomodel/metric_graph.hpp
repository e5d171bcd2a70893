#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "horomodel/model.hpp"

namespace horomodel {

// Weighted-graph discretization of a ModelEnd.
//
// Each level surface contributes one node per component.  Each tube side is a
// ladder: boundary positions at depth 0, coarsening dyadically with depth,
// with horizontal cost e^{-k} per unit of boundary offset at depth k and unit
// cost per rung.  The two sides meet only at the core, so crossing the tube
// annulus means descending its full depth.

struct SurfaceLocus {
  int level = 0;
  std::string component;
};

struct TubeRungLocus {
  std::string tube;
  char side = 'L';
  int depth = 0;
  int pos = 0;
};

struct TubeCoreLocus {
  std::string tube;
};

using Locus = std::variant<SurfaceLocus, TubeRungLocus, TubeCoreLocus>;

struct Node {
  std::string id;
  Locus locus;
  double inj = 0.0;
  int depth = 0;              // rung depth; cores carry the ladder's max depth
  int block_lo = 0;           // block range this node belongs to
  int block_hi = 0;
  std::string tube;           // empty for surface nodes
};

struct DiscretizationParams {
  std::optional<double> diameter_override;  // horizontal hop weight, default constants.D
};

struct InvalidModelError : std::runtime_error {
  ValidationReport report;
  explicit InvalidModelError(ValidationReport r)
      : std::runtime_error("model failed validation (" +
                           std::to_string(r.violations.size()) + " violations)"),
        report(std::move(r)) {}
};

struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QueryFilter {
  std::optional<int> max_depth;               // admissible rung depth bound
  std::optional<int> block;                   // restrict to one block's subgraph
  const std::set<std::string>* exclude_tubes = nullptr;
};

struct PathResult {
  double length = 0.0;
  std::vector<int> nodes;
};

struct DijkstraResult {
  std::vector<double> dist;
  std::vector<int> parent;
};

class MetricGraph {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static MetricGraph discretize(const ModelEnd& model, DiscretizationParams params = {}) {
    ValidationReport report = validate(model);
    if (!report.valid()) throw InvalidModelError(std::move(report));

    MetricGraph g;
    g.levels_ = model.level_count();
    const double eps0 = model.constants.eps0;
    const double diameter =
        params.diameter_override.value_or(model.constants.diameter_bound);

    // Surface nodes, one per (level, component).
    for (int level = 0; level < g.levels_; ++level) {
      const SplitSurfaceSpec& surf = g.surface_at(model, level);
      for (const auto& c : surf.components) {
        const int lo = std::max(0, level - 1);
        const int hi = std::min(static_cast<int>(model.blocks.size()) - 1, level);
        g.add_node("s:" + pad(level) + ":" + c.id, SurfaceLocus{level, c.id}, eps0, 0, lo, hi,
                   "");
      }
    }

    // Tube ladders.
    const auto tubes = model.tube_table();
    const auto spans = model.tube_spans();
    for (const auto& [tid, tube] : tubes) {
      g.build_ladder(tube, spans.at(tid), eps0);
    }

    // Surface-to-ladder attachments and the per-level index.
    g.level_index_.assign(g.levels_, {});
    for (int level = 0; level < g.levels_; ++level) {
      const SplitSurfaceSpec& surf = g.surface_at(model, level);
      for (const auto& c : surf.components) {
        g.level_index_[level].push_back(g.find("s:" + pad(level) + ":" + c.id));
      }
      // Components bounding a tube, in id order: first gets side L, second R,
      // a lone component touches both sides.
      std::map<std::string, std::vector<std::string>> by_tube;
      for (const auto& c : surf.components)
        for (const auto& tid : c.boundary_tubes) by_tube[tid].push_back(c.id);
      for (auto& [tid, comps] : by_tube) {
        const Tube& tube = tubes.at(tid);
        std::sort(comps.begin(), comps.end());
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
          std::vector<char> sides;
          auto sit = tube.side_of_component.find(comps[ci]);
          if (sit != tube.side_of_component.end()) {
            sides = {sit->second};
          } else if (comps.size() == 1) {
            sides = {'L', 'R'};
          } else {
            sides = {ci == 0 ? 'L' : 'R'};
          }
          for (char side : sides) {
            const int n_side = side == 'L' ? tube.left_count : tube.right_count;
            if (n_side <= 0 && !(tube.hanging())) continue;
            const auto pos = g.attach_position(tube, spans.at(tid), level, n_side);
            if (!pos) continue;
            const int rung = g.find(rung_id(tid, side, 0, *pos));
            const int snode = g.find("s:" + pad(level) + ":" + comps[ci]);
            g.add_edge(snode, rung, diameter / 2.0);
            g.level_index_[level].push_back(rung);
          }
        }
      }
      auto& idx = g.level_index_[level];
      std::sort(idx.begin(), idx.end());
      idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    }

    // Vertical product / interior regions.
    for (const auto& b : model.blocks) {
      for (const auto& vw : b.effective_vertical_weights()) {
        const int u = g.find("s:" + pad(b.index) + ":" + vw.bottom_component);
        const int v = g.find("s:" + pad(b.index + 1) + ":" + vw.top_component);
        g.add_edge(u, v, vw.weight);
      }
    }

    g.finalize();
    return g;
  }

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int i) const { return nodes_.at(i); }
  int levels() const { return levels_; }
  int base_node() const { return base_; }

  int find(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw std::out_of_range("no node with id " + id);
    return it->second;
  }
  bool contains(const std::string& id) const { return by_id_.count(id) > 0; }

  const std::vector<int>& level_nodes(int level) const { return level_index_.at(level); }

  double injectivity_radius(int i) const { return nodes_.at(i).inj; }
  int rung_depth(int i) const { return nodes_.at(i).depth; }

  const std::vector<std::pair<int, double>>& neighbors(int i) const { return adj_.at(i); }

  bool admissible(int i, const QueryFilter& f) const {
    const Node& n = nodes_[i];
    if (f.max_depth && n.depth > *f.max_depth) return false;
    if (f.block && (*f.block < n.block_lo || *f.block > n.block_hi)) return false;
    if (f.exclude_tubes && !n.tube.empty() && f.exclude_tubes->count(n.tube) > 0) return false;
    return true;
  }

  // Multi-source Dijkstra.  Deterministic: settle order ties broken by node
  // index, which coincides with lexicographic id order, and parents prefer
  // the smaller predecessor on equal distance.
  DijkstraResult run_dijkstra(const std::vector<int>& sources, const QueryFilter& filter = {},
                              int target = -1) const {
    DijkstraResult r;
    r.dist.assign(nodes_.size(), kInf);
    r.parent.assign(nodes_.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int s : sources) {
      if (!admissible(s, filter)) continue;
      r.dist[s] = 0.0;
      pq.push({0.0, s});
    }
    std::vector<char> done(nodes_.size(), 0);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      if (u == target) break;
      for (const auto& [v, w] : adj_[u]) {
        if (done[v] || !admissible(v, filter)) continue;
        const double nd = d + w;
        if (nd < r.dist[v] || (nd == r.dist[v] && r.parent[v] >= 0 && u < r.parent[v])) {
          r.dist[v] = nd;
          r.parent[v] = u;
          pq.push({nd, v});
        }
      }
    }
    return r;
  }

  PathResult shortest_path(int a, int b, const QueryFilter& filter = {}) const {
    if (a == b) return {0.0, {a}};
    auto r = run_dijkstra({a}, filter, b);
    if (r.dist[b] == kInf) {
      throw UnreachableError("unreachable: " + nodes_[a].id + " -> " + nodes_[b].id);
    }
    PathResult out;
    out.length = r.dist[b];
    for (int v = b; v != -1; v = r.parent[v]) out.nodes.push_back(v);
    std::reverse(out.nodes.begin(), out.nodes.end());
    return out;
  }

  double shortest_distance(int a, int b, const QueryFilter& filter = {}) const {
    return shortest_path(a, b, filter).length;
  }

  // Shortest bottom-to-top crossing of one block, restricted to its subgraph.
  double block_thickness(int block, std::optional<int> max_depth = std::nullopt) const {
    QueryFilter f;
    f.block = block;
    f.max_depth = max_depth;
    auto r = run_dijkstra(level_index_.at(block), f);
    double best = kInf;
    for (int v : level_index_.at(block + 1)) best = std::min(best, r.dist[v]);
    return best;
  }

  void export_csv(std::ostream& os) const {
    os << "node_id_a,node_id_b,weight\n";
    char buf[64];
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      for (const auto& [v, w] : adj_[u]) {
        if (static_cast<int>(u) < v) {
          std::snprintf(buf, sizeof buf, "%.9g", w);
          os << nodes_[u].id << "," << nodes_[v].id << "," << buf << "\n";
        }
      }
    }
  }

  void export_dot(std::ostream& os) const {
    os << "graph model {\n";
    char buf[64];
    for (const auto& n : nodes_) {
      os << "  \"" << n.id << "\" [inj=" << n.inj << "];\n";
    }
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      for (const auto& [v, w] : adj_[u]) {
        if (static_cast<int>(u) < v) {
          std::snprintf(buf, sizeof buf, "%.9g", w);
          os << "  \"" << nodes_[u].id << "\" -- \"" << nodes_[v].id << "\" [label=" << buf
             << "];\n";
        }
      }
    }
    os << "}\n";
  }

  // Test hook for hand-built graphs.
  static MetricGraph from_edges(const std::vector<std::string>& ids,
                                const std::vector<std::tuple<int, int, double>>& edges) {
    MetricGraph g;
    g.levels_ = 0;
    for (const auto& id : ids) g.add_node(id, SurfaceLocus{0, id}, 1.0, 0, 0, 0, "");
    for (const auto& [a, b, w] : edges) g.add_edge(a, b, w);
    g.finalize();
    return g;
  }

 private:
  static std::string pad(int v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d", v);
    return buf;
  }

  static std::string rung_id(const std::string& tube, char side, int depth, int pos) {
    char buf[48];
    std::snprintf(buf, sizeof buf, ":%c:d%02d:p%08d", side, depth, pos);
    return "t:" + tube + buf;
  }

  const SplitSurfaceSpec& surface_at(const ModelEnd& model, int level) const {
    if (level < static_cast<int>(model.blocks.size())) return model.blocks[level].bottom;
    return model.blocks.back().top;
  }

  int add_node(std::string id, Locus locus, double inj, int depth, int block_lo, int block_hi,
               std::string tube) {
    auto it = by_id_.find(id);
    if (it != by_id_.end()) return it->second;
    const int idx = static_cast<int>(nodes_.size());
    by_id_.emplace(id, idx);
    nodes_.push_back({std::move(id), std::move(locus), inj, depth, block_lo, block_hi,
                      std::move(tube)});
    adj_.emplace_back();
    return idx;
  }

  void add_edge(int u, int v, double w) {
    if (u == v || !(w > 0.0)) throw std::invalid_argument("edge must join distinct nodes with positive weight");
    for (auto& [x, wx] : adj_[u]) {
      if (x == v) {
        wx = std::min(wx, w);
        for (auto& [y, wy] : adj_[v])
          if (y == u) wy = wx;
        return;
      }
    }
    adj_[u].push_back({v, w});
    adj_[v].push_back({u, w});
  }

  static std::vector<int> side_positions(int n_side, int depth) {
    std::vector<int> out;
    const int stride = 1 << depth;
    for (int p = 0; p <= n_side; p += stride) out.push_back(p);
    if (out.back() != n_side) out.push_back(n_side);
    return out;
  }

  void build_ladder(const Tube& tube, std::pair<int, int> span, double eps0) {
    const int max_depth = std::max(1, static_cast<int>(std::ceil(tube.depth())));
    const double half_core = tube.core_length / 2.0;
    const int core = add_node("t:" + tube.id + ":zcore", TubeCoreLocus{tube.id}, half_core,
                              max_depth, span.first, span.second, tube.id);
    for (char side : {'L', 'R'}) {
      const int n_side = side == 'L' ? tube.left_count : tube.right_count;
      for (int k = 0; k <= max_depth; ++k) {
        const double inj = std::max(half_core, eps0 * std::exp(-k));
        const auto positions = side_positions(n_side, k);
        int prev = -1;
        for (int p : positions) {
          const int idx = add_node(rung_id(tube.id, side, k, p), TubeRungLocus{tube.id, side, k, p},
                                   inj, k, span.first, span.second, tube.id);
          if (prev >= 0) {
            const int prev_pos = std::get<TubeRungLocus>(nodes_[prev].locus).pos;
            add_edge(prev, idx, (p - prev_pos) * std::exp(-k));
          }
          prev = idx;
          if (k > 0 && (p % (1 << k) == 0 || p == n_side)) {
            // Rung down from the finer grid above; position exists there too.
            add_edge(find(rung_id(tube.id, side, k - 1, p)), idx, 1.0);
          }
          if (k == max_depth) add_edge(idx, core, std::max(half_core, 1e-9));
        }
      }
    }
  }

  // Boundary position where level `level` meets the given tube side.
  std::optional<int> attach_position(const Tube& tube, std::pair<int, int> span, int level,
                                     int n_side) const {
    if (tube.hanging()) {
      // A hanging tube touches exactly one horizontal boundary.
      const int touch = tube.kind == TubeKind::HangingUpper ? span.first + 1 : span.first;
      if (level != touch) return std::nullopt;
      return 0;
    }
    const int lo = span.first;
    const int hi = span.second + 1;
    if (level < lo || level > hi) return std::nullopt;
    const int n = std::max(n_side, 0);
    const int pos = static_cast<int>(std::lround(
        static_cast<double>(n) * (level - lo) / static_cast<double>(hi - lo)));
    if (level > lo) {
      // Never reuse the previous level's position; skip instead.
      const int prev = static_cast<int>(std::lround(
          static_cast<double>(n) * (level - 1 - lo) / static_cast<double>(hi - lo)));
      if (pos == prev) return std::nullopt;
    }
    return pos;
  }

  // Sort nodes lexicographically by id so index order realizes the
  // documented tie-break, then fix up all cross-references.
  void finalize() {
    std::vector<int> order(nodes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return nodes_[a].id < nodes_[b].id; });
    std::vector<int> rank(nodes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

    std::vector<Node> nodes(nodes_.size());
    std::vector<std::vector<std::pair<int, double>>> adj(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      nodes[rank[i]] = std::move(nodes_[i]);
      auto& edges = adj[rank[i]];
      edges = std::move(adj_[i]);
      for (auto& [v, w] : edges) v = rank[v];
      std::sort(edges.begin(), edges.end());
    }
    nodes_ = std::move(nodes);
    adj_ = std::move(adj);
    by_id_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) by_id_[nodes_[i].id] = static_cast<int>(i);
    for (auto& idx : level_index_) {
      for (int& v : idx) v = rank[v];
      std::sort(idx.begin(), idx.end());
    }
    base_ = -1;
    if (levels_ > 0 && !level_index_.empty()) {
      for (int v : level_index_[0]) {
        if (std::holds_alternative<SurfaceLocus>(nodes_[v].locus)) {
          base_ = v;
          break;
        }
      }
    }
  }

  std::vector<Node> nodes_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::map<std::string, int> by_id_;
  std::vector<std::vector<int>> level_index_;
  int levels_ = 0;
  int base_ = -1;
};

}  // namespace horomodel
