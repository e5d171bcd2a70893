#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "horomodel/metric_graph.hpp"

namespace horomodel {

// Ray tracing and the horosphere trichotomy: almost-minimizing deficit
// profiles, thin/thick verdicts, Dense / Recurrent / ProperlyEmbedded.

struct VerticalStrategy {
  std::string component;
};
struct MinimizingStrategy {};
struct WindingStrategy {
  std::vector<long long> loops;  // per level; 0 = no detour
};
struct ExplicitStrategy {
  std::vector<std::string> nodes;  // one id per checkpoint
};

using Strategy =
    std::variant<VerticalStrategy, MinimizingStrategy, WindingStrategy, ExplicitStrategy>;

struct RaySegment {
  std::vector<int> nodes;  // includes both endpoints
  double length = 0.0;     // graph length plus any winding detour
  int max_depth = 0;
  double min_inj = std::numeric_limits<double>::infinity();
};

struct Ray {
  std::vector<int> checkpoints;       // one per level 0..horizon-1
  std::vector<int> levels;            // level attributed to each checkpoint
  std::vector<RaySegment> segments;   // segments[k] joins checkpoints k-1, k
  bool is_explicit = false;
};

enum class TrendKind { Bounded, Logarithmic, Linear };

inline const char* to_string(TrendKind k) {
  switch (k) {
    case TrendKind::Bounded: return "bounded";
    case TrendKind::Logarithmic: return "logarithmic";
    case TrendKind::Linear: return "linear";
  }
  return "?";
}

struct TrendFit {
  TrendKind kind = TrendKind::Bounded;
  double a = 0.0;  // intercept; for Bounded this is C_est (max deficit)
  double b = 0.0;  // slope against ln t or t
  double residual = 0.0;
};

struct DeficitSample {
  double t = 0.0;
  double delta = 0.0;
  double inj = 0.0;
  int depth = 0;
};

struct DeficitProfile {
  std::vector<DeficitSample> samples;
  TrendFit trend;
};

enum class Horosphere { Dense, Recurrent, ProperlyEmbedded };

inline const char* to_string(Horosphere h) {
  switch (h) {
    case Horosphere::Dense: return "Dense";
    case Horosphere::Recurrent: return "Recurrent";
    case Horosphere::ProperlyEmbedded: return "ProperlyEmbedded";
  }
  return "?";
}

struct RayClassification {
  bool exiting = true;
  bool almost_minimizing = false;
  double C_est = 0.0;
  TrendFit trend;
  bool thick = false;
  double inf_inj = 0.0;
  int tail_max_depth = 0;
  std::optional<Horosphere> horosphere;  // absent for non-exiting rays
};

namespace rays {

inline std::string pad4(int v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", v);
  return buf;
}

inline std::string rung_id(const std::string& tube, char side, int depth, int pos) {
  char buf[48];
  std::snprintf(buf, sizeof buf, ":%c:d%02d:p%08d", side, depth, pos);
  return "t:" + tube + buf;
}

inline void absorb(RaySegment& seg, const MetricGraph& g, const std::vector<int>& nodes) {
  for (int v : nodes) {
    seg.max_depth = std::max(seg.max_depth, g.rung_depth(v));
    seg.min_inj = std::min(seg.min_inj, g.injectivity_radius(v));
    if (seg.nodes.empty() || seg.nodes.back() != v) seg.nodes.push_back(v);
  }
}

inline int node_level(const MetricGraph& g, int v) {
  const Node& n = g.node(v);
  if (const auto* s = std::get_if<SurfaceLocus>(&n.locus)) return s->level;
  return n.block_lo;  // tube nodes sit at their lowest block's boundary
}

// Detour at the given rung node: descend its ladder column, wrap `loops`
// times around the meridian, climb back.  Cost model: one unit per rung, wrap
// cost per loop max(core length, 2e^{-k}); depth chosen to minimize the total.
inline RaySegment winding_detour(const MetricGraph& g, int rung, long long loops) {
  const Node& n = g.node(rung);
  const auto& locus = std::get<TubeRungLocus>(n.locus);
  const int core = g.find("t:" + n.tube + ":zcore");
  const double core_length = 2.0 * g.injectivity_radius(core);
  const int max_depth = g.rung_depth(core);

  auto wrap = [&](int k) { return std::max(core_length, 2.0 * std::exp(-k)); };
  int k_star = 1;
  double best = 2.0 * 1 + static_cast<double>(loops) * wrap(1);
  for (int k = 2; k <= max_depth; ++k) {
    const double cost = 2.0 * k + static_cast<double>(loops) * wrap(k);
    if (cost < best) {
      best = cost;
      k_star = k;
    }
  }

  // Column position available at depth k*: round down to the grid.
  const int p = locus.pos - locus.pos % (1 << k_star);
  const std::string deep_id = rung_id(n.tube, locus.side, k_star, p);
  const int deep = g.find(deep_id);
  auto down = g.shortest_path(rung, deep);

  RaySegment seg;
  absorb(seg, g, down.nodes);
  std::vector<int> up(down.nodes.rbegin(), down.nodes.rend());
  absorb(seg, g, up);
  seg.length = 2.0 * down.length + static_cast<double>(loops) * wrap(k_star);
  seg.min_inj = std::min(seg.min_inj, g.injectivity_radius(deep));
  return seg;
}

}  // namespace rays

inline Ray trace_ray(const MetricGraph& g, const Strategy& strategy, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const bool is_explicit = std::holds_alternative<ExplicitStrategy>(strategy);
  if (!is_explicit && horizon > g.levels()) {
    throw std::invalid_argument("horizon " + std::to_string(horizon) +
                                " exceeds model levels (" + std::to_string(g.levels()) + ")");
  }

  Ray ray;
  ray.is_explicit = is_explicit;

  if (const auto* e = std::get_if<ExplicitStrategy>(&strategy)) {
    for (const auto& id : e->nodes) ray.checkpoints.push_back(g.find(id));
    if (ray.checkpoints.empty()) throw std::invalid_argument("explicit ray needs >= 1 node");
  } else if (const auto* v = std::get_if<VerticalStrategy>(&strategy)) {
    for (int level = 0; level < horizon; ++level) {
      const std::string id = "s:" + rays::pad4(level) + ":" + v->component;
      if (!g.contains(id)) {
        throw std::invalid_argument("component " + v->component + " absent at level " +
                                    std::to_string(level));
      }
      ray.checkpoints.push_back(g.find(id));
    }
  } else {
    // Minimizing (also the backbone for Winding): per level, the node closest
    // to the base; ties fall to the smaller index = lexicographically
    // smaller id.
    auto r = g.run_dijkstra({g.base_node()});
    for (int level = 0; level < horizon; ++level) {
      int best = -1;
      for (int v : g.level_nodes(level)) {
        if (r.dist[v] == MetricGraph::kInf) continue;
        if (best < 0 || r.dist[v] < r.dist[best]) best = v;
      }
      if (best < 0) throw UnreachableError("no reachable node at level " + std::to_string(level));
      ray.checkpoints.push_back(best);
    }
  }

  for (int c : ray.checkpoints) ray.levels.push_back(rays::node_level(g, c));

  const auto* winding = std::get_if<WindingStrategy>(&strategy);
  for (std::size_t k = 0; k < ray.checkpoints.size(); ++k) {
    RaySegment seg;
    if (k == 0) {
      rays::absorb(seg, g, {ray.checkpoints[0]});
    } else {
      auto p = g.shortest_path(ray.checkpoints[k - 1], ray.checkpoints[k]);
      rays::absorb(seg, g, p.nodes);
      seg.length = p.length;
    }
    const int level = ray.levels[k];
    if (winding != nullptr && level < static_cast<int>(winding->loops.size()) &&
        winding->loops[level] > 0) {
      // Wind around the lexicographically first tube attached at this level.
      int rung = -1;
      for (int v : g.level_nodes(level)) {
        if (std::holds_alternative<TubeRungLocus>(g.node(v).locus)) {
          rung = v;
          break;
        }
      }
      if (rung < 0) {
        throw std::invalid_argument("no tube to wind at level " + std::to_string(level));
      }
      auto to_rung = g.shortest_path(ray.checkpoints[k], rung);
      auto detour = rays::winding_detour(g, rung, winding->loops[level]);
      std::vector<int> back(to_rung.nodes.rbegin(), to_rung.nodes.rend());
      rays::absorb(seg, g, to_rung.nodes);
      for (int v : detour.nodes) {
        seg.max_depth = std::max(seg.max_depth, g.rung_depth(v));
        seg.min_inj = std::min(seg.min_inj, g.injectivity_radius(v));
        seg.nodes.push_back(v);
      }
      rays::absorb(seg, g, back);
      seg.length += 2.0 * to_rung.length + detour.length;
      seg.min_inj = std::min(seg.min_inj, detour.min_inj);
    }
    ray.segments.push_back(std::move(seg));
  }
  return ray;
}

namespace rays {

struct FitCandidate {
  TrendKind kind;
  double a = 0.0, b = 0.0, residual = 0.0;
};

// Least squares of y against {1} or {1, x}.
inline FitCandidate fit_line(TrendKind kind, const std::vector<double>& xs,
                             const std::vector<double>& ys, bool with_slope) {
  FitCandidate c{kind};
  const std::size_t n = ys.size();
  if (n == 0) return c;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  if (with_slope) {
    const double det = n * sxx - sx * sx;
    if (std::abs(det) > 1e-12) {
      c.b = (n * sxy - sx * sy) / det;
      c.a = (sy - c.b * sx) / n;
    } else {
      c.a = sy / n;
    }
    if (c.b < 0) {  // deficits never shrink; a negative slope is just noise
      c.b = 0;
      c.a = sy / n;
    }
  } else {
    c.a = sy / n;
  }
  double r2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (c.a + c.b * xs[i]);
    r2 += e * e;
  }
  c.residual = std::sqrt(r2);
  return c;
}

inline TrendFit select_trend(const std::vector<DeficitSample>& samples) {
  std::vector<double> t, lnt, delta;
  double max_delta = 0.0;
  for (const auto& s : samples) {
    max_delta = std::max(max_delta, s.delta);
    if (s.t <= 0.0) continue;
    t.push_back(s.t);
    lnt.push_back(std::log(s.t));
    delta.push_back(s.delta);
  }
  TrendFit out;
  if (delta.size() < 3 || max_delta < 1e-9) {
    out.kind = TrendKind::Bounded;
    out.a = max_delta;
    return out;
  }
  std::vector<FitCandidate> cands = {
      fit_line(TrendKind::Bounded, t, delta, false),
      fit_line(TrendKind::Logarithmic, lnt, delta, true),
      fit_line(TrendKind::Linear, t, delta, true),
  };
  // Growth order is slowest-first.  A model wins outright when its residual
  // is at most half the runner-up's; otherwise fall back to the slowest
  // model whose residual is within 2x of the best.
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (cands[i].residual < cands[best].residual) best = i;
  }
  double second = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (i != best) second = std::min(second, cands[i].residual);
  }
  std::size_t pick = best;
  if (!(cands[best].residual <= 0.5 * second)) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (cands[i].residual <= 2.0 * cands[best].residual) {
        pick = i;
        break;
      }
    }
  }
  out.kind = cands[pick].kind;
  out.a = pick == 0 ? max_delta : cands[pick].a;  // Bounded reports C_est
  out.b = cands[pick].b;
  out.residual = cands[pick].residual;
  return out;
}

}  // namespace rays

inline DeficitProfile deficit_profile(const MetricGraph& g, const Ray& ray) {
  DeficitProfile profile;
  auto r = g.run_dijkstra({g.base_node()});
  double t = 0.0;
  for (std::size_t k = 0; k < ray.checkpoints.size(); ++k) {
    t += ray.segments[k].length;
    const double d = r.dist[ray.checkpoints[k]];
    DeficitSample s;
    s.t = t;
    s.delta = d == MetricGraph::kInf ? 0.0 : std::max(0.0, t - d);
    s.inj = ray.segments[k].min_inj;
    s.depth = ray.segments[k].max_depth;
    profile.samples.push_back(s);
  }
  profile.trend = rays::select_trend(profile.samples);
  return profile;
}

inline RayClassification classify(const MetricGraph& g, const Ray& ray, double C, double eps) {
  if (ray.checkpoints.size() < 20) {
    throw std::invalid_argument("horizon too short for trend classification");
  }
  const auto profile = deficit_profile(g, ray);

  RayClassification out;
  out.trend = profile.trend;
  out.C_est = 0.0;
  for (const auto& s : profile.samples) out.C_est = std::max(out.C_est, s.delta);
  out.almost_minimizing = profile.trend.kind == TrendKind::Bounded && out.C_est <= C;

  if (ray.is_explicit) {
    int max_level = 0;
    for (int l : ray.levels) max_level = std::max(max_level, l);
    out.exiting = max_level >= static_cast<int>(ray.levels.size()) - 1;
  }

  const std::size_t tail_from = profile.samples.size() / 2;
  out.inf_inj = std::numeric_limits<double>::infinity();
  for (std::size_t k = tail_from; k < profile.samples.size(); ++k) {
    out.inf_inj = std::min(out.inf_inj, profile.samples[k].inj);
    out.tail_max_depth = std::max(out.tail_max_depth, profile.samples[k].depth);
  }
  out.thick = out.inf_inj >= eps;

  if (out.exiting) {
    if (!out.almost_minimizing) {
      out.horosphere = Horosphere::Dense;
    } else if (out.thick) {
      out.horosphere = Horosphere::ProperlyEmbedded;
    } else {
      out.horosphere = Horosphere::Recurrent;
    }
  }
  return out;
}

}  // namespace horomodel
