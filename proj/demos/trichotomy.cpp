// Builds the three canonical ends and prints the horosphere verdict for one
// natural ray in each: a bounded-geometry stack (vertical ray), an i-bounded
// end (winding ray), and a split-family end (minimizing ray).

#include <cmath>
#include <cstdio>
#include <vector>

#include "horomodel/builders.hpp"
#include "horomodel/metric_graph.hpp"
#include "horomodel/ray.hpp"

using namespace horomodel;

static void run(const char* label, const MetricGraph& g, const Strategy& s, int horizon) {
  auto ray = trace_ray(g, s, horizon);
  auto v = classify(g, ray, 8.0, 0.1 * std::exp(-5.0));
  std::printf("%-18s %-6s %-5s C_est=%-8.3f -> %s\n", label,
              v.almost_minimizing ? "AM" : "NotAM", v.thick ? "Thick" : "Thin", v.C_est,
              v.horosphere ? to_string(*v.horosphere) : "non-exiting");
}

int main() {
  {
    auto g = MetricGraph::discretize(build(FamilyParams{BoundedGeometryParams{25}}).model);
    run("bounded geometry", g, VerticalStrategy{"S"}, 20);
  }
  {
    auto g = MetricGraph::discretize(build(FamilyParams{i_bounded_params(10)}).model);
    std::vector<long long> loops(20, 0);
    for (int l = 1; l < 20; l += 2) loops[l] = 1LL << (l + 2);
    run("i-bounded", g, WindingStrategy{loops}, 20);
    run("i-bounded", g, MinimizingStrategy{}, 20);
  }
  {
    auto g = MetricGraph::discretize(
        build(FamilyParams{split_counterexample_params(20, 9)}).model);
    run("split family", g, MinimizingStrategy{}, 20);
  }
  return 0;
}
