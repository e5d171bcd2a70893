// Contrasts the two counterexample families: one with unbounded block
// thickness but a shallow minimizing ray, one with constant block thickness
// but a minimizing ray forced ever deeper into the hanging tubes.

#include <cmath>
#include <cstdio>

#include "horomodel/builders.hpp"
#include "horomodel/metric_graph.hpp"
#include "horomodel/ray.hpp"

using namespace horomodel;

int main() {
  {
    auto g = MetricGraph::discretize(build(FamilyParams{amalg_counterexample_params(8)}).model);
    auto prof = deficit_profile(g, trace_ray(g, MinimizingStrategy{}, g.levels()));
    std::printf("amalgamated family (thickness grows, ray stays shallow)\n");
    std::printf("%-6s %-10s %s\n", "block", "thickness", "ray depth");
    for (int b = 0; b < 8; ++b) {
      std::printf("%-6d %-10.3f %d\n", b, g.block_thickness(b), prof.samples[b + 1].depth);
    }
  }
  {
    auto p = split_counterexample_params(12);
    auto g = MetricGraph::discretize(build(FamilyParams{p}).model);
    auto prof = deficit_profile(g, trace_ray(g, MinimizingStrategy{}, g.levels()));
    std::printf("\nsplit family (thickness constant, ray dives)\n");
    std::printf("%-6s %-10s %-10s %s\n", "block", "thickness", "ray depth", "ln(l_i)-2");
    for (int b = 0; b < 12; ++b) {
      std::printf("%-6d %-10.3f %-10d %.3f\n", b, g.block_thickness(b),
                  prof.samples[b + 1].depth, std::log(static_cast<double>(p.blocks[b].l)) - 2.0);
    }
  }
  return 0;
}
