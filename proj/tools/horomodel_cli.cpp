#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "horomodel/builders.hpp"
#include "horomodel/hierarchy.hpp"
#include "horomodel/json_io.hpp"
#include "horomodel/metric_graph.hpp"
#include "horomodel/model.hpp"
#include "horomodel/ray.hpp"

namespace hm = horomodel;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

hm::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read file: " + path);
  try {
    return hm::json::parse(in);
  } catch (const std::exception& e) {
    throw InputError("parse error in " + path + ": " + e.what());
  }
}

hm::ModelDocument load_model(const std::string& path) {
  try {
    return hm::document_from_json(read_json_file(path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError("malformed model file " + path + ": " + e.what());
  }
}

hm::FamilyParams parse_family(const std::string& family, const hm::json& j) {
  hm::FamilyParams params;
  params.seed = j.value("seed", 0u);
  if (family == "bounded_geometry") {
    params.family = hm::BoundedGeometryParams{j.value("n_blocks", 10)};
  } else if (family == "flute") {
    params.family = hm::FluteParams{j.value("n_necks", 100)};
  } else if (family == "i_bounded") {
    if (j.contains("twists")) {
      params.family = hm::IBoundedParams{j.at("twists").get<std::vector<int>>()};
    } else {
      params.family = hm::i_bounded_params(j.value("count", 12));
    }
  } else if (family == "amalgamated") {
    if (j.contains("blocks")) {
      hm::AmalgFamilyParams p;
      for (const auto& bj : j.at("blocks")) {
        std::vector<hm::AmalgParams> list;
        for (const auto& pj : bj) list.push_back({pj.at("m").get<int>(), pj.at("n").get<int>()});
        p.blocks.push_back(std::move(list));
      }
      params.family = std::move(p);
    } else {
      params.family = hm::amalg_counterexample_params(j.value("count", 8));
    }
  } else if (family == "split") {
    if (j.contains("blocks")) {
      hm::SplitFamilyParams p;
      for (const auto& bj : j.at("blocks")) {
        p.blocks.push_back({bj.at("l").get<int>(), bj.at("m").get<int>(), bj.at("n").get<int>()});
      }
      params.family = std::move(p);
    } else {
      params.family =
          hm::split_counterexample_params(j.value("count", 12), j.value("cap_exponent", 30));
    }
  } else if (family == "thin_all") {
    hm::ThinAllParams p;
    if (j.contains("js")) {
      p.js = j.at("js").get<std::vector<int>>();
    } else {
      for (int i = 6; i < 6 + j.value("count", 6); ++i) p.js.push_back(1 << i);
    }
    p.d = j.value("d", 1.0);
    p.C = j.value("C", 8.0);
    params.family = std::move(p);
  } else {
    throw InputError("unknown family: " + family);
  }
  return params;
}

std::vector<long long> default_winding_loops(const hm::MetricGraph& g, int horizon) {
  std::vector<long long> loops(horizon, 0);
  for (int level = 0; level < horizon; ++level) {
    for (int v : g.level_nodes(level)) {
      if (std::holds_alternative<hm::TubeRungLocus>(g.node(v).locus)) {
        loops[level] = 1LL << std::min(level / 2 + 1, 20);
        break;
      }
    }
  }
  return loops;
}

hm::Strategy make_strategy(const std::string& name, const hm::MetricGraph& g, int horizon,
                           const std::string& component, const std::string& loops_csv,
                           const std::vector<std::string>& explicit_nodes) {
  if (name == "vertical") return hm::VerticalStrategy{component};
  if (name == "minimizing") return hm::MinimizingStrategy{};
  if (name == "winding") {
    hm::WindingStrategy w;
    if (loops_csv.empty()) {
      w.loops = default_winding_loops(g, horizon);
    } else {
      std::stringstream ss(loops_csv);
      std::string item;
      while (std::getline(ss, item, ',')) w.loops.push_back(std::stoll(item));
    }
    return w;
  }
  if (name == "explicit") {
    if (explicit_nodes.empty()) throw InputError("explicit strategy needs --node ids");
    return hm::ExplicitStrategy{explicit_nodes};
  }
  throw InputError("unknown strategy: " + name);
}

void print_classification(std::ostream& os, const std::string& header, const hm::MetricGraph& g,
                          const hm::Ray& ray, double C, double eps) {
  const auto profile = hm::deficit_profile(g, ray);
  const auto verdict = hm::classify(g, ray, C, eps);
  os << "# " << header << "\n";
  os << "t,delta,inj,depth\n";
  for (const auto& s : profile.samples) {
    os << fmt9(s.t) << "," << fmt9(s.delta) << "," << fmt9(s.inj) << "," << s.depth << "\n";
  }
  os << "trend: " << hm::to_string(profile.trend.kind) << " a=" << fmt9(profile.trend.a)
     << " b=" << fmt9(profile.trend.b) << " residual=" << fmt9(profile.trend.residual) << "\n";
  os << "exiting: " << (verdict.exiting ? "yes" : "no") << "\n";
  os << "am: " << (verdict.almost_minimizing ? "AM" : "NotAM") << " C_est=" << fmt9(verdict.C_est)
     << "\n";
  os << "thickness: " << (verdict.thick ? "Thick" : "Thin") << " inf_inj=" << fmt9(verdict.inf_inj)
     << " tail_max_depth=" << verdict.tail_max_depth << "\n";
  os << "horosphere: " << (verdict.horosphere ? hm::to_string(*verdict.horosphere) : "n/a")
     << "\n";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path.string());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorial block models of degenerate ends: build, discretize, classify"};
  app.require_subcommand(1);

  std::string family, params_path, model_path, out_path = ".", strategy = "minimizing";
  std::string component = "S", loops_csv;
  std::vector<std::string> explicit_nodes;
  std::string node_a, node_b;
  int horizon = 20;
  double C = 8.0, eps = 0.1 * std::exp(-5.0);
  unsigned seed = 0;
  bool all_blocks = false;
  std::optional<int> max_depth;

  auto* cmd_build = app.add_subcommand("build", "generate a family model file");
  cmd_build->add_option("--family", family, "family name")->required();
  cmd_build->add_option("--params", params_path, "JSON parameter file");
  cmd_build->add_option("--out", out_path, "output model file");
  cmd_build->add_option("--seed", seed, "seed for randomized padding");

  auto* cmd_validate = app.add_subcommand("validate", "validate a model file");
  cmd_validate->add_option("--model", model_path)->required();

  auto* cmd_export = app.add_subcommand("export-graph", "discretize and export DOT/CSV");
  cmd_export->add_option("--model", model_path)->required();
  cmd_export->add_option("--out", out_path, "output directory");

  auto* cmd_distance = app.add_subcommand("distance", "shortest distance between two nodes");
  cmd_distance->add_option("--model", model_path)->required();
  cmd_distance->add_option("a", node_a)->required();
  cmd_distance->add_option("b", node_b)->required();
  cmd_distance->add_option("--max-depth", max_depth, "restrict admissible rung depth");

  auto* cmd_thickness = app.add_subcommand("thickness", "per-block thickness");
  cmd_thickness->add_option("--model", model_path)->required();
  cmd_thickness->add_flag("--all", all_blocks, "every block (CSV)");
  cmd_thickness->add_option("--out", out_path, "output directory");

  auto* cmd_classify = app.add_subcommand("classify", "trace and classify a ray");
  cmd_classify->add_option("--model", model_path)->required();
  cmd_classify->add_option("--strategy", strategy, "vertical|minimizing|winding|explicit");
  cmd_classify->add_option("--horizon", horizon);
  cmd_classify->add_option("--C", C, "almost-minimizing constant");
  cmd_classify->add_option("--eps", eps, "thickness threshold");
  cmd_classify->add_option("--component", component, "component for the vertical strategy");
  cmd_classify->add_option("--loops", loops_csv, "winding loop counts, comma separated");
  cmd_classify->add_option("--node", explicit_nodes, "explicit checkpoint node ids");

  auto* cmd_report = app.add_subcommand("report", "full bundle for a family");
  cmd_report->add_option("--family", family)->required();
  cmd_report->add_option("--params", params_path);
  cmd_report->add_option("--horizon", horizon);
  cmd_report->add_option("--C", C);
  cmd_report->add_option("--eps", eps);
  cmd_report->add_option("--out", out_path, "output directory");
  cmd_report->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (cmd_build->parsed()) {
      hm::json pj = params_path.empty() ? hm::json::object() : read_json_file(params_path);
      auto fp = parse_family(family, pj);
      fp.seed = seed;
      auto built = hm::build(fp);
      hm::ModelDocument doc{std::move(built.model), std::move(built.hierarchy)};
      auto out = open_out(out_path == "." ? family + ".json" : out_path);
      hm::save_document(out, doc);
    } else if (cmd_validate->parsed()) {
      auto doc = load_model(model_path);
      auto report = hm::validate(doc.model);
      if (!report.valid()) {
        std::cerr << report.violations.front().message << "\n";
        return kExitInvalid;
      }
      std::cout << "valid\n";
    } else if (cmd_export->parsed()) {
      auto doc = load_model(model_path);
      auto g = hm::MetricGraph::discretize(doc.model);
      fs::create_directories(out_path);
      auto csv = open_out(fs::path(out_path) / "graph.csv");
      g.export_csv(csv);
      auto dot = open_out(fs::path(out_path) / "graph.dot");
      g.export_dot(dot);
      std::cout << g.node_count() << " nodes\n";
    } else if (cmd_distance->parsed()) {
      auto doc = load_model(model_path);
      auto g = hm::MetricGraph::discretize(doc.model);
      hm::QueryFilter f;
      f.max_depth = max_depth;
      std::cout << fmt9(g.shortest_distance(g.find(node_a), g.find(node_b), f)) << "\n";
    } else if (cmd_thickness->parsed()) {
      auto doc = load_model(model_path);
      auto g = hm::MetricGraph::discretize(doc.model);
      std::ostringstream csv;
      csv << "block,thickness\n";
      for (std::size_t b = 0; b < doc.model.blocks.size(); ++b) {
        csv << b << "," << fmt9(g.block_thickness(static_cast<int>(b))) << "\n";
        if (!all_blocks) break;
      }
      if (out_path != ".") {
        fs::create_directories(out_path);
        open_out(fs::path(out_path) / "thickness.csv") << csv.str();
      }
      std::cout << csv.str();
    } else if (cmd_classify->parsed()) {
      auto doc = load_model(model_path);
      auto g = hm::MetricGraph::discretize(doc.model);
      auto strat = make_strategy(strategy, g, horizon, component, loops_csv, explicit_nodes);
      auto ray = hm::trace_ray(g, strat, horizon);
      std::ostringstream header;
      header << "classify strategy=" << strategy << " horizon=" << horizon << " C=" << fmt9(C)
             << " eps=" << fmt9(eps);
      print_classification(std::cout, header.str(), g, ray, C, eps);
    } else if (cmd_report->parsed()) {
      hm::json pj = params_path.empty() ? hm::json::object() : read_json_file(params_path);
      auto fp = parse_family(family, pj);
      fp.seed = seed;
      auto built = hm::build(fp);
      auto g = hm::MetricGraph::discretize(built.model);
      fs::create_directories(out_path);

      auto report = open_out(fs::path(out_path) / "report.txt");
      report << "family: " << family << "\n";
      report << "config: horizon=" << horizon << " C=" << fmt9(C) << " eps=" << fmt9(eps)
             << " seed=" << seed << "\n";
      report << "params: " << (params_path.empty() ? "defaults" : params_path) << "\n";
      report << "blocks: " << built.model.blocks.size() << " nodes: " << g.node_count() << "\n\n";

      report << "block,thickness\n";
      for (std::size_t b = 0; b < built.model.blocks.size(); ++b) {
        report << b << "," << fmt9(g.block_thickness(static_cast<int>(b))) << "\n";
      }
      report << "\n";

      const int h = std::min(horizon, g.levels());
      if (h < 20) {
        report << "horizon " << h << " too short for trend verdicts (need >= 20)\n";
        std::cout << "report written to " << (fs::path(out_path) / "report.txt").string()
                  << "\n";
        return kExitOk;
      }
      std::vector<std::pair<std::string, hm::Strategy>> strategies;
      strategies.push_back({"Minimizing", hm::MinimizingStrategy{}});
      bool has_tubes = !built.model.tube_table().empty();
      if (!has_tubes) strategies.push_back({"Vertical", hm::VerticalStrategy{"S"}});
      if (has_tubes) {
        strategies.push_back({"Winding", hm::WindingStrategy{default_winding_loops(g, h)}});
      }
      for (const auto& [name, strat] : strategies) {
        auto ray = hm::trace_ray(g, strat, h);
        const auto verdict = hm::classify(g, ray, C, eps);
        report << name << ": " << (verdict.almost_minimizing ? "AM" : "NotAM") << ", "
               << (verdict.thick ? "Thick" : "Thin") << ", "
               << (verdict.horosphere ? hm::to_string(*verdict.horosphere) : "n/a") << "\n";
      }

      auto hreport = hm::validate_hierarchy(built.hierarchy.geodesics, built.hierarchy.path);
      report << "\nhierarchy: " << (hreport.valid() ? "pass" : "fail") << "\n";
      auto tally = hm::check_tally(built.model, built.hierarchy);
      report << "tube tally: " << (tally.valid() ? "pass" : "fail") << "\n";
      std::cout << "report written to " << (fs::path(out_path) / "report.txt").string() << "\n";
    }
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const hm::InvalidModelError& e) {
    std::cerr << e.report.violations.front().message << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
