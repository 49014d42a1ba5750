#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "nsplace/design.hpp"
#include "nsplace/global_placer.hpp"
#include "nsplace/metrics.hpp"
#include "nsplace/milp.hpp"
#include "nsplace/spectral.hpp"
#include "nsplace/synth.hpp"
#include "nsplace/util.hpp"

namespace {

using namespace nsplace;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;

struct RunConfig {
  double lns = 1.0;
  double ld = 1.0;
  double c = 0;         // 0 -> 1% of max board dimension
  double alpha = 1e-3;
  double beta = 0.9;
  int iters = 5000;
  double k = 0;         // 0 -> 5% of max board dimension
  double bin_size = 0;  // 0 -> grid default
  double time_cap = 14400;
  long node_limit = std::numeric_limits<long>::max() / 8;
  uint64_t seed = 0;
  double pair_radius = std::numeric_limits<double>::infinity();
  int threads = 0;  // 0 -> NSPLACE_THREADS or hardware
  bool rel_constraints = true;
  std::string trace;
};

void add_common_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--lns", rc.lns, "net-separation weight");
  cmd->add_option("--ld", rc.ld, "density weight");
  cmd->add_option("--c", rc.c, "wirelength smoothing (mm)");
  cmd->add_option("--alpha", rc.alpha, "learning rate");
  cmd->add_option("--beta", rc.beta, "momentum");
  cmd->add_option("--iters", rc.iters, "gradient iteration budget");
  cmd->add_option("--k", rc.k, "relative-constraint gap threshold (mm)");
  cmd->add_option("--bin-size", rc.bin_size, "density bin side (mm)");
  cmd->add_option("--time-cap", rc.time_cap, "MILP wall-clock cap (s)");
  cmd->add_option("--node-limit", rc.node_limit, "MILP node budget");
  cmd->add_option("--seed", rc.seed, "random seed");
  cmd->add_option("--pair-radius", rc.pair_radius,
                  "net-pair bounding box filter radius (mm)");
  cmd->add_option("--threads", rc.threads, "worker threads");
  cmd->add_flag("!--no-rel-constraints", rc.rel_constraints,
                "skip relative-position pruning");
  cmd->add_option("--trace", rc.trace, "per-iteration trace file");
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("NSPLACE_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

ObjectiveConfig make_obj_config(const Design& d, const RunConfig& rc) {
  ObjectiveConfig cfg = ObjectiveConfig::defaults(d);
  if (rc.c > 0) cfg.c = rc.c;
  cfg.lambda_density = rc.ld;
  cfg.lambda_ns = rc.lns;
  return cfg;
}

double threshold_k(const Design& d, const RunConfig& rc) {
  return rc.k > 0 ? rc.k : 0.05 * std::max(d.board.width, d.board.height);
}

Placement stage_init(const Design& d, const RunConfig& rc) {
  Placement seed = spectral_coordinates(d);
  ObjectiveConfig obj = make_obj_config(d, rc);
  PairSet pairs = pair_set(d, &seed, rc.pair_radius);
  DensityGrid grid = DensityGrid::make(d, rc.bin_size);
  return orientation_search(d, seed, obj, pairs, grid,
                            resolve_threads(rc.threads));
}

Placement stage_gp(const Design& d, const Placement& seed, const RunConfig& rc,
                   GpStats* stats = nullptr) {
  ObjectiveConfig obj = make_obj_config(d, rc);
  GpConfig gp;
  gp.alpha = rc.alpha;
  gp.beta = rc.beta;
  gp.max_iters = rc.iters;
  gp.threads = resolve_threads(rc.threads);
  gp.trace_path = rc.trace;
  PairSet pairs = pair_set(d, &seed, rc.pair_radius);
  return run_global_placement(d, seed, obj, gp, stats, &pairs);
}

LegalizeResult stage_legalize(const Design& d, const Placement& gp,
                              const RunConfig& rc) {
  BnbConfig cfg;
  cfg.time_cap_s = rc.time_cap;
  cfg.node_limit = rc.node_limit;
  return legalize(d, gp, threshold_k(d, rc), cfg, rc.rel_constraints);
}

int run_place(const std::string& design_path, const RunConfig& rc,
              const std::string& out, const std::string& report_path,
              const std::string& svg_path, bool hulls) {
  Design d = parse_design(read_file(design_path));
  std::map<std::string, double> timings;
  Timer total;

  Timer t_init;
  Placement seed = stage_init(d, rc);
  timings["init"] = t_init.seconds();

  Timer t_gp;
  Placement gp = stage_gp(d, seed, rc);
  timings["gp"] = t_gp.seconds();

  Timer t_legal;
  LegalizeResult legal = stage_legalize(d, gp, rc);
  timings["legalize"] = t_legal.seconds();
  timings["total"] = total.seconds();

  write_file(out, serialize_placement(d, legal.placement));
  MetricsReport report = compute_report(d, legal.placement, timings);
  std::cout << format_table(report);
  if (!report_path.empty()) write_file(report_path, report_to_csv(report));
  if (!svg_path.empty()) {
    SvgOptions so;
    so.draw_hulls = hulls;
    write_file(svg_path, render_svg(d, legal.placement, so));
  }
  return legal.status == MilpStatus::kFeasibleTimeout ? kExitTimeout : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"net-separation-aware PCB placement"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string design_path, placement_path, out_path, report_path, svg_path,
      baseline_path, solution_path;
  bool hulls = false;

  auto* cmd_place = app.add_subcommand("place", "full flow: init, gp, legalize");
  cmd_place->add_option("design", design_path)->required();
  cmd_place->add_option("-o,--out", out_path, "placement output")->required();
  cmd_place->add_option("--report", report_path, "metrics CSV");
  cmd_place->add_option("--svg", svg_path, "SVG rendering");
  cmd_place->add_flag("--hulls", hulls, "draw net hulls in the SVG");
  add_common_flags(cmd_place, rc);

  auto* cmd_init = app.add_subcommand("init", "spectral seed placement");
  cmd_init->add_option("design", design_path)->required();
  cmd_init->add_option("-o,--out", out_path)->required();
  add_common_flags(cmd_init, rc);

  auto* cmd_gp = app.add_subcommand("gp", "gradient-based global placement");
  cmd_gp->add_option("design", design_path)->required();
  cmd_gp->add_option("placement", placement_path)->required();
  cmd_gp->add_option("-o,--out", out_path)->required();
  add_common_flags(cmd_gp, rc);

  auto* cmd_legal = app.add_subcommand("legalize", "MILP legalization");
  cmd_legal->add_option("design", design_path)->required();
  cmd_legal->add_option("placement", placement_path)->required();
  cmd_legal->add_option("-o,--out", out_path)->required();
  add_common_flags(cmd_legal, rc);

  auto* cmd_eval = app.add_subcommand("eval", "metrics for a placement");
  cmd_eval->add_option("design", design_path)->required();
  cmd_eval->add_option("placement", placement_path)->required();
  cmd_eval->add_option("--report", report_path, "metrics CSV");
  cmd_eval->add_option("--baseline", baseline_path,
                       "baseline CSV for percent improvements");
  add_common_flags(cmd_eval, rc);

  auto* cmd_render = app.add_subcommand("render", "SVG view of a placement");
  cmd_render->add_option("design", design_path)->required();
  cmd_render->add_option("placement", placement_path)->required();
  cmd_render->add_option("-o,--out", out_path)->required();
  cmd_render->add_flag("--hulls", hulls);

  GenParams gen;
  auto* cmd_gen = app.add_subcommand("gen", "synthetic design generator");
  cmd_gen->add_option("-o,--out", out_path)->required();
  cmd_gen->add_option("--comps", gen.num_components);
  cmd_gen->add_option("--nets", gen.num_nets);
  cmd_gen->add_option("--width", gen.board_w);
  cmd_gen->add_option("--height", gen.board_h);
  cmd_gen->add_option("--gen-seed,--seed", gen.seed);
  cmd_gen->add_option("--util", gen.utilization);
  cmd_gen->add_option("--fixed", gen.num_fixed);
  cmd_gen->add_option("--min-dim", gen.min_dim);
  cmd_gen->add_option("--max-dim", gen.max_dim);

  auto* cmd_lp = app.add_subcommand("lp-export", "write the legalization MILP");
  cmd_lp->add_option("design", design_path)->required();
  cmd_lp->add_option("placement", placement_path)->required();
  cmd_lp->add_option("-o,--out", out_path)->required();
  add_common_flags(cmd_lp, rc);

  auto* cmd_import = app.add_subcommand(
      "import-solution", "turn external solver output into a placement");
  cmd_import->add_option("design", design_path)->required();
  cmd_import->add_option("solution", solution_path)->required();
  cmd_import->add_option("-o,--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitInputError : kExitOk;
  }

  try {
    if (cmd_place->parsed())
      return run_place(design_path, rc, out_path, report_path, svg_path, hulls);

    if (cmd_init->parsed()) {
      Design d = parse_design(read_file(design_path));
      write_file(out_path, serialize_placement(d, stage_init(d, rc)));
      return kExitOk;
    }
    if (cmd_gp->parsed()) {
      Design d = parse_design(read_file(design_path));
      Placement seed = parse_placement(read_file(placement_path), d);
      write_file(out_path, serialize_placement(d, stage_gp(d, seed, rc)));
      return kExitOk;
    }
    if (cmd_legal->parsed()) {
      Design d = parse_design(read_file(design_path));
      Placement gp = parse_placement(read_file(placement_path), d);
      LegalizeResult legal = stage_legalize(d, gp, rc);
      write_file(out_path, serialize_placement(d, legal.placement));
      return legal.status == MilpStatus::kFeasibleTimeout ? kExitTimeout
                                                          : kExitOk;
    }
    if (cmd_eval->parsed()) {
      Design d = parse_design(read_file(design_path));
      Placement p = parse_placement(read_file(placement_path), d);
      MetricsReport report = compute_report(d, p);
      if (!baseline_path.empty()) {
        MetricsReport base = report_from_csv(read_file(baseline_path));
        std::cout << format_table(report, &base);
      } else {
        std::cout << format_table(report);
      }
      DesignStats st = design_stats(d);
      std::printf("components             %14d\n", st.num_components);
      std::printf("locked                 %14d\n", st.num_locked);
      std::printf("nets                   %14d\n", st.num_nets);
      std::printf("pins                   %14d\n", st.num_pins);
      std::printf("utilization            %14.4f\n", st.utilization);
      if (!report_path.empty()) write_file(report_path, report_to_csv(report));
      return kExitOk;
    }
    if (cmd_render->parsed()) {
      Design d = parse_design(read_file(design_path));
      Placement p = parse_placement(read_file(placement_path), d);
      SvgOptions so;
      so.draw_hulls = hulls;
      write_file(out_path, render_svg(d, p, so));
      return kExitOk;
    }
    if (cmd_gen->parsed()) {
      write_file(out_path, serialize_design(generate_design(gen)));
      return kExitOk;
    }
    if (cmd_lp->parsed()) {
      Design d = parse_design(read_file(design_path));
      Placement p = parse_placement(read_file(placement_path), d);
      std::vector<RelConstraint> rels;
      if (rc.rel_constraints)
        rels = derive_relative_constraints(p, d, threshold_k(d, rc));
      write_file(out_path, export_lp(build_model(d, rels)));
      return kExitOk;
    }
    if (cmd_import->parsed()) {
      Design d = parse_design(read_file(design_path));
      Placement p = import_solution(d, read_file(solution_path));
      write_file(out_path, serialize_placement(d, p));
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    if (msg.find("infeasible") != std::string::npos) return kExitInfeasible;
    return kExitInputError;
  }
  return kExitInputError;
}
