// Command-line driver: solve / optimize / diagnose / blowup / duality /
// render subcommands over a shared config file.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "glueopt/config.hpp"
#include "glueopt/diagnostics.hpp"
#include "glueopt/dualcheck.hpp"
#include "glueopt/format.hpp"
#include "glueopt/kernels.hpp"
#include "glueopt/network_io.hpp"
#include "glueopt/optimizer.hpp"
#include "glueopt/render.hpp"

namespace fs = std::filesystem;
using glueopt::geometry::CurveNetwork;
using glueopt::geometry::Point2;
using glueopt::io::fmt17;
using glueopt::io::RunConfig;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string network_path;
  std::string out;
  int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("-c,--config", args->config_path, "config file")->required();
  cmd->add_option("-n,--network", args->network_path,
                  "network file (overrides the config)");
  cmd->add_option("-o,--out", args->out, "output directory (overrides the config)");
  cmd->add_option("-t,--threads", args->threads,
                  "thread cap (overrides GLUEOPT_THREADS; 1 = serial)");
}

struct Loaded {
  RunConfig cfg;
  CurveNetwork net;
};

Loaded load(const CommonArgs& args) {
  if (args.threads >= 0) glueopt::kernels::set_threads(args.threads);
  Loaded l;
  l.cfg = glueopt::io::parse_config_file(args.config_path);
  if (!args.network_path.empty()) l.cfg.network_path = args.network_path;
  if (!args.out.empty()) l.cfg.out = args.out;
  if (!l.cfg.network_path.empty())
    l.net = glueopt::geometry::read_network_file(l.cfg.network_path);
  return l;
}

std::vector<double> effective_radii(const RunConfig& cfg) {
  if (!cfg.radii.empty()) return cfg.radii;
  return {8 * cfg.h, 16 * cfg.h, 32 * cfg.h};
}

std::vector<Point2> effective_probes(const RunConfig& cfg, const CurveNetwork& net) {
  if (!cfg.probes.empty()) return cfg.probes;
  return glueopt::optimizer::sample_probes(net, cfg.h, cfg.schedule.probe_cap);
}

int cmd_solve(const CommonArgs& args) {
  auto [cfg, net] = load(args);
  auto problem = cfg.make_problem();
  auto ev = glueopt::solver::evaluate_functional(problem, net);
  fs::create_directories(cfg.out);
  glueopt::io::write_manifest(cfg.out, cfg, {{"command", "solve"}});
  glueopt::solver::write_grid_file(cfg.out + "/u.txt", ev.u);
  {
    std::ofstream os(cfg.out + "/solve.json");
    os << "{\n  \"value\": " << fmt17(ev.value) << ",\n  \"compliance\": "
       << fmt17(ev.compliance) << ",\n  \"energy\": " << fmt17(ev.energy)
       << ",\n  \"length\": " << fmt17(ev.length) << ",\n  \"cg_iterations\": "
       << ev.stats.iterations << ",\n  \"cg_residual\": "
       << fmt17(ev.stats.residual) << ",\n  \"free_nodes\": "
       << ev.mask.free_count() << "\n}\n";
  }
  {
    std::ofstream os(cfg.out + "/solve.svg");
    glueopt::io::render_svg(os, cfg.domain, &net, &ev.u, &ev.mask, cfg.probes);
  }
  std::cout << "value " << fmt17(ev.value) << " compliance " << fmt17(ev.compliance)
            << " length " << fmt17(ev.length) << " cg_iters "
            << ev.stats.iterations << "\n";
  return 0;
}

int cmd_optimize(const CommonArgs& args) {
  auto [cfg, net] = load(args);
  if (net.empty())
    throw std::runtime_error("optimize: a starting network is required");
  auto problem = cfg.make_problem();
  auto res = glueopt::optimizer::run_optimize(problem, net, cfg.schedule, cfg.out);
  glueopt::io::write_manifest(
      cfg.out, cfg,
      {{"command", "optimize"},
       {"iterations", std::to_string(res.state.iter)},
       {"accepted_descents", std::to_string(res.accepted_descents)},
       {"accepted_tips", std::to_string(res.accepted_tips)},
       {"accepted_cuts", std::to_string(res.accepted_cuts)},
       {"accepted_chords", std::to_string(res.accepted_chords)},
       {"accepted_walls", std::to_string(res.accepted_walls)}});
  {
    glueopt::geometry::write_network_file(cfg.out + "/final.txt", res.state.net);
    auto ev = glueopt::solver::evaluate_functional(problem, res.state.net);
    std::ofstream os(cfg.out + "/final.svg");
    glueopt::io::render_svg(os, cfg.domain, &res.state.net, &ev.u, &ev.mask, {});
  }
  std::cout << "value " << fmt17(res.state.value) << " length "
            << fmt17(res.state.length) << " iters " << res.state.iter
            << " descents " << res.accepted_descents << " tips "
            << res.accepted_tips << " cuts " << res.accepted_cuts << " chords "
            << res.accepted_chords << " walls " << res.accepted_walls << "\n";
  return 0;
}

int cmd_diagnose(const CommonArgs& args) {
  auto [cfg, net] = load(args);
  auto problem = cfg.make_problem();
  auto radii = effective_radii(cfg);
  auto probes = effective_probes(cfg, net);
  auto rep = glueopt::diagnostics::run_diagnostics(problem, net, probes, radii,
                                                   cfg.omega);
  fs::create_directories(cfg.out);
  glueopt::io::write_manifest(cfg.out, cfg, {{"command", "diagnose"}});
  {
    std::ofstream os(cfg.out + "/diagnostics.csv");
    glueopt::diagnostics::write_diagnostics_csv(os, rep);
  }
  {
    std::ofstream os(cfg.out + "/diagnostics.json");
    glueopt::diagnostics::write_diagnostics_json(os, rep);
  }
  for (const auto& pd : rep.probes)
    std::cout << "probe " << fmt17(pd.x.x) << " " << fmt17(pd.x.y) << " class "
              << to_string(pd.blowup.cls) << " e_x " << fmt17(pd.blowup.e_x)
              << " gamma " << fmt17(pd.profile.gamma) << "\n";
  return 0;
}

int cmd_blowup(const CommonArgs& args, const std::vector<double>& at) {
  auto [cfg, net] = load(args);
  if (!at.empty()) {
    if (at.size() % 2) throw std::runtime_error("--at needs x y pairs");
    cfg.probes.clear();
    for (size_t i = 0; i + 1 < at.size(); i += 2)
      cfg.probes.push_back({at[i], at[i + 1]});
  }
  if (cfg.probes.empty())
    throw std::runtime_error("blowup: give probes via config or --at");
  auto problem = cfg.make_problem();
  auto ev = glueopt::solver::evaluate_functional(problem, net);
  auto radii = effective_radii(cfg);
  for (const auto& x : cfg.probes) {
    auto rep = glueopt::diagnostics::blowup_classify(ev.u, net, cfg.domain, x, radii);
    std::cout << "probe " << fmt17(x.x) << " " << fmt17(x.y) << " class "
              << to_string(rep.cls) << " e_x " << fmt17(rep.e_x);
    if (rep.has_angles)
      std::cout << " angles " << fmt17(rep.angles[0]) << " " << fmt17(rep.angles[1])
                << " " << fmt17(rep.angles[2]);
    if (rep.touch_angle >= 0) std::cout << " touch_angle " << fmt17(rep.touch_angle);
    std::cout << "\n";
    for (const auto& row : rep.rows)
      std::cout << "  r " << fmt17(row.r) << " branches " << row.branches
                << (row.degenerate ? " (degenerate)" : "") << " beta "
                << fmt17(row.beta) << " e_over_r " << fmt17(row.e_over_r) << "\n";
  }
  return 0;
}

int cmd_duality(const CommonArgs& args) {
  auto [cfg, net] = load(args);
  auto problem = cfg.make_problem();
  auto rep = glueopt::dualcheck::duality_gap(problem, net);
  fs::create_directories(cfg.out);
  glueopt::io::write_manifest(cfg.out, cfg, {{"command", "duality"}});
  {
    std::ofstream os(cfg.out + "/dual.json");
    glueopt::dualcheck::write_dual_json(os, rep);
  }
  std::cout << "gap " << fmt17(rep.gap) << " div_residual "
            << fmt17(rep.div_residual) << " compliance " << fmt17(rep.compliance)
            << "\n";
  return 0;
}

int cmd_render(const CommonArgs& args, bool with_field) {
  auto [cfg, net] = load(args);
  fs::create_directories(cfg.out);
  std::ofstream os(cfg.out + "/render.svg");
  if (with_field) {
    auto problem = cfg.make_problem();
    auto ev = glueopt::solver::evaluate_functional(problem, net);
    glueopt::io::render_svg(os, cfg.domain, &net, &ev.u, &ev.mask, cfg.probes);
  } else {
    glueopt::io::render_svg(os, cfg.domain, &net, nullptr, nullptr, cfg.probes);
  }
  std::cout << "wrote " << cfg.out << "/render.svg\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  glueopt::kernels::init_from_env();
  CLI::App app{"penalized-compliance network solver"};
  app.require_subcommand(1);

  CommonArgs solve_args, opt_args, diag_args, blow_args, dual_args, render_args;
  std::vector<double> blow_at;
  bool render_field = false;

  add_common(app.add_subcommand("solve", "solve one instance"), &solve_args);
  add_common(app.add_subcommand("optimize", "descend on the penalized value"),
             &opt_args);
  add_common(app.add_subcommand("diagnose", "probe diagnostics report"),
             &diag_args);
  auto* blow = app.add_subcommand("blowup", "classify local type at probes");
  add_common(blow, &blow_args);
  blow->add_option("--at", blow_at, "probe coordinates as x y pairs");
  auto* rend = app.add_subcommand("render", "write an SVG of the instance");
  add_common(rend, &render_args);
  rend->add_flag("--field", render_field, "solve and shade the membrane field");
  add_common(app.add_subcommand("duality", "flux feasibility and energy gap"),
             &dual_args);

  CLI11_PARSE(app, argc, argv);
  try {
    if (app.got_subcommand("solve")) return cmd_solve(solve_args);
    if (app.got_subcommand("optimize")) return cmd_optimize(opt_args);
    if (app.got_subcommand("diagnose")) return cmd_diagnose(diag_args);
    if (app.got_subcommand("blowup")) return cmd_blowup(blow_args, blow_at);
    if (app.got_subcommand("duality")) return cmd_duality(dual_args);
    if (app.got_subcommand("render")) return cmd_render(render_args, render_field);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
