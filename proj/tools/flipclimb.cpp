// flipclimb command-line front end.
//
// Exit codes: 0 success, 1 infeasible climb, 2 configuration or I/O error.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "flipclimb/follower.hpp"
#include "flipclimb/io.hpp"
#include "flipclimb/planner.hpp"
#include "flipclimb/render.hpp"

namespace {

using namespace flipclimb;
namespace fs = std::filesystem;

struct Overrides {
  std::string configFile;
  std::optional<double> height, d0, deltaD, omegaA, alphaLb, alphaUb, slip, dFine;
  std::optional<int> substeps;
  std::optional<std::string> out;
  std::vector<std::string> formats;
};

void addCommonFlags(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.configFile, "JSON run configuration; flags override its values")
      ->check(CLI::ExistingFile);
  sub->add_option("--height", o.height, "step height h [m]");
  sub->add_option("--d0", o.d0, "start distance of S2 from the wall [m]");
  sub->add_option("--delta-d", o.deltaD, "path column spacing [m]");
  sub->add_option("--omega-a", o.omegaA, "weight of a in the triplet distance");
  sub->add_option("--alpha-lb", o.alphaLb, "lower front flipper limit [rad]");
  sub->add_option("--alpha-ub", o.alphaUb, "upper front flipper limit [rad]");
  sub->add_option("--slip", o.slip, "fraction of track travel lost in the follow replay");
  sub->add_option("--substeps", o.substeps, "simulator substeps per command");
  sub->add_option("--d-fine", o.dFine, "column spacing of the emitted space cloud [m]");
  sub->add_option("--out", o.out, "output directory (default: $FLIPCLIMB_OUT or .)");
  sub->add_option("--format", o.formats, "output formats: csv, json, svg")->delimiter(',');
}

io::RunConfig resolveConfig(const Overrides& o) {
  io::RunConfig cfg;
  if (const char* env = std::getenv("FLIPCLIMB_OUT"); env && *env) cfg.out = env;
  if (!o.configFile.empty()) cfg = io::loadRunConfig(o.configFile, cfg);
  if (o.height) cfg.height = *o.height;
  if (o.d0) cfg.params.d0 = *o.d0;
  if (o.deltaD) cfg.params.delta_d = *o.deltaD;
  if (o.omegaA) cfg.params.omega_a = *o.omegaA;
  if (o.alphaLb) cfg.params.alpha_lb = *o.alphaLb;
  if (o.alphaUb) cfg.params.alpha_ub = *o.alphaUb;
  if (o.slip) cfg.slip = *o.slip;
  if (o.substeps) cfg.substeps = *o.substeps;
  if (o.dFine) cfg.d_fine = *o.dFine;
  if (o.out) cfg.out = *o.out;
  if (!o.formats.empty()) cfg.formats = o.formats;
  cfg.validate();
  return cfg;
}

// The output directory is left out so runs into different directories
// produce identical echoes.
void writeConfigEcho(const io::RunConfig& cfg) {
  if (!cfg.wants("json")) return;
  auto j = io::toJson(cfg);
  j.erase("out");
  io::writeFile(cfg.out, "config.json", j.dump(2) + "\n");
}

struct Followed {
  MorphologyPath path;
  std::vector<TrackCommand> commands;
  FollowLog log;
};

Followed planAndFollow(const io::RunConfig& cfg, const StepScene& scene) {
  Followed f;
  f.path = globalPlan(cfg.params, cfg.dims, scene);
  f.commands = commandsFromPath(f.path, cfg.dims);
  FollowOptions opt;
  opt.substeps = cfg.substeps;
  opt.slip = cfg.slip;
  f.log = simulateFollow(f.path, f.commands, PlantState{f.path.front()}, cfg.dims, scene, opt, cfg.params);
  return f;
}

void runCriticals(const io::RunConfig& cfg) {
  const auto cp = criticalDs(cfg.dims, cfg.height);
  for (int i = 1; i <= 9; ++i)
    std::printf("dX%d = %.6f%s\n", i, cp(i), cp.collapsed[static_cast<std::size_t>(i - 1)] ? " (collapsed)" : "");
  if (cp.degenerate) std::printf("degenerate: dX3 < dX4\n");
  if (cfg.wants("csv")) io::writeFile(cfg.out, "criticals.csv", io::toString([&](auto& os) { io::writeCriticalsCsv(os, cp); }));
  if (cfg.wants("json")) io::writeFile(cfg.out, "criticals.json", io::criticalsJson(cp).dump(2) + "\n");
}

void runSpace(const io::RunConfig& cfg, const StepScene& scene) {
  const auto cloud = buildConfigSpace(cfg.params, cfg.dims, scene, cfg.d_fine);
  std::printf("space: %zu feasible triplets\n", cloud.points.size());
  if (cfg.wants("csv"))
    io::writeFile(cfg.out, "space.csv", io::toString([&](auto& os) { io::writeSpaceCsv(os, cloud.points); }));
  if (cfg.wants("svg")) {
    io::writeFile(cfg.out, "space_d_a.svg", render::spaceProjectionDA(cloud));
    io::writeFile(cfg.out, "space_d_alpha.svg", render::spaceProjectionDAlpha(cloud));
  }
}

void runPlan(const io::RunConfig& cfg, const StepScene& scene) {
  const auto path = globalPlan(cfg.params, cfg.dims, scene);
  std::printf("plan: %zu waypoints, final d=%.4f a=%.4f theta=%.4f\n", path.size(), path.back().triplet.d,
              path.back().triplet.a, path.back().theta);
  if (cfg.wants("csv"))
    io::writeFile(cfg.out, "path.csv", io::toString([&](auto& os) { io::writePathCsv(os, path); }));
}

void runFollow(const io::RunConfig& cfg, const StepScene& scene) {
  const auto f = planAndFollow(cfg, scene);
  const auto& fin = f.log.final.morphology;
  std::printf("follow: %zu records, final d=%.4f (target %.4f) theta=%.4f\n", f.log.records.size(),
              fin.triplet.d, f.path.back().triplet.d, fin.theta);
  if (cfg.wants("csv")) {
    io::writeFile(cfg.out, "follow.csv", io::toString([&](auto& os) { io::writeFollowCsv(os, f.log); }));
    io::writeFile(cfg.out, "center.csv", io::toString([&](auto& os) { io::writeCenterCsv(os, f.log); }));
    std::string cmds = "delta_alpha,delta_beta,delta_m\n";
    for (const auto& c : f.commands)
      cmds += io::formatDouble(c.delta_alpha) + "," + io::formatDouble(c.delta_beta) + "," +
              io::formatDouble(c.delta_m) + "\n";
    io::writeFile(cfg.out, "commands.csv", cmds);
  }
  if (cfg.wants("json")) io::writeFile(cfg.out, "follow.json", io::followJson(f.log).dump(2) + "\n");
}

void runRender(const io::RunConfig& cfg, const StepScene& scene) {
  const auto f = planAndFollow(cfg, scene);
  if (!cfg.wants("svg")) {
    std::printf("render: svg format not selected, nothing written\n");
    return;
  }
  for (std::size_t i = 0; i < f.path.size(); ++i)
    io::writeFile(cfg.out, render::frameName(i),
                  render::morphologyFrame(f.path[i], cfg.dims, scene, "waypoint " + std::to_string(i)));
  for (const char* q : {"alpha", "beta", "d", "theta"})
    io::writeFile(cfg.out, std::string("follow_") + q + ".svg", render::followPlot(f.log, q));
  io::writeFile(cfg.out, "center.svg", render::centerPlot(f.log));
  std::printf("render: %zu frames\n", f.path.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar step-climbing planner for a flipper-tracked robot"};
  app.require_subcommand(1);
  Overrides o;
  auto* criticals = app.add_subcommand("criticals", "emit the critical distances X1..X9");
  auto* space = app.add_subcommand("space", "emit the feasible (d, a, alpha) cloud");
  auto* plan = app.add_subcommand("plan", "plan a climb and emit the morphology path");
  auto* follow = app.add_subcommand("follow", "replay the plan's commands in the kinematic simulator");
  auto* rend = app.add_subcommand("render", "emit morphology frames and follow plots");
  for (auto* sub : {criticals, space, plan, follow, rend}) addCommonFlags(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto cfg = resolveConfig(o);
    if (criticals->parsed()) {
      runCriticals(cfg);
    } else {
      const StepScene scene(cfg.height, cfg.dims.r);
      if (space->parsed()) runSpace(cfg, scene);
      else if (plan->parsed()) runPlan(cfg, scene);
      else if (follow->parsed()) runFollow(cfg, scene);
      else runRender(cfg, scene);
    }
    writeConfigEcho(cfg);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
