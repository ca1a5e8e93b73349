#include <iostream>

#include <CLI11.hpp>

#include "dilatia/cli.hpp"

namespace {

void add_common(CLI::App* cmd, dilatia::cli::RunConfig& rc) {
  cmd->add_option("--seed", rc.seed, "RNG seed (falls back to DILATIA_SEED)");
  cmd->add_option("--tol", rc.tol, "absolute tolerance for sampled checks");
  cmd->add_option("--exact-tol", rc.exact_tol, "tolerance for exact identities");
  cmd->add_option("--pairs", rc.pairs, "sample pairs per check");
  cmd->add_option("--grid", rc.grid, "grid size for index sweeps");
  cmd->add_option("--out", rc.out, "write the JSON report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  dilatia::cli::RunConfig rc;
  CLI::App app{"dilatia: dilation structures on metric spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dilatia::cli::kToolVersion);

  auto* vf = app.add_subcommand("verify-family", "check the dilation family axioms");
  auto* vl = app.add_subcommand("verify-linear", "check F(a)(F(b)x) = F(ab)x only");
  for (auto* c : {vf, vl}) {
    c->add_option("--family", rc.family, "gallery family, catalog map or family spec (.json)")->required();
    c->add_option("--space", rc.space, "gallery:<name>, .json spec, .csv matrix or cone:<ref>");
    c->add_flag("--rescale", rc.rescale, "rescale a cone base to diameter 2 first");
    add_common(c, rc);
  }

  auto* bc = app.add_subcommand("build-cone", "build the metric cone over a base space");
  bc->add_option("--space", rc.space, "base space reference")->required();
  bc->add_flag("--rescale", rc.rescale, "rescale the base to diameter 2");
  bc->add_flag("--allow-unsafe-diameter", rc.allow_unsafe_diameter, "skip the base diameter guard");
  add_common(bc, rc);

  auto* dc = app.add_subcommand("decompose", "radial cone decomposition of a shrinking action");
  dc->add_option("--action", rc.action, "gallery action, or radial_scale with --space")->required();
  dc->add_option("--space", rc.space, "space for radial_scale");
  dc->add_option("--epsilon", rc.epsilon, "radius of the base sphere");
  add_common(dc, rc);

  auto* dm = app.add_subcommand("derive-metric", "limsup metric from a dilation family");
  dm->add_option("--family", rc.family, "gallery family or catalog map")->required();
  dm->add_option("--space", rc.space, "space reference");
  add_common(dm, rc);

  auto* gn = app.add_subcommand("group-norm", "sup metric and homogeneous norm on a conical group");
  gn->add_option("--group", rc.group, "gallery group")->required();
  gn->add_option("--family", rc.family, "gallery family or catalog map")->required();
  gn->add_option("--space", rc.space, "space reference");
  add_common(gn, rc);

  auto* gl = app.add_subcommand("gallery", "gallery of example objects");
  gl->require_subcommand(1);
  gl->add_subcommand("list", "list gallery entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (auto* c : app.get_subcommands()) {
    rc.command = c->get_name();
    for (auto* s : c->get_subcommands()) rc.subcommand = s->get_name();
  }
  return dilatia::cli::run(rc, std::cout, std::cerr);
}
