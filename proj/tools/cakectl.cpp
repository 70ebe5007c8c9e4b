// cakectl: command-line front end for the cake-cutting engine.

#include <iostream>

#include <CLI11.hpp>

#include "cake/cli.hpp"

namespace {

void add_profile_flags(CLI::App* app, cake::RunConfig& cfg) {
  app->add_option("-e,--entitlements", cfg.entitlements, "comma-separated entitlements, or 'golden'");
  app->add_option("--radicand", cfg.radicand, "squarefree d for entitlements in Q(sqrt d)");
}

void add_output_flags(CLI::App* app, cake::RunConfig& cfg) {
  app->add_option("-o,--output", cfg.output, "write the JSON document here (default: $CAKE_OUT_DIR)");
  app->add_flag("--json", cfg.json, "print the JSON document instead of the text summary");
}

void add_game_flags(CLI::App* app, cake::RunConfig& cfg) {
  add_profile_flags(app, cfg);
  add_output_flags(app, cfg);
  app->add_option("--mediator", cfg.mediator, "cloned-ds | even-paz | random | greedy");
  app->add_option("--stop-after", cfg.stop_after, "query cap for mediators that stop on their own");
  app->add_option("--seed", cfg.seed, "mediator and profile seed");
  app->add_option("--sweep", cfg.sweep, "play this many consecutive seeds");
  app->add_option("--budget", cfg.budget, "query budget");
  app->add_flag("--unbounded", cfg.unbounded, "no query budget");
  app->add_option("--profile", cfg.profile, "uniform | random | path to a JSON list of measures");
}

void add_adversary_flags(CLI::App* app, cake::RunConfig& cfg) {
  app->add_option("--cstar", cfg.c_star, "cost the adversary forces past");
  app->add_option("--schedule", cfg.schedule, "paper | minimal");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proportional cake cutting: indices, bounds, games and adversaries"};
  app.require_subcommand(1);
  cake::RunConfig cfg;

  auto* indices = app.add_subcommand("indices", "clonage, precision and fineness of an entitlement profile");
  add_profile_flags(indices, cfg);
  add_output_flags(indices, cfg);

  auto* bounds = app.add_subcommand("bounds", "query-count bounds implied by the indices");
  add_profile_flags(bounds, cfg);
  add_output_flags(bounds, cfg);

  auto* simulate = app.add_subcommand("simulate", "play a mediator against a measure profile");
  add_game_flags(simulate, cfg);

  auto* duel = app.add_subcommand("duel", "play a mediator against an adversary");
  add_game_flags(duel, cfg);
  add_adversary_flags(duel, cfg);
  duel->add_option("--adversary", cfg.adversary, "sigma | nature");
  duel->add_flag("--checked", cfg.checked, "re-verify deficiency of every adversary record");
  duel->add_flag("--permissive", cfg.permissive, "let inconsistent adversary records end the match");

  auto* deficiency = app.add_subcommand("deficiency", "decide level-deficiency of a partition record");
  add_profile_flags(deficiency, cfg);
  add_output_flags(deficiency, cfg);
  add_adversary_flags(deficiency, cfg);
  deficiency->add_option("-i,--input", cfg.input, "partition record JSON")->required();
  deficiency->add_option("--level", cfg.level, "deficiency level (default: first schedule level)");

  auto* validate = app.add_subcommand("validate", "check an ultraresponse or a transcript's record chain");
  add_output_flags(validate, cfg);
  validate->add_option("-i,--input", cfg.input, "JSON with record/query/response, or a transcript")->required();

  auto* replay = app.add_subcommand("replay", "re-run a transcript and compare");
  add_output_flags(replay, cfg);
  replay->add_option("input", cfg.input, "transcript JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return cake::run_command(cfg, std::cout, std::cerr);
}
