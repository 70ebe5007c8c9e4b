#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cake/json_io.hpp"

namespace cake {

struct RunConfig {
  std::string subcommand;  // indices | bounds | simulate | duel | deficiency | validate | replay
  std::string entitlements = "1/2,1/2";
  std::uint64_t radicand = 5;
  std::string mediator = "cloned-ds";
  long stop_after = -1;
  std::string adversary = "sigma";  // sigma | nature
  int c_star = 2;
  std::string schedule = "paper";
  std::uint64_t seed = 0;
  long sweep = 1;  // number of consecutive seeds to play
  long budget = kDefaultBudget;
  bool unbounded = false;
  std::string profile = "uniform";  // uniform | random | path to a JSON measure list
  long level = -1;                  // deficiency level; -1 means the schedule's first level
  std::string input;                // record, validation case or transcript file
  std::string output;               // JSON output path; empty uses CAKE_OUT_DIR if set
  bool checked = false;
  bool permissive = false;
  bool json = false;  // print the JSON document instead of the text summary
};

// "golden", or comma-separated numbers; a final "rest" fills up to 1.
Entitlements parse_entitlements(const std::string& text, std::uint64_t radicand);

// Exit status: 0 accepted or success, 1 rejected, 2 fault or error.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cake
