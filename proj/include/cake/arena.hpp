#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cake/adversary.hpp"
#include "cake/protocols.hpp"
#include "cake/records.hpp"

namespace cake {

// A strategy returned different actions for chronicles of equal content.
class MeasurabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class GameMode { division, adversary };
enum class Verdict { accepted, rejected, budget_exceeded, fault };

const char* to_string(GameMode m);
const char* to_string(Verdict v);
GameMode parse_game_mode(const std::string& s);
Verdict parse_verdict(const std::string& s);

struct Shortfall {
  AgentId agent = 0;
  Scalar deficit;
};

struct ProportionalVerdict {
  std::vector<Shortfall> shortfalls;
  bool accepted() const { return shortfalls.empty(); }
};

// Exact check of mu_i(X_i) >= e_i for every agent.
ProportionalVerdict check_proportional(const Profile& profile, const Entitlements& e, const Allocation& x);

/**
 * Accepts iff the allocation is proportional under every measure profile that
 * extends the record. Only cells lying wholly inside X_i count for agent i:
 * the part of a straddling cell inside X_i can be made as light as we like.
 */
bool judge_allocation(const PartitionRecord& p, const Entitlements& e, const Allocation& x);

// An extension of `p` under which `x` fails; throws PreconditionError when
// the judge accepts `x`.
Profile refutation_profile(const PartitionRecord& p, const Entitlements& e, const Allocation& x);

// Independent random piecewise-uniform measures on a 1/16 grid.
Profile random_profile(std::size_t agents, std::mt19937_64& rng);

// A random piecewise-uniform profile reproducing every cell value of `p`.
Profile random_extension(const PartitionRecord& p, std::mt19937_64& rng);

struct TranscriptStep {
  Query query;
  Record response;
  PartitionRecord record;  // running partition record after the response
};

struct Transcript {
  GameMode mode = GameMode::division;
  Entitlements entitlements;
  std::uint64_t radicand = 5;
  std::vector<TranscriptStep> steps;
  std::optional<Allocation> final;
  long cost = 0;
  Verdict verdict = Verdict::fault;
  std::string detail;

  Chronicle chronicle() const;
};

// -cost when accepted, nullopt for minus infinity.
std::optional<long> payoff(const Transcript& t);

inline constexpr long kDefaultBudget = 1024;

struct GameOptions {
  long budget = kDefaultBudget;  // negative means unbounded
  // Treat an inconsistent adversary record as the empty-extension case, which
  // the mediator wins, instead of as an adversary fault.
  bool permissive = false;
  bool check_measurability = true;
};

Transcript run_division_game(const MediatorStrategy& mediator, const Entitlements& e, const Profile& profile,
                             const GameOptions& opts = {});
Transcript run_adversary_game(const MediatorStrategy& mediator, Adversary& adversary, const Entitlements& e,
                              const GameOptions& opts = {});

}  // namespace cake
