#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cake/indices.hpp"
#include "cake/kitchen.hpp"

namespace cake {

struct Allocation {
  std::vector<Serving> pieces;
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

// Empty string when the pieces are pairwise disjoint and cover the cake.
std::string allocation_problem(const Allocation& x, std::size_t agents);

using Action = std::variant<Query, Allocation>;

struct ChronicleStep {
  Query query;
  Record response;
  friend bool operator==(const ChronicleStep&, const ChronicleStep&) = default;
};

using Chronicle = std::vector<ChronicleStep>;

/**
 * A mediator: a pure function from the chronicle so far to the next action.
 */
class MediatorStrategy {
 public:
  virtual ~MediatorStrategy() = default;
  virtual std::string name() const = 0;
  virtual Action next(const Chronicle& chronicle) const = 0;
};

/**
 * Answers a protocol's queries from a chronicle. Protocols are written as
 * straight-line procedures calling ask(); running one against a chronicle
 * either finishes with an allocation or stops at the first unanswered query.
 */
class ChronicleCursor {
 public:
  explicit ChronicleCursor(const Chronicle& c) : chronicle_(c) {}
  // Returns the recorded response, or throws Pending carrying `q`.
  const Record& ask(const Query& q);
  std::size_t used() const { return pos_; }

  struct Pending {
    Query query;
  };

 private:
  const Chronicle& chronicle_;
  std::size_t pos_ = 0;
};

using ProtocolBody = std::function<Allocation(ChronicleCursor&)>;

class ReplayStrategy : public MediatorStrategy {
 public:
  ReplayStrategy(std::string name, ProtocolBody body) : name_(std::move(name)), body_(std::move(body)) {}
  std::string name() const override { return name_; }
  Action next(const Chronicle& chronicle) const override;

 private:
  std::string name_;
  ProtocolBody body_;
};

// Piece handed out by a cut response: the cutter's piece of the record.
const Serving& response_piece(const Record& r);

std::unique_ptr<MediatorStrategy> cloned_dubins_spanier(const Entitlements& e);
// Stops after `stop_after` queries and hands the undivided rest to the agent
// holding the most uncommitted clones.
std::unique_ptr<MediatorStrategy> cloned_dubins_spanier_capped(const Entitlements& e, std::size_t stop_after);
std::unique_ptr<MediatorStrategy> even_paz(std::size_t agents);
std::unique_ptr<MediatorStrategy> allocate_immediately(Allocation x);

// Nearest fraction to x with denominator at most max_den (continued fractions).
Scalar rational_approximation(const Scalar& x, long max_den);

struct MediatorSpec {
  std::string name;  // cloned-ds | even-paz | random | greedy
  std::uint64_t seed = 0;
  // Query cap for mediators that stop on their own; -1 lets the seed decide.
  long stop_after = -1;
};

// Builds a registered mediator for the profile; names as in MediatorSpec.
std::unique_ptr<MediatorStrategy> make_mediator(const MediatorSpec& spec, const Entitlements& e);
std::vector<std::string> mediator_names();

}  // namespace cake
