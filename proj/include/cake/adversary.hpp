#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cake/deficiency.hpp"
#include "cake/indices.hpp"

namespace cake {

// An internal consistency check failed: the input record was not deficient at
// the claimed level, or a constructed response did not verify.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct AdversaryOptions {
  // Re-verify deficiency of inputs and outputs where enumeration fits the budget.
  bool checked = false;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

// floor(sqrt(level / 2))
long decayed_level(long level);

/**
 * Two-agent responses. Agent 0 is the distinguished agent with threshold e1;
 * either agent may cut. The record must be valid and `level`-deficient; the
 * result is a valid ultraresponse that is decayed_level(level)-deficient.
 */
PartitionRecord lemma3_respond(const PartitionRecord& p, const Scalar& e1, long level, const Query& q,
                               const AdversaryOptions& opts = {});
PartitionRecord lemma4_respond(const PartitionRecord& p, const Scalar& e1, long level, const Query& q,
                               const AdversaryOptions& opts = {});

// Rows are record cells; columns are (piece, rest of the query serving,
// outside the query serving).
struct CutterTable {
  std::vector<std::array<Serving, 3>> entries;
  std::vector<std::array<Scalar, 3>> values;

  std::size_t rows() const { return entries.size(); }
  bool is_split(std::size_t row) const;
  std::size_t split_rows() const;
};

CutterTable cutter_table(const PartitionRecord& p, const Query& q, const KitchenMeasure& cutter_witness);

// Moves the cutter's value between entries until at most one row holds value
// in two or more entries. Row sums and the column-1 ratio are preserved.
CutterTable row_polarize(CutterTable t, const Scalar& p);

// Reduction of an n-agent profile to two roles.
struct MergePlan {
  AgentId distinguished = 0;
  Scalar e1;
  std::vector<int> role;  // 0 for the distinguished agent, 1 for the rest
};

MergePlan merge_extend(const Entitlements& e);

PartitionRecord to_roles(const PartitionRecord& p, const MergePlan& plan);
PartitionRecord from_roles(const PartitionRecord& two, const MergePlan& plan);
Query to_roles(const Query& q, const MergePlan& plan);

struct AdversaryState {
  PartitionRecord record;  // in role coordinates: agent 0 distinguished
  std::vector<long> levels;
  std::size_t step = 0;    // number of schedule-driven responses given
  MergePlan plan;

  long level() const { return levels.at(step); }
  bool schedule_active() const { return step + 1 < levels.size(); }
};

AdversaryState sigma_initial_state(const Entitlements& e, ScheduleMode mode, int c_star);

struct SigmaStep {
  PartitionRecord response;  // in agent coordinates
  AdversaryState next;
};

SigmaStep sigma_cstar_step(const AdversaryState& state, const Query& q, const AdversaryOptions& opts = {});

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  // Returns the ultraresponse to `q` given the running partition record.
  virtual PartitionRecord respond(const PartitionRecord& current, const Query& q) = 0;
};

class SigmaAdversary : public Adversary {
 public:
  SigmaAdversary(const Entitlements& e, ScheduleMode mode, int c_star, AdversaryOptions opts = {});
  std::string name() const override { return "sigma"; }
  PartitionRecord respond(const PartitionRecord& current, const Query& q) override;
  const AdversaryState& state() const { return state_; }

 private:
  AdversaryState state_;
  AdversaryOptions opts_;
};

// Answers truthfully from a fixed measure profile.
class NatureAdversary : public Adversary {
 public:
  explicit NatureAdversary(Profile profile) : profile_(std::move(profile)) {}
  std::string name() const override { return "nature"; }
  PartitionRecord respond(const PartitionRecord& current, const Query& q) override;

 private:
  Profile profile_;
};

}  // namespace cake
