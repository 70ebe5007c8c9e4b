#pragma once

#include <string>
#include <vector>

#include "cake/kitchen.hpp"

namespace cake {

/**
 * A partition of the cake into nonempty cells, with each agent's appraisal
 * of every cell. values[agent][cell].
 */
struct PartitionRecord {
  std::vector<Serving> cells;
  std::vector<std::vector<Scalar>> values;

  static PartitionRecord whole(std::size_t agents);

  std::size_t agents() const { return values.size(); }
  std::size_t size() const { return cells.size(); }
  // Sum of the agent's values over the cells contained in `s`; `s` must be a
  // union of cells.
  Scalar extended(AgentId agent, const Serving& s) const;

  friend bool operator==(const PartitionRecord&, const PartitionRecord&) = default;
};

// Empty string when valid, else the first violated condition.
std::string record_problem(const PartitionRecord& p);
bool is_valid(const PartitionRecord& p);
void require_valid(const PartitionRecord& p);

PartitionRecord ultraresponse_from_measures(const PartitionRecord& p, const Query& q, const Profile& profile);

enum class VerdictKind { accept, malformed, cut_incompatible, appraisal_incompatible, sliver_incompatible };

const char* to_string(VerdictKind k);

struct UltraVerdict {
  VerdictKind kind = VerdictKind::accept;
  std::string detail;
  explicit operator bool() const { return kind == VerdictKind::accept; }
};

UltraVerdict validate_ultraresponse(const PartitionRecord& p, const Query& q, const PartitionRecord& r);

// Uniform density inside each cell, reproducing the record's values exactly.
KitchenMeasure witness_measure(const PartitionRecord& p, AgentId agent);
Profile witness_profile(const PartitionRecord& p);

// The mediator-visible record {S, piece} implied by an ultraresponse.
Record visible_record(const PartitionRecord& r, const Query& q);

}  // namespace cake
