#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cake/records.hpp"

namespace cake {

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The enumeration would exceed the configured budget.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WeightedHyperallocation {
  long replicas = 1;
  std::vector<long> weights;
  friend bool operator==(const WeightedHyperallocation&, const WeightedHyperallocation&) = default;
};

Scalar hyper_value(const PartitionRecord& p, AgentId agent, const WeightedHyperallocation& h);

// Number of weight vectors with 1 <= r <= level over `cells` cells,
// saturating at UINT64_MAX.
std::uint64_t enumeration_cost(std::size_t cells, long level);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 400'000'000;

struct DeficiencyVerdict {
  bool deficient = true;
  std::optional<WeightedHyperallocation> counterexample;
  explicit operator bool() const { return deficient; }
};

// Agent 0 is the distinguished agent with threshold e1, agent 1 the other.
DeficiencyVerdict is_deficient(const PartitionRecord& p, const Scalar& e1, long level,
                               std::uint64_t budget = kDefaultEnumerationBudget);

// min over hyperallocations of max{e1 - value_0(h), value_1(h) - e1}.
Scalar min_deficit(const PartitionRecord& p, const Scalar& e1, long level,
                   std::uint64_t budget = kDefaultEnumerationBudget);

PartitionRecord swap_agents(const PartitionRecord& p);

namespace detail {

/**
 * Visits every weight vector w in [0..r]^s for r = 1..level. `rows` holds one
 * double-valued vector per tracked quantity; the visitor receives r, w and the
 * dot products of w with each row, and returns false to stop.
 */
template <class Visit>
bool enumerate_weights(std::size_t cells, long level, const std::vector<std::vector<double>>& rows, Visit&& visit) {
  const std::size_t k_rows = rows.size();
  const std::size_t stride = cells + 1;
  std::vector<long> w(cells);
  std::vector<double> partial(k_rows * stride);
  std::vector<double> sums(k_rows);
  for (long r = 1; r <= level; ++r) {
    std::fill(w.begin(), w.end(), 0);
    std::fill(partial.begin(), partial.end(), 0.0);
    for (;;) {
      for (std::size_t k = 0; k < k_rows; ++k) sums[k] = partial[k * stride];
      if (!visit(r, w, sums)) return false;
      std::size_t j = 0;
      while (j < cells && w[j] == r) {
        w[j] = 0;
        ++j;
      }
      if (j == cells) break;
      ++w[j];
      for (std::size_t k = 0; k < k_rows; ++k) {
        double* row = &partial[k * stride];
        row[j] = row[j + 1] + static_cast<double>(w[j]) * rows[k][j];
        for (std::size_t t = 0; t < j; ++t) row[t] = row[j];
      }
    }
  }
  return true;
}

// Accurate double images of a record's values for one agent.
std::vector<double> as_doubles(const std::vector<Scalar>& values);

// Exact sum of w_j * values_j.
Scalar weighted_sum(const std::vector<long>& w, const std::vector<Scalar>& values);

// Slack below which double comparisons are re-decided exactly.
inline double tolerance(long r) { return 1e-9 * static_cast<double>(r + 1); }

void check_budget(std::size_t cells, long level, std::uint64_t budget);

}  // namespace detail

}  // namespace cake
