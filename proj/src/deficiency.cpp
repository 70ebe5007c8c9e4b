#include "cake/deficiency.hpp"

#include <cmath>
#include <limits>

namespace cake {

namespace {

void require_two_agents(const PartitionRecord& p) {
  if (p.agents() != 2) {
    throw UnsupportedError("deficiency is defined for two agents, record has " + std::to_string(p.agents()));
  }
}

}  // namespace

namespace detail {

std::vector<double> as_doubles(const std::vector<Scalar>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.to_double());
  return out;
}

Scalar weighted_sum(const std::vector<long>& w, const std::vector<Scalar>& values) {
  Scalar total;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] != 0) total += Scalar(w[j]) * values[j];
  }
  return total;
}

void check_budget(std::size_t cells, long level, std::uint64_t budget) {
  std::uint64_t cost = enumeration_cost(cells, level);
  if (cost > budget) {
    throw InfeasibleError("enumerating " + std::to_string(cells) + " cells at level " + std::to_string(level) +
                          " needs " + std::to_string(cost) + " weight vectors, budget is " + std::to_string(budget));
  }
}

}  // namespace detail

Scalar hyper_value(const PartitionRecord& p, AgentId agent, const WeightedHyperallocation& h) {
  if (agent >= p.agents()) throw PreconditionError("no such agent in record");
  if (h.weights.size() != p.size()) throw PreconditionError("weights misaligned with record cells");
  if (h.replicas < 1) throw PreconditionError("a hyperallocation needs at least one replica");
  for (long w : h.weights) {
    if (w < 0 || w > h.replicas) throw PreconditionError("weight outside [0, r]");
  }
  return detail::weighted_sum(h.weights, p.values[agent]) / Scalar(h.replicas);
}

std::uint64_t enumeration_cost(std::size_t cells, long level) {
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  for (long r = 1; r <= level; ++r) {
    std::uint64_t term = 1;
    for (std::size_t j = 0; j < cells; ++j) {
      if (term > cap / static_cast<std::uint64_t>(r + 1)) return cap;
      term *= static_cast<std::uint64_t>(r + 1);
    }
    if (total > cap - term) return cap;
    total += term;
  }
  return total;
}

DeficiencyVerdict is_deficient(const PartitionRecord& p, const Scalar& e1, long level, std::uint64_t budget) {
  require_two_agents(p);
  if (level < 0) throw PreconditionError("level must be nonnegative");
  detail::check_budget(p.size(), level, budget);
  const double e = e1.to_double();
  std::vector<std::vector<double>> rows{detail::as_doubles(p.values[0]), detail::as_doubles(p.values[1])};
  DeficiencyVerdict verdict;
  detail::enumerate_weights(p.size(), level, rows, [&](long r, const std::vector<long>& w, const std::vector<double>& s) {
    const double target = e * static_cast<double>(r);
    const double tol = detail::tolerance(r);
    if (s[0] < target - tol || s[1] > target + tol) return true;
    Scalar exact_target = e1 * Scalar(r);
    if (detail::weighted_sum(w, p.values[0]) < exact_target) return true;
    if (detail::weighted_sum(w, p.values[1]) > exact_target) return true;
    verdict.deficient = false;
    verdict.counterexample = WeightedHyperallocation{r, w};
    return false;
  });
  return verdict;
}

Scalar min_deficit(const PartitionRecord& p, const Scalar& e1, long level, std::uint64_t budget) {
  require_two_agents(p);
  if (level < 1) throw PreconditionError("min_deficit needs level >= 1");
  detail::check_budget(p.size(), level, budget);
  const double e = e1.to_double();
  std::vector<std::vector<double>> rows{detail::as_doubles(p.values[0]), detail::as_doubles(p.values[1])};
  auto deficit = [e](long r, const std::vector<double>& s) {
    const double rr = static_cast<double>(r);
    return std::max(e - s[0] / rr, s[1] / rr - e);
  };
  double best = std::numeric_limits<double>::infinity();
  detail::enumerate_weights(p.size(), level, rows, [&](long r, const std::vector<long>&, const std::vector<double>& s) {
    best = std::min(best, deficit(r, s));
    return true;
  });
  const double cutoff = best + 1e-9;
  std::optional<Scalar> exact_best;
  detail::enumerate_weights(p.size(), level, rows, [&](long r, const std::vector<long>& w, const std::vector<double>& s) {
    if (deficit(r, s) > cutoff) return true;
    Scalar rr(r);
    Scalar d = max(e1 - detail::weighted_sum(w, p.values[0]) / rr, detail::weighted_sum(w, p.values[1]) / rr - e1);
    if (!exact_best || d < *exact_best) exact_best = std::move(d);
    return true;
  });
  if (exact_best->sign() <= 0) throw PreconditionError("record is not deficient at level " + std::to_string(level));
  return *exact_best;
}

PartitionRecord swap_agents(const PartitionRecord& p) {
  require_two_agents(p);
  PartitionRecord out = p;
  std::swap(out.values[0], out.values[1]);
  return out;
}

}  // namespace cake
