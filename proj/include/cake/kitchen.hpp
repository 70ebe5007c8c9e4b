#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cake/exact.hpp"

namespace cake {

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Interval {
  Scalar lo;
  Scalar hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/**
 * A finite union of half-open intervals (lo, hi] inside the cake (0, 1].
 *
 * Stored sorted, disjoint and maximally merged, so two servings are equal iff
 * their interval lists are equal.
 */
class Serving {
 public:
  Serving() = default;
  explicit Serving(std::vector<Interval> intervals);

  static Serving whole();
  static Serving slice(const Scalar& lo, const Scalar& hi);
  // (0, t] clipped to the cake.
  static Serving prefix(const Scalar& t);

  const std::vector<Interval>& intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  Scalar length() const;
  Scalar sup() const;  // requires nonempty
  Scalar inf() const;  // requires nonempty

  Serving unite(const Serving& o) const;
  Serving intersect(const Serving& o) const;
  Serving minus(const Serving& o) const;
  Serving complement() const;
  bool contains(const Serving& o) const;
  bool contains_point(const Scalar& x) const;
  bool disjoint(const Serving& o) const;

  friend bool operator==(const Serving&, const Serving&) = default;

 private:
  std::vector<Interval> parts_;
};

// Sort, drop empty pieces, merge overlapping or touching ones.
std::vector<Interval> canonical_intervals(std::vector<Interval> parts);

/**
 * Piecewise-uniform probability measure on (0, 1]: mass m_k spread evenly
 * over (t_{k-1}, t_k]. All masses are strictly positive.
 */
class KitchenMeasure {
 public:
  KitchenMeasure(std::vector<Scalar> breakpoints, std::vector<Scalar> masses);

  static KitchenMeasure uniform();
  // Density values on consecutive pieces; the densities are rescaled to mass 1
  // only when `normalize` is set.
  static KitchenMeasure from_densities(const std::vector<Scalar>& breakpoints,
                                       const std::vector<Scalar>& densities,
                                       bool normalize = false);

  const std::vector<Scalar>& breakpoints() const { return breaks_; }
  const std::vector<Scalar>& masses() const { return masses_; }
  Scalar density(std::size_t piece) const;

  Scalar cdf(const Scalar& x) const;
  // Smallest x with cdf(x) = y, for y in [0, 1].
  Scalar cdf_inverse(const Scalar& y) const;
  Scalar value(const Serving& s) const;

  friend bool operator==(const KitchenMeasure&, const KitchenMeasure&) = default;

 private:
  std::size_t piece_of(const Scalar& x) const;

  std::vector<Scalar> breaks_;
  std::vector<Scalar> masses_;
  std::vector<Scalar> cumulative_;
};

using AgentId = std::size_t;

struct Query {
  AgentId cutter = 0;
  Serving serving;
  Scalar proportion;
  friend bool operator==(const Query&, const Query&) = default;
};

void check_query(const Query& q, std::size_t agents);

struct Cut {
  Scalar tau;
  Serving piece;
};

// tau = inf{t : value(S ∩ (0,t]) >= p value(S)}, piece = S ∩ (0, tau].
Cut threshold_and_cut(const KitchenMeasure& m, const Query& q);

struct RecordEntry {
  Serving serving;
  std::vector<Scalar> values;
  friend bool operator==(const RecordEntry&, const RecordEntry&) = default;
};

struct Record {
  std::vector<RecordEntry> entries;
  friend bool operator==(const Record&, const Record&) = default;
};

using Profile = std::vector<KitchenMeasure>;

// The record {S, piece} with every agent's appraisal of both servings.
Record respond(const Query& q, const Profile& profile);

}  // namespace cake
