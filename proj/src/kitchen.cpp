#include "cake/kitchen.hpp"

#include <algorithm>

namespace cake {

std::vector<Interval> canonical_intervals(std::vector<Interval> parts) {
  const Scalar zero(0);
  const Scalar one(1);
  std::vector<Interval> kept;
  kept.reserve(parts.size());
  for (auto& iv : parts) {
    if (iv.hi < iv.lo) throw PreconditionError("interval (" + iv.lo.str() + ", " + iv.hi.str() + "] is reversed");
    if (iv.lo < zero || iv.hi > one) {
      throw PreconditionError("interval (" + iv.lo.str() + ", " + iv.hi.str() + "] leaves the cake");
    }
    if (iv.lo == iv.hi) continue;
    kept.push_back(std::move(iv));
  }
  std::sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  out.reserve(kept.size());
  for (auto& iv : kept) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (iv.hi > out.back().hi) out.back().hi = std::move(iv.hi);
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

Serving::Serving(std::vector<Interval> intervals) : parts_(canonical_intervals(std::move(intervals))) {}

Serving Serving::whole() { return slice(0, 1); }

Serving Serving::slice(const Scalar& lo, const Scalar& hi) { return Serving({Interval{lo, hi}}); }

Serving Serving::prefix(const Scalar& t) {
  if (t <= Scalar(0)) return Serving();
  if (t >= Scalar(1)) return whole();
  return slice(0, t);
}

Scalar Serving::length() const {
  Scalar total;
  for (const auto& iv : parts_) total += iv.hi - iv.lo;
  return total;
}

Scalar Serving::sup() const {
  if (parts_.empty()) throw PreconditionError("sup of the empty serving");
  return parts_.back().hi;
}

Scalar Serving::inf() const {
  if (parts_.empty()) throw PreconditionError("inf of the empty serving");
  return parts_.front().lo;
}

Serving Serving::unite(const Serving& o) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  return Serving(std::move(all));
}

Serving Serving::intersect(const Serving& o) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < parts_.size() && j < o.parts_.size()) {
    const Interval& a = parts_[i];
    const Interval& b = o.parts_[j];
    const Scalar& lo = a.lo < b.lo ? b.lo : a.lo;
    const Scalar& hi = a.hi < b.hi ? a.hi : b.hi;
    if (lo < hi) out.push_back({lo, hi});
    if (a.hi < b.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  Serving s;
  s.parts_ = std::move(out);
  return s;
}

Serving Serving::complement() const {
  std::vector<Interval> out;
  Scalar cursor(0);
  for (const auto& iv : parts_) {
    if (cursor < iv.lo) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < Scalar(1)) out.push_back({cursor, Scalar(1)});
  Serving s;
  s.parts_ = std::move(out);
  return s;
}

Serving Serving::minus(const Serving& o) const { return intersect(o.complement()); }

bool Serving::contains(const Serving& o) const { return o.minus(*this).empty(); }

bool Serving::contains_point(const Scalar& x) const {
  for (const auto& iv : parts_) {
    if (iv.lo < x && x <= iv.hi) return true;
  }
  return false;
}

bool Serving::disjoint(const Serving& o) const { return intersect(o).empty(); }

KitchenMeasure::KitchenMeasure(std::vector<Scalar> breakpoints, std::vector<Scalar> masses)
    : breaks_(std::move(breakpoints)), masses_(std::move(masses)) {
  if (breaks_.size() < 2 || masses_.size() + 1 != breaks_.size()) {
    throw PreconditionError("measure needs k+1 breakpoints for k masses");
  }
  if (breaks_.front() != Scalar(0) || breaks_.back() != Scalar(1)) {
    throw PreconditionError("measure breakpoints must run from 0 to 1");
  }
  cumulative_.reserve(breaks_.size());
  cumulative_.emplace_back(0);
  for (std::size_t k = 0; k < masses_.size(); ++k) {
    if (!(breaks_[k] < breaks_[k + 1])) throw PreconditionError("measure breakpoints must increase strictly");
    if (masses_[k].sign() <= 0) throw PreconditionError("measure masses must be positive");
    cumulative_.push_back(cumulative_.back() + masses_[k]);
  }
  if (cumulative_.back() != Scalar(1)) {
    throw PreconditionError("measure masses sum to " + cumulative_.back().str() + ", not 1");
  }
}

KitchenMeasure KitchenMeasure::uniform() { return KitchenMeasure({Scalar(0), Scalar(1)}, {Scalar(1)}); }

KitchenMeasure KitchenMeasure::from_densities(const std::vector<Scalar>& breakpoints,
                                              const std::vector<Scalar>& densities, bool normalize) {
  if (breakpoints.size() != densities.size() + 1) {
    throw PreconditionError("measure needs k+1 breakpoints for k densities");
  }
  std::vector<Scalar> masses;
  Scalar total;
  for (std::size_t k = 0; k < densities.size(); ++k) {
    masses.push_back(densities[k] * (breakpoints[k + 1] - breakpoints[k]));
    total += masses.back();
  }
  if (normalize) {
    for (auto& m : masses) m /= total;
  }
  return KitchenMeasure(breakpoints, std::move(masses));
}

Scalar KitchenMeasure::density(std::size_t piece) const {
  return masses_.at(piece) / (breaks_[piece + 1] - breaks_[piece]);
}

std::size_t KitchenMeasure::piece_of(const Scalar& x) const {
  // First breakpoint >= x, so x lies in (t_{k-1}, t_k].
  auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), x);
  if (it == breaks_.end()) --it;
  return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

Scalar KitchenMeasure::cdf(const Scalar& x) const {
  if (x <= Scalar(0)) return Scalar(0);
  if (x >= Scalar(1)) return Scalar(1);
  std::size_t k = piece_of(x);
  if (x == breaks_[k + 1]) return cumulative_[k + 1];
  return cumulative_[k] + masses_[k] * (x - breaks_[k]) / (breaks_[k + 1] - breaks_[k]);
}

Scalar KitchenMeasure::cdf_inverse(const Scalar& y) const {
  if (y <= Scalar(0)) return Scalar(0);
  if (y >= Scalar(1)) return Scalar(1);
  auto it = std::lower_bound(cumulative_.begin() + 1, cumulative_.end(), y);
  std::size_t k = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  if (y == cumulative_[k + 1]) return breaks_[k + 1];
  return breaks_[k] + (y - cumulative_[k]) * (breaks_[k + 1] - breaks_[k]) / masses_[k];
}

Scalar KitchenMeasure::value(const Serving& s) const {
  Scalar total;
  for (const auto& iv : s.intervals()) total += cdf(iv.hi) - cdf(iv.lo);
  return total;
}

void check_query(const Query& q, std::size_t agents) {
  if (q.cutter >= agents) throw PreconditionError("query cutter " + std::to_string(q.cutter) + " is not an agent");
  if (q.proportion < Scalar(0) || q.proportion > Scalar(1)) {
    throw PreconditionError("query proportion " + q.proportion.str() + " is outside [0, 1]");
  }
}

Cut threshold_and_cut(const KitchenMeasure& m, const Query& q) {
  Scalar target = q.proportion * m.value(q.serving);
  if (target.sign() <= 0) return {Scalar(0), Serving()};
  Scalar acc;
  for (const auto& iv : q.serving.intervals()) {
    Scalar start = m.cdf(iv.lo);
    Scalar v = m.cdf(iv.hi) - start;
    if (acc + v >= target) {
      Scalar tau = m.cdf_inverse(start + (target - acc));
      return {tau, q.serving.intersect(Serving::prefix(tau))};
    }
    acc += v;
  }
  // Unreachable for proportion <= 1: the last interval closes the gap.
  throw PreconditionError("proportion above 1 in threshold_and_cut");
}

Record respond(const Query& q, const Profile& profile) {
  check_query(q, profile.size());
  Cut cut = threshold_and_cut(profile[q.cutter], q);
  RecordEntry whole{q.serving, {}};
  RecordEntry piece{cut.piece, {}};
  for (const auto& m : profile) {
    whole.values.push_back(m.value(q.serving));
    piece.values.push_back(m.value(cut.piece));
  }
  return Record{{std::move(whole), std::move(piece)}};
}

}  // namespace cake
