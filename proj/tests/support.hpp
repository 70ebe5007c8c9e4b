// Shared generators for the unit tests.
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "cake/protocols.hpp"
#include "cake/records.hpp"

namespace cake::testing {

inline Scalar random_fraction(std::mt19937_64& rng, long max_den = 12) {
  std::uniform_int_distribution<long> den(1, max_den);
  long d = den(rng);
  std::uniform_int_distribution<long> num(-3 * d, 3 * d);
  return Scalar::frac(num(rng), d);
}

inline Scalar random_scalar(std::mt19937_64& rng, std::uint64_t d = 5) {
  return random_fraction(rng) + random_fraction(rng) * Scalar::sqrt_of(d);
}

// k distinct sorted points strictly inside (0, 1) on a 1/den grid.
inline std::vector<Scalar> grid_points(std::mt19937_64& rng, std::size_t k, long den) {
  std::vector<long> picks;
  std::uniform_int_distribution<long> spot(1, den - 1);
  while (picks.size() < k) {
    long x = spot(rng);
    if (std::find(picks.begin(), picks.end(), x) == picks.end()) picks.push_back(x);
  }
  std::sort(picks.begin(), picks.end());
  std::vector<Scalar> out;
  for (long x : picks) out.push_back(Scalar::frac(x, den));
  return out;
}

// Random serving built from up to three grid intervals.
inline Serving random_serving(std::mt19937_64& rng, long den = 16) {
  std::uniform_int_distribution<int> pieces(0, 3);
  std::vector<Interval> parts;
  std::uniform_int_distribution<long> spot(0, den);
  for (int k = pieces(rng); k > 0; --k) {
    long a = spot(rng);
    long b = spot(rng);
    if (a > b) std::swap(a, b);
    if (a < b) parts.push_back({Scalar::frac(a, den), Scalar::frac(b, den)});
  }
  return Serving(parts);
}

// Positive values summing to one, with denominators below max_den.
inline std::vector<Scalar> random_split(std::mt19937_64& rng, std::size_t k, long max_weight = 9) {
  std::uniform_int_distribution<long> w(1, max_weight);
  std::vector<long> ws;
  long total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    ws.push_back(w(rng));
    total += ws.back();
  }
  std::vector<Scalar> out;
  for (long x : ws) out.push_back(Scalar::frac(x, total));
  return out;
}

// A valid partition record whose cells are consecutive grid intervals,
// some merged into two-interval cells.
inline PartitionRecord random_record(std::mt19937_64& rng, std::size_t cells, std::size_t agents, long den = 32) {
  std::vector<Scalar> cuts = grid_points(rng, 2 * cells - 1, den);
  cuts.insert(cuts.begin(), Scalar(0));
  cuts.push_back(Scalar(1));
  std::vector<Interval> pieces;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) pieces.push_back({cuts[k], cuts[k + 1]});
  std::shuffle(pieces.begin(), pieces.end(), rng);
  PartitionRecord p;
  for (std::size_t c = 0; c < cells; ++c) {
    std::vector<Interval> parts{pieces[2 * c]};
    if (2 * c + 1 < pieces.size()) parts.push_back(pieces[2 * c + 1]);
    p.cells.push_back(Serving(parts));
  }
  for (std::size_t i = 0; i < agents; ++i) p.values.push_back(random_split(rng, cells));
  return p;
}

struct JudgeCase {
  PartitionRecord record;
  Entitlements e;
  Allocation x;
};

// A record, entitlements and allocation. Cells go whole to random agents,
// who half the time value their own cells highly; half the time a random
// slice then changes hands, splitting cells.
inline JudgeCase random_judge_case(std::mt19937_64& rng) {
  JudgeCase c;
  const std::size_t agents = 2 + rng() % 2;
  c.record = random_record(rng, 1 + rng() % 4, agents);
  c.x.pieces.assign(agents, Serving());
  std::vector<std::size_t> owner;
  for (const auto& cell : c.record.cells) {
    owner.push_back(rng() % agents);
    c.x.pieces[owner.back()] = c.x.pieces[owner.back()].unite(cell);
  }
  if (rng() % 2) {
    // Agents favour the cells they receive.
    for (std::size_t i = 0; i < agents; ++i) {
      std::vector<long> w;
      long total = 0;
      for (std::size_t k = 0; k < owner.size(); ++k) {
        w.push_back(owner[k] == i ? 10 + static_cast<long>(rng() % 10) : 1 + static_cast<long>(rng() % 3));
        total += w.back();
      }
      for (std::size_t k = 0; k < owner.size(); ++k) c.record.values[i][k] = Scalar::frac(w[k], total);
    }
  }
  if (rng() % 2) {
    Serving moved = random_serving(rng, 64);
    const std::size_t to = rng() % agents;
    for (auto& piece : c.x.pieces) piece = piece.minus(moved);
    c.x.pieces[to] = c.x.pieces[to].unite(moved);
  }
  c.e = random_split(rng, agents, 3);
  return c;
}

}  // namespace cake::testing
