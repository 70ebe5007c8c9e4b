#include "cake/records.hpp"

#include <algorithm>
#include <optional>

namespace cake {

namespace {

struct Tile {
  const Interval* iv;
  std::size_t cell;
};

// Intervals of all cells sorted by left end; empty optional when the cells do
// not tile (0, 1] exactly.
std::optional<std::vector<Tile>> tiling(const std::vector<Serving>& cells) {
  std::vector<Tile> tiles;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (const auto& iv : cells[c].intervals()) tiles.push_back({&iv, c});
  }
  std::sort(tiles.begin(), tiles.end(), [](const Tile& a, const Tile& b) { return a.iv->lo < b.iv->lo; });
  Scalar cursor(0);
  for (const auto& t : tiles) {
    if (t.iv->lo != cursor) return std::nullopt;
    cursor = t.iv->hi;
  }
  if (cursor != Scalar(1)) return std::nullopt;
  return tiles;
}

// For each R cell, the index of the P cell containing it.
std::optional<std::vector<std::size_t>> parents(const PartitionRecord& p, const PartitionRecord& r) {
  std::vector<std::size_t> out;
  for (const auto& cell : r.cells) {
    std::optional<std::size_t> found;
    for (std::size_t a = 0; a < p.cells.size(); ++a) {
      if (p.cells[a].contains(cell)) {
        found = a;
        break;
      }
    }
    if (!found) return std::nullopt;
    out.push_back(*found);
  }
  return out;
}

bool structure_matches(const PartitionRecord& p, const PartitionRecord& r, const std::vector<std::size_t>& parent,
                       const Serving& s, const Serving& piece) {
  Serving rest = s.minus(piece);
  Serving outside = s.complement();
  for (std::size_t a = 0; a < p.cells.size(); ++a) {
    std::vector<Serving> expected;
    for (const Serving* part : std::initializer_list<const Serving*>{&piece, &rest, &outside}) {
      Serving x = p.cells[a].intersect(*part);
      if (!x.empty()) expected.push_back(std::move(x));
    }
    std::vector<const Serving*> children;
    for (std::size_t c = 0; c < r.cells.size(); ++c) {
      if (parent[c] == a) children.push_back(&r.cells[c]);
    }
    if (children.size() != expected.size()) return false;
    for (const auto& e : expected) {
      if (std::none_of(children.begin(), children.end(), [&](const Serving* ch) { return *ch == e; })) return false;
    }
  }
  return true;
}

}  // namespace

PartitionRecord PartitionRecord::whole(std::size_t agents) {
  PartitionRecord p;
  p.cells.push_back(Serving::whole());
  p.values.assign(agents, std::vector<Scalar>{Scalar(1)});
  return p;
}

Scalar PartitionRecord::extended(AgentId agent, const Serving& s) const {
  Scalar total;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (s.contains(cells[c])) {
      total += values[agent][c];
    } else if (!s.disjoint(cells[c])) {
      throw PreconditionError("serving is not a union of record cells");
    }
  }
  return total;
}

std::string record_problem(const PartitionRecord& p) {
  if (p.cells.empty()) return "record has no cells";
  for (std::size_t c = 0; c < p.cells.size(); ++c) {
    if (p.cells[c].empty()) return "cell " + std::to_string(c) + " is empty";
  }
  if (!tiling(p.cells)) return "cells do not partition the cake";
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (p.values[i].size() != p.cells.size()) return "agent " + std::to_string(i) + " has misaligned values";
    Scalar total;
    for (std::size_t c = 0; c < p.cells.size(); ++c) {
      if (p.values[i][c].sign() <= 0) {
        return "agent " + std::to_string(i) + " gives nonpositive value to cell " + std::to_string(c);
      }
      total += p.values[i][c];
    }
    if (total != Scalar(1)) return "agent " + std::to_string(i) + " values sum to " + total.str();
  }
  return {};
}

bool is_valid(const PartitionRecord& p) { return record_problem(p).empty(); }

void require_valid(const PartitionRecord& p) {
  std::string why = record_problem(p);
  if (!why.empty()) throw PreconditionError("invalid partition record: " + why);
}

PartitionRecord ultraresponse_from_measures(const PartitionRecord& p, const Query& q, const Profile& profile) {
  if (profile.size() != p.agents()) throw PreconditionError("profile size differs from the record's agent count");
  check_query(q, profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    for (std::size_t c = 0; c < p.cells.size(); ++c) {
      if (profile[i].value(p.cells[c]) != p.values[i][c]) {
        throw PreconditionError("measure of agent " + std::to_string(i) + " does not extend cell " +
                                std::to_string(c));
      }
    }
  }
  Serving piece = threshold_and_cut(profile[q.cutter], q).piece;
  Serving rest = q.serving.minus(piece);
  Serving outside = q.serving.complement();
  PartitionRecord out;
  out.values.resize(profile.size());
  for (const auto& cell : p.cells) {
    for (const Serving* part : {&piece, &rest, &outside}) {
      Serving x = cell.intersect(*part);
      if (x.empty()) continue;
      for (std::size_t i = 0; i < profile.size(); ++i) out.values[i].push_back(profile[i].value(x));
      out.cells.push_back(std::move(x));
    }
  }
  return out;
}

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::accept:
      return "accept";
    case VerdictKind::malformed:
      return "malformed";
    case VerdictKind::cut_incompatible:
      return "cut compatibility";
    case VerdictKind::appraisal_incompatible:
      return "appraisal compatibility";
    case VerdictKind::sliver_incompatible:
      return "sliver compatibility";
  }
  return "unknown";
}

UltraVerdict validate_ultraresponse(const PartitionRecord& p, const Query& q, const PartitionRecord& r) {
  auto fail = [](VerdictKind k, std::string why) { return UltraVerdict{k, std::move(why)}; };
  if (r.agents() != p.agents()) return fail(VerdictKind::malformed, "agent count differs");
  if (q.cutter >= p.agents()) return fail(VerdictKind::malformed, "cutter is not an agent");
  for (const auto& row : r.values) {
    if (row.size() != r.cells.size()) return fail(VerdictKind::malformed, "values misaligned with cells");
  }
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    if (r.cells[c].empty()) return fail(VerdictKind::malformed, "cell " + std::to_string(c) + " is empty");
  }
  if (!tiling(r.cells)) return fail(VerdictKind::malformed, "cells do not partition the cake");
  auto parent = parents(p, r);
  if (!parent) return fail(VerdictKind::malformed, "a cell straddles two cells of the prior record");

  for (std::size_t i = 0; i < r.agents(); ++i) {
    for (std::size_t c = 0; c < r.cells.size(); ++c) {
      if (r.values[i][c].sign() <= 0) {
        return fail(VerdictKind::sliver_incompatible,
                    "agent " + std::to_string(i) + " gives nonpositive value to nonempty cell " + std::to_string(c));
      }
    }
  }

  for (std::size_t i = 0; i < r.agents(); ++i) {
    std::vector<Scalar> sums(p.cells.size());
    for (std::size_t c = 0; c < r.cells.size(); ++c) sums[(*parent)[c]] += r.values[i][c];
    for (std::size_t a = 0; a < p.cells.size(); ++a) {
      if (sums[a] != p.values[i][a]) {
        return fail(VerdictKind::appraisal_incompatible,
                    "agent " + std::to_string(i) + " sub-cells of cell " + std::to_string(a) + " sum to " +
                        sums[a].str() + ", not " + p.values[i][a].str());
      }
    }
  }

  // The piece is S ∩ (0, t]; t may be taken as 0 or as the right end of some
  // cell interval.
  std::vector<Scalar> candidates{Scalar(0)};
  for (const auto& cell : r.cells) {
    for (const auto& iv : cell.intervals()) candidates.push_back(iv.hi);
  }
  const Serving& s = q.serving;
  Scalar whole_value;
  bool s_is_union = true;
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    if (s.contains(r.cells[c])) {
      whole_value += r.values[q.cutter][c];
    } else if (!s.disjoint(r.cells[c])) {
      s_is_union = false;
    }
  }
  if (!s_is_union) return fail(VerdictKind::cut_incompatible, "query serving is not a union of cells");
  Scalar target = q.proportion * whole_value;
  for (const auto& t : candidates) {
    Serving piece = s.intersect(Serving::prefix(t));
    if (!structure_matches(p, r, *parent, s, piece)) continue;
    Scalar got;
    for (std::size_t c = 0; c < r.cells.size(); ++c) {
      if (piece.contains(r.cells[c])) got += r.values[q.cutter][c];
    }
    if (got == target) return {};
  }
  return fail(VerdictKind::cut_incompatible, "no prefix cut of the query serving matches the cells and proportion");
}

KitchenMeasure witness_measure(const PartitionRecord& p, AgentId agent) {
  if (agent >= p.agents()) throw PreconditionError("no such agent in record");
  require_valid(p);
  std::vector<Scalar> density;
  for (std::size_t c = 0; c < p.cells.size(); ++c) density.push_back(p.values[agent][c] / p.cells[c].length());
  auto tiles = *tiling(p.cells);
  std::vector<Scalar> breaks{Scalar(0)};
  std::vector<Scalar> masses;
  std::vector<std::size_t> owner;
  for (const auto& t : tiles) {
    // Adjacent pieces of equal density merge into one.
    if (!owner.empty() && density[owner.back()] == density[t.cell]) {
      breaks.back() = t.iv->hi;
      masses.back() += density[t.cell] * (t.iv->hi - t.iv->lo);
      continue;
    }
    breaks.push_back(t.iv->hi);
    masses.push_back(density[t.cell] * (t.iv->hi - t.iv->lo));
    owner.push_back(t.cell);
  }
  return KitchenMeasure(std::move(breaks), std::move(masses));
}

Profile witness_profile(const PartitionRecord& p) {
  Profile out;
  for (std::size_t i = 0; i < p.agents(); ++i) out.push_back(witness_measure(p, i));
  return out;
}

Record visible_record(const PartitionRecord& r, const Query& q) {
  const Serving& s = q.serving;
  Scalar whole_value;
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    if (s.contains(r.cells[c])) whole_value += r.values[q.cutter][c];
  }
  Scalar target = q.proportion * whole_value;
  std::vector<Scalar> candidates{Scalar(0)};
  for (const auto& cell : r.cells) {
    for (const auto& iv : cell.intervals()) candidates.push_back(iv.hi);
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& t : candidates) {
    Serving piece = s.intersect(Serving::prefix(t));
    Scalar got;
    bool is_union = true;
    for (std::size_t c = 0; c < r.cells.size() && is_union; ++c) {
      if (piece.contains(r.cells[c])) {
        got += r.values[q.cutter][c];
      } else if (!piece.disjoint(r.cells[c])) {
        is_union = false;
      }
    }
    if (!is_union || got != target) continue;
    RecordEntry whole{s, {}};
    RecordEntry cut{piece, {}};
    for (std::size_t i = 0; i < r.agents(); ++i) {
      whole.values.push_back(r.extended(i, s));
      cut.values.push_back(r.extended(i, piece));
    }
    return Record{{std::move(whole), std::move(cut)}};
  }
  throw PreconditionError("record does not resolve the query's cut");
}

}  // namespace cake
