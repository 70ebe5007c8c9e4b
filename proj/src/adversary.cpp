#include "cake/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace cake {

namespace {

void require_two_agents(const PartitionRecord& p) {
  if (p.agents() != 2) throw UnsupportedError("the two-agent engine got " + std::to_string(p.agents()) + " agents");
}

struct Canonical {
  PartitionRecord record;
  Scalar e1;
  Query query;
  bool swapped = false;
};

// Re-index so that agent 0 cuts; the distinguished agent's threshold becomes
// that of the other agent, which preserves deficiency.
Canonical canonicalize(const PartitionRecord& p, const Scalar& e1, const Query& q) {
  require_two_agents(p);
  check_query(q, 2);
  if (q.cutter == 0) return {p, e1, q, false};
  Query flipped = q;
  flipped.cutter = 0;
  return {swap_agents(p), Scalar(1) - e1, flipped, true};
}

void check_deficient(const PartitionRecord& p, const Scalar& e1, long level, const AdversaryOptions& opts,
                     const char* what) {
  if (!opts.checked || enumeration_cost(p.size(), level) > opts.budget) return;
  if (!is_deficient(p, e1, level, opts.budget)) {
    throw InvariantError(std::string(what) + " is not " + std::to_string(level) + "-deficient");
  }
}

void check_response(const PartitionRecord& p, const Query& q, const PartitionRecord& out) {
  UltraVerdict v = validate_ultraresponse(p, q, out);
  if (!v) throw InvariantError(std::string("constructed response fails ") + to_string(v.kind) + ": " + v.detail);
}

template <class T>
void insert_after(std::vector<T>& v, std::size_t at, T value) {
  v.insert(v.begin() + static_cast<std::ptrdiff_t>(at) + 1, std::move(value));
}

/**
 * Agent 1's value for the left part B' of the split cell. `a0` are agent 0's
 * values on the refined record and `base` holds agent 1's values with B'
 * zeroed and B'' set to the whole of agent 1's value for B, so that a weight
 * vector's dot product with `base` is the constant term of its line.
 */
Scalar split_value(const std::vector<Scalar>& a0, const std::vector<Scalar>& base, std::size_t b1, std::size_t b2,
                   const Scalar& vsup, const Scalar& e1, long level, const AdversaryOptions& opts) {
  detail::check_budget(a0.size(), level, opts.budget);
  const double e = e1.to_double();
  std::vector<std::vector<double>> rows{detail::as_doubles(a0), detail::as_doubles(base)};
  const double inf = std::numeric_limits<double>::infinity();

  auto is_candidate = [&](long r, const std::vector<long>& w, double s0) {
    const double target = e * static_cast<double>(r);
    const double tol = detail::tolerance(r);
    if (s0 < target - tol) return false;
    if (s0 > target + tol) return true;
    return detail::weighted_sum(w, a0) >= e1 * Scalar(r);
  };

  double up = -inf;
  double down = inf;
  detail::enumerate_weights(a0.size(), level, rows, [&](long r, const std::vector<long>& w,
                                                        const std::vector<double>& s) {
    long dw = w[b1] - w[b2];
    if (dw == 0 || !is_candidate(r, w, s[0])) return true;
    double crossing = (e * static_cast<double>(r) - s[1]) / static_cast<double>(dw);
    if (dw > 0) {
      up = std::max(up, crossing);
    } else {
      down = std::min(down, crossing);
    }
    return true;
  });

  std::optional<Scalar> up_exact;
  std::optional<Scalar> down_exact;
  const double slack = 2 * detail::tolerance(level);
  if (up > -inf || down < inf) {
    detail::enumerate_weights(a0.size(), level, rows, [&](long r, const std::vector<long>& w,
                                                          const std::vector<double>& s) {
      long dw = w[b1] - w[b2];
      if (dw == 0) return true;
      double crossing = (e * static_cast<double>(r) - s[1]) / static_cast<double>(dw);
      bool near = dw > 0 ? crossing >= up - slack : crossing <= down + slack;
      if (!near || !is_candidate(r, w, s[0])) return true;
      Scalar exact = (e1 * Scalar(r) - detail::weighted_sum(w, base)) / Scalar(dw);
      if (dw > 0) {
        if (!up_exact || exact > *up_exact) up_exact = exact;
      } else {
        if (!down_exact || exact < *down_exact) down_exact = exact;
      }
      return true;
    });
  }

  Scalar lo = up_exact ? max(Scalar(0), *up_exact) : Scalar(0);
  Scalar hi = down_exact ? min(vsup, *down_exact) : vsup;
  if (lo < hi) return (lo + hi) / Scalar(2);
  if (opts.checked) throw InvariantError("no split value separates the candidates; the record is not deficient");
  return vsup / Scalar(2);
}

// Cell-query response with agent 0 cutting.
PartitionRecord lemma3_core(const PartitionRecord& p, const Scalar& e1, long level, const Query& q,
                            const AdversaryOptions& opts) {
  auto it = std::find(p.cells.begin(), p.cells.end(), q.serving);
  if (it == p.cells.end()) throw PreconditionError("query serving is not a cell of the record");
  const std::size_t b = static_cast<std::size_t>(it - p.cells.begin());

  Serving piece = threshold_and_cut(witness_measure(p, 0), q).piece;
  Serving rest = q.serving.minus(piece);
  if (piece.empty() || rest.empty()) return ultraresponse_from_measures(p, q, witness_profile(p));

  const long lp = decayed_level(level);
  const Scalar v1 = q.proportion * p.values[0][b];
  const Scalar vsup = p.values[1][b];

  PartitionRecord out;
  out.cells = p.cells;
  out.cells[b] = piece;
  insert_after(out.cells, b, rest);
  out.values.resize(2);
  out.values[0] = p.values[0];
  out.values[0][b] = v1;
  insert_after(out.values[0], b, p.values[0][b] - v1);

  std::vector<Scalar> base = p.values[1];
  base[b] = Scalar(0);
  insert_after(base, b, vsup);
  Scalar vstar = lp >= 1 ? split_value(out.values[0], base, b, b + 1, vsup, e1, lp, opts) : vsup / Scalar(2);

  out.values[1] = p.values[1];
  out.values[1][b] = vstar;
  insert_after(out.values[1], b, vsup - vstar);
  return out;
}

std::vector<std::size_t> positive_columns(const std::array<Scalar, 3>& row) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < 3; ++k) {
    if (row[k].sign() > 0) out.push_back(k);
  }
  return out;
}

PartitionRecord lemma4_core(const PartitionRecord& p, const Scalar& e1, long level, const Query& q,
                            const AdversaryOptions& opts) {
  const Scalar& ratio = q.proportion;
  const KitchenMeasure mu = witness_measure(p, 0);
  CutterTable table = cutter_table(p, q, mu);
  const std::vector<std::array<Scalar, 3>> restricted = table.values;
  table = row_polarize(std::move(table), ratio);

  const std::size_t s = table.rows();
  for (auto& row : table.values) {
    if (positive_columns(row).size() == 3) {
      Scalar outside = row[2];
      row[0] += ratio * outside;
      row[1] += (Scalar(1) - ratio) * outside;
      row[2] = Scalar(0);
    }
  }
  if (table.split_rows() > 1) throw InvariantError("polarization left several split rows");

  // For every cell of the intermediate record, the table entry carrying its value.
  std::vector<std::pair<std::size_t, std::size_t>> image;
  PartitionRecord star;
  std::optional<std::size_t> split;
  for (std::size_t j = 0; j < s; ++j) {
    if (table.is_split(j)) split = j;
  }
  if (!split) {
    star = p;
    for (std::size_t j = 0; j < s; ++j) image.emplace_back(j, positive_columns(table.values[j]).front());
  } else {
    auto cols = positive_columns(table.values[*split]);
    const Scalar& left = table.values[*split][cols[0]];
    const Scalar& right = table.values[*split][cols[1]];
    Query inner{0, p.cells[*split], left / (left + right)};
    AdversaryOptions quiet = opts;
    quiet.checked = false;
    star = lemma3_core(p, e1, level, inner, quiet);
    for (std::size_t j = 0; j < s; ++j) {
      if (j == *split) {
        image.emplace_back(j, cols[0]);
        image.emplace_back(j, cols[1]);
      } else {
        image.emplace_back(j, positive_columns(table.values[j]).front());
      }
    }
  }
  if (star.size() != image.size()) throw InvariantError("intermediate record does not match the table");
  for (std::size_t c = 0; c < image.size(); ++c) {
    if (star.values[0][c] != table.values[image[c].first][image[c].second]) {
      throw InvariantError("intermediate record disagrees with the polarized table");
    }
  }

  std::vector<std::array<Scalar, 3>> first = table.values;
  std::vector<std::array<Scalar, 3>> second(s);
  for (std::size_t c = 0; c < image.size(); ++c) second[image[c].first][image[c].second] = star.values[1][c];

  bool zero_first = false;
  bool zero_second = false;
  std::optional<Scalar> smallest;
  for (std::size_t j = 0; j < s; ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      for (const Scalar* v : {&first[j][k], &second[j][k]}) {
        if (v->sign() > 0 && (!smallest || *v < *smallest)) smallest = *v;
      }
      if (table.entries[j][k].empty()) continue;
      zero_first = zero_first || first[j][k].is_zero();
      zero_second = zero_second || second[j][k].is_zero();
    }
  }

  if (zero_first || zero_second) {
    const long lp = decayed_level(level);
    Scalar eps = *smallest / Scalar(4);
    if (lp >= 1) {
      Scalar deficit = min_deficit(star, e1, lp, opts.budget);
      eps = min(eps, deficit / Scalar(6 * static_cast<long>(s) * lp));
    }
    if (zero_second) {
      for (std::size_t j = 0; j < s; ++j) {
        std::vector<std::size_t> sources, sinks;
        for (std::size_t k = 0; k < 3; ++k) {
          if (second[j][k].sign() > 0) {
            sources.push_back(k);
          } else if (!table.entries[j][k].empty()) {
            sinks.push_back(k);
          }
        }
        if (sinks.empty()) continue;
        Scalar loss = eps * Scalar(static_cast<long>(sinks.size())) / Scalar(static_cast<long>(sources.size()));
        for (auto k : sinks) second[j][k] = eps;
        for (auto k : sources) second[j][k] -= loss;
      }
    }
    if (zero_first) {
      // A convex mix with the witness restriction keeps row sums and the cut
      // ratio exact and makes every nonempty entry positive.
      for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t k = 0; k < 3; ++k) first[j][k] = (Scalar(1) - eps) * first[j][k] + eps * restricted[j][k];
      }
    }
  }

  PartitionRecord out;
  out.values.resize(2);
  for (std::size_t j = 0; j < s; ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      if (table.entries[j][k].empty()) continue;
      out.cells.push_back(table.entries[j][k]);
      out.values[0].push_back(first[j][k]);
      out.values[1].push_back(second[j][k]);
    }
  }
  return out;
}

using Core = PartitionRecord (*)(const PartitionRecord&, const Scalar&, long, const Query&, const AdversaryOptions&);

PartitionRecord respond_with(Core core, const PartitionRecord& p, const Scalar& e1, long level, const Query& q,
                             const AdversaryOptions& opts) {
  if (level < 1) throw PreconditionError("adversary level must be at least 1");
  require_valid(p);
  Canonical c = canonicalize(p, e1, q);
  check_deficient(c.record, c.e1, level, opts, "input record");
  PartitionRecord out = core(c.record, c.e1, level, c.query, opts);
  check_response(c.record, c.query, out);
  check_deficient(out, c.e1, decayed_level(level), opts, "response");
  return c.swapped ? swap_agents(out) : out;
}

}  // namespace

long decayed_level(long level) {
  if (level < 0) throw PreconditionError("negative level");
  long half = level / 2;
  long r = static_cast<long>(std::sqrt(static_cast<double>(half)));
  while (r * r > half) --r;
  while ((r + 1) * (r + 1) <= half) ++r;
  return r;
}

PartitionRecord lemma3_respond(const PartitionRecord& p, const Scalar& e1, long level, const Query& q,
                               const AdversaryOptions& opts) {
  return respond_with(&lemma3_core, p, e1, level, q, opts);
}

PartitionRecord lemma4_respond(const PartitionRecord& p, const Scalar& e1, long level, const Query& q,
                               const AdversaryOptions& opts) {
  return respond_with(&lemma4_core, p, e1, level, q, opts);
}

bool CutterTable::is_split(std::size_t row) const { return positive_columns(values[row]).size() > 1; }

std::size_t CutterTable::split_rows() const {
  std::size_t n = 0;
  for (std::size_t j = 0; j < rows(); ++j) n += is_split(j) ? 1 : 0;
  return n;
}

CutterTable cutter_table(const PartitionRecord& p, const Query& q, const KitchenMeasure& cutter_witness) {
  Serving piece = threshold_and_cut(cutter_witness, q).piece;
  Serving rest = q.serving.minus(piece);
  Serving outside = q.serving.complement();
  CutterTable t;
  for (const auto& cell : p.cells) {
    std::array<Serving, 3> row{cell.intersect(piece), cell.intersect(rest), cell.intersect(outside)};
    std::array<Scalar, 3> vals{cutter_witness.value(row[0]), cutter_witness.value(row[1]),
                               cutter_witness.value(row[2])};
    t.entries.push_back(std::move(row));
    t.values.push_back(std::move(vals));
  }
  return t;
}

CutterTable row_polarize(CutterTable t, const Scalar& p) {
  const Scalar one(1);
  for (;;) {
    std::vector<std::size_t> split;
    for (std::size_t j = 0; j < t.rows(); ++j) {
      if (t.is_split(j)) split.push_back(j);
    }
    if (split.size() <= 1) return t;
    auto& r1 = t.values[split.front()];
    auto& r2 = t.values[split.back()];
    auto pos = [](const std::array<Scalar, 3>& row, std::size_t k) { return row[k].sign() > 0; };

    // Per unit moved, each transfer shifts col1 - p (col1 + col2) by `gain`.
    std::size_t src1, sink1, src2, sink2;
    Scalar gain1, gain2;
    if (pos(r1, 0) && pos(r1, 1)) {
      src1 = 1, sink1 = 0, gain1 = one;
    } else if (pos(r1, 0) && pos(r1, 2)) {
      src1 = 2, sink1 = 0, gain1 = one - p;
    } else {
      src1 = 1, sink1 = 2, gain1 = p;
    }
    if (pos(r2, 0) && pos(r2, 1)) {
      src2 = 0, sink2 = 1, gain2 = -one;
    } else if (pos(r2, 0) && pos(r2, 2)) {
      src2 = 0, sink2 = 2, gain2 = p - one;
    } else {
      src2 = 2, sink2 = 1, gain2 = -p;
    }

    Scalar moved = r1[src1];
    Scalar rate;
    if (!gain1.is_zero()) {
      if (gain2.is_zero()) throw InvariantError("row polarization found no compensating transfer");
      rate = gain1 / (-gain2);
      moved = min(moved, r2[src2] / rate);
    }
    r1[src1] -= moved;
    r1[sink1] += moved;
    r2[src2] -= rate * moved;
    r2[sink2] += rate * moved;
  }
}

MergePlan merge_extend(const Entitlements& e) {
  if (e.size() <= 2) throw UnsupportedError("merge_extend needs more than two agents; use the two-agent engine");
  check_entitlements(e);
  MergePlan plan;
  IndexValue best = precision(e[0]);
  for (std::size_t i = 1; i < e.size(); ++i) {
    IndexValue pi = precision(e[i]);
    bool better = !best.is_infinite() && (pi.is_infinite() || pi.value() > best.value());
    if (better) {
      best = pi;
      plan.distinguished = i;
    }
  }
  plan.e1 = e[plan.distinguished];
  plan.role.assign(e.size(), 1);
  plan.role[plan.distinguished] = 0;
  return plan;
}

namespace {

MergePlan role_plan(const Entitlements& e) {
  if (e.size() > 2) return merge_extend(e);
  if (e.size() < 2) throw UnsupportedError("the adversary needs at least two agents");
  check_entitlements(e);
  return MergePlan{0, e[0], {0, 1}};
}

}  // namespace

PartitionRecord to_roles(const PartitionRecord& p, const MergePlan& plan) {
  PartitionRecord two;
  two.cells = p.cells;
  two.values.resize(2);
  for (std::size_t a = 0; a < plan.role.size(); ++a) {
    if (plan.role[a] == 0) two.values[0] = p.values.at(a);
  }
  for (std::size_t a = 0; a < plan.role.size(); ++a) {
    if (plan.role[a] == 1) {
      two.values[1] = p.values.at(a);
      break;
    }
  }
  return two;
}

PartitionRecord from_roles(const PartitionRecord& two, const MergePlan& plan) {
  PartitionRecord out;
  out.cells = two.cells;
  for (int r : plan.role) out.values.push_back(two.values.at(static_cast<std::size_t>(r)));
  return out;
}

Query to_roles(const Query& q, const MergePlan& plan) {
  Query out = q;
  out.cutter = static_cast<AgentId>(plan.role.at(q.cutter));
  return out;
}

AdversaryState sigma_initial_state(const Entitlements& e, ScheduleMode mode, int c_star) {
  AdversaryState st;
  st.plan = role_plan(e);
  for (const auto& l : adversary_schedule(mode, c_star)) {
    if (!l.fits_slong_p()) throw DomainError("schedule level " + l.get_str() + " does not fit a machine integer");
    st.levels.push_back(l.get_si());
  }
  IndexValue prec = precision(st.plan.e1);
  if (!prec.is_infinite() && prec.value() <= st.levels.front()) {
    throw DomainError("precision " + prec.str() + " of the distinguished entitlement does not exceed the first level " +
                      std::to_string(st.levels.front()) + ", so the whole-cake record is not deficient there");
  }
  st.record = PartitionRecord::whole(2);
  return st;
}

SigmaStep sigma_cstar_step(const AdversaryState& state, const Query& q, const AdversaryOptions& opts) {
  SigmaStep out{{}, state};
  Query two = to_roles(q, state.plan);
  PartitionRecord next;
  if (state.schedule_active()) {
    next = lemma4_respond(state.record, state.plan.e1, state.level(), two, opts);
    ++out.next.step;
  } else {
    next = ultraresponse_from_measures(state.record, two, witness_profile(state.record));
  }
  out.next.record = next;
  out.response = from_roles(next, state.plan);
  return out;
}

SigmaAdversary::SigmaAdversary(const Entitlements& e, ScheduleMode mode, int c_star, AdversaryOptions opts)
    : state_(sigma_initial_state(e, mode, c_star)), opts_(opts) {}

PartitionRecord SigmaAdversary::respond(const PartitionRecord& current, const Query& q) {
  if (current != from_roles(state_.record, state_.plan)) {
    throw InvariantError("adversary state is out of step with the running record");
  }
  SigmaStep step = sigma_cstar_step(state_, q, opts_);
  state_ = std::move(step.next);
  return std::move(step.response);
}

PartitionRecord NatureAdversary::respond(const PartitionRecord& current, const Query& q) {
  return ultraresponse_from_measures(current, q, profile_);
}

}  // namespace cake
