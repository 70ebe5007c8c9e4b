#include "cake/arena.hpp"

#include <algorithm>
#include <utility>

namespace cake {

namespace {

KitchenMeasure measure_from_pieces(std::vector<std::pair<Interval, Scalar>> pieces) {
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
  std::vector<Scalar> breaks{Scalar(0)};
  std::vector<Scalar> masses;
  for (const auto& [iv, mass] : pieces) {
    breaks.push_back(iv.hi);
    masses.push_back(mass);
  }
  return KitchenMeasure(std::move(breaks), std::move(masses));
}

// Spreads `mass` over `s` in proportion to length.
void spread(const Serving& s, const Scalar& mass, std::vector<std::pair<Interval, Scalar>>& out) {
  Scalar len = s.length();
  for (const auto& iv : s.intervals()) out.emplace_back(iv, mass * (iv.hi - iv.lo) / len);
}

Scalar contained_value(const PartitionRecord& p, AgentId agent, const Serving& piece) {
  Scalar sum;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (piece.contains(p.cells[c])) sum += p.values[agent][c];
  }
  return sum;
}

void require_allocation(const Allocation& x, std::size_t agents) {
  std::string why = allocation_problem(x, agents);
  if (!why.empty()) throw PreconditionError(why);
}

Action checked_next(const MediatorStrategy& m, const Chronicle& chronicle, bool check) {
  Action a = m.next(chronicle);
  if (check) {
    Chronicle copy = chronicle;
    if (!(m.next(copy) == a)) throw MeasurabilityError("mediator '" + m.name() + "' is not a function of its chronicle");
  }
  return a;
}

Transcript start(GameMode mode, const Entitlements& e) {
  check_entitlements(e);
  Transcript t;
  t.mode = mode;
  t.entitlements = e;
  t.radicand = 0;
  for (const auto& x : e) {
    if (x.radicand() != 0) t.radicand = x.radicand();
  }
  return t;
}

}  // namespace

const char* to_string(GameMode m) { return m == GameMode::division ? "division" : "adversary"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::accepted:
      return "accepted";
    case Verdict::rejected:
      return "rejected";
    case Verdict::budget_exceeded:
      return "budget-exceeded";
    case Verdict::fault:
      return "fault";
  }
  return "?";
}

GameMode parse_game_mode(const std::string& s) {
  if (s == "division") return GameMode::division;
  if (s == "adversary") return GameMode::adversary;
  throw ParseError("unknown game mode '" + s + "'");
}

Verdict parse_verdict(const std::string& s) {
  for (Verdict v : {Verdict::accepted, Verdict::rejected, Verdict::budget_exceeded, Verdict::fault}) {
    if (s == to_string(v)) return v;
  }
  throw ParseError("unknown verdict '" + s + "'");
}

ProportionalVerdict check_proportional(const Profile& profile, const Entitlements& e, const Allocation& x) {
  if (profile.size() != e.size()) throw PreconditionError("profile and entitlements disagree on agent count");
  require_allocation(x, e.size());
  ProportionalVerdict v;
  for (AgentId i = 0; i < e.size(); ++i) {
    Scalar got = profile[i].value(x.pieces[i]);
    if (got < e[i]) v.shortfalls.push_back({i, e[i] - got});
  }
  return v;
}

bool judge_allocation(const PartitionRecord& p, const Entitlements& e, const Allocation& x) {
  require_valid(p);
  if (p.agents() != e.size()) throw PreconditionError("record and entitlements disagree on agent count");
  require_allocation(x, e.size());
  for (AgentId i = 0; i < e.size(); ++i) {
    if (contained_value(p, i, x.pieces[i]) < e[i]) return false;
  }
  return true;
}

Profile refutation_profile(const PartitionRecord& p, const Entitlements& e, const Allocation& x) {
  if (judge_allocation(p, e, x)) throw PreconditionError("the judge accepts this allocation");
  Profile out;
  for (AgentId i = 0; i < e.size(); ++i) {
    Scalar deficit = e[i] - contained_value(p, i, x.pieces[i]);
    // Straddling cells keep only a deficit/2 share of their value inside X_i,
    // so even all of them together cannot close the gap.
    Scalar inside = deficit.sign() > 0 ? deficit / Scalar(2) : Scalar::frac(1, 2);
    std::vector<std::pair<Interval, Scalar>> pieces;
    for (std::size_t c = 0; c < p.size(); ++c) {
      const Serving& cell = p.cells[c];
      const Scalar& v = p.values[i][c];
      Serving in = cell.intersect(x.pieces[i]);
      Serving out_part = cell.minus(x.pieces[i]);
      if (in.empty() || out_part.empty()) {
        spread(cell, v, pieces);
      } else {
        spread(in, v * inside, pieces);
        spread(out_part, v * (Scalar(1) - inside), pieces);
      }
    }
    out.push_back(measure_from_pieces(std::move(pieces)));
  }
  return out;
}

Profile random_profile(std::size_t agents, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> pieces(1, 4);
  std::uniform_int_distribution<long> spot(1, 15);
  std::uniform_int_distribution<long> weight(1, 100);
  Profile out;
  for (std::size_t i = 0; i < agents; ++i) {
    std::vector<long> cuts{0, 16};
    for (long k = pieces(rng) - 1; k > 0; --k) cuts.push_back(spot(rng));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Scalar> breaks;
    std::vector<Scalar> density;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      breaks.push_back(Scalar::frac(cuts[k], 16));
      if (k + 1 < cuts.size()) density.push_back(Scalar(weight(rng)));
    }
    out.push_back(KitchenMeasure::from_densities(breaks, density, true));
  }
  return out;
}

Profile random_extension(const PartitionRecord& p, std::mt19937_64& rng) {
  require_valid(p);
  std::uniform_int_distribution<long> weight(1, 100);
  std::uniform_int_distribution<long> splits(0, 2);
  std::uniform_int_distribution<long> spot(1, 63);
  Profile out;
  for (AgentId i = 0; i < p.agents(); ++i) {
    std::vector<std::pair<Interval, Scalar>> pieces;
    for (std::size_t c = 0; c < p.size(); ++c) {
      std::vector<std::pair<Interval, long>> raw;
      long total = 0;
      for (const auto& iv : p.cells[c].intervals()) {
        std::vector<Scalar> cuts{iv.lo, iv.hi};
        for (long k = splits(rng); k > 0; --k) cuts.push_back(iv.lo + (iv.hi - iv.lo) * Scalar::frac(spot(rng), 64));
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
          long w = weight(rng);
          total += w;
          raw.push_back({Interval{cuts[k], cuts[k + 1]}, w});
        }
      }
      for (const auto& [iv, w] : raw) pieces.emplace_back(iv, p.values[i][c] * Scalar::frac(w, total));
    }
    out.push_back(measure_from_pieces(std::move(pieces)));
  }
  return out;
}

Chronicle Transcript::chronicle() const {
  Chronicle c;
  for (const auto& s : steps) c.push_back({s.query, s.response});
  return c;
}

std::optional<long> payoff(const Transcript& t) {
  if (t.verdict == Verdict::accepted) return -t.cost;
  return std::nullopt;
}

Transcript run_division_game(const MediatorStrategy& mediator, const Entitlements& e, const Profile& profile,
                             const GameOptions& opts) {
  Transcript t = start(GameMode::division, e);
  if (profile.size() != e.size()) throw PreconditionError("profile and entitlements disagree on agent count");
  PartitionRecord running = PartitionRecord::whole(e.size());
  Chronicle chronicle;
  for (;;) {
    Action a = checked_next(mediator, chronicle, opts.check_measurability);
    if (auto* x = std::get_if<Allocation>(&a)) {
      t.final = *x;
      std::string why = allocation_problem(*x, e.size());
      if (!why.empty()) {
        t.verdict = Verdict::fault;
        t.detail = "mediator: " + why;
        return t;
      }
      ProportionalVerdict v = check_proportional(profile, e, *x);
      t.verdict = v.accepted() ? Verdict::accepted : Verdict::rejected;
      for (const auto& s : v.shortfalls) {
        t.detail += (t.detail.empty() ? "" : "; ") + ("agent " + std::to_string(s.agent) + " short by " + s.deficit.str());
      }
      return t;
    }
    const Query& q = std::get<Query>(a);
    if (opts.budget >= 0 && t.cost >= opts.budget) {
      t.verdict = Verdict::budget_exceeded;
      t.detail = "budget of " + std::to_string(opts.budget) + " queries spent";
      return t;
    }
    try {
      check_query(q, e.size());
    } catch (const PreconditionError& err) {
      t.verdict = Verdict::fault;
      t.detail = std::string("mediator: ") + err.what();
      return t;
    }
    Record r = respond(q, profile);
    running = ultraresponse_from_measures(running, q, profile);
    chronicle.push_back({q, r});
    t.steps.push_back({q, std::move(r), running});
    ++t.cost;
  }
}

Transcript run_adversary_game(const MediatorStrategy& mediator, Adversary& adversary, const Entitlements& e,
                              const GameOptions& opts) {
  Transcript t = start(GameMode::adversary, e);
  PartitionRecord running = PartitionRecord::whole(e.size());
  Chronicle chronicle;
  for (;;) {
    Action a = checked_next(mediator, chronicle, opts.check_measurability);
    if (auto* x = std::get_if<Allocation>(&a)) {
      t.final = *x;
      std::string why = allocation_problem(*x, e.size());
      if (!why.empty()) {
        t.verdict = Verdict::fault;
        t.detail = "mediator: " + why;
        return t;
      }
      t.verdict = judge_allocation(running, e, *x) ? Verdict::accepted : Verdict::rejected;
      return t;
    }
    const Query& q = std::get<Query>(a);
    if (opts.budget >= 0 && t.cost >= opts.budget) {
      t.verdict = Verdict::budget_exceeded;
      t.detail = "budget of " + std::to_string(opts.budget) + " queries spent";
      return t;
    }
    try {
      check_query(q, e.size());
    } catch (const PreconditionError& err) {
      t.verdict = Verdict::fault;
      t.detail = std::string("mediator: ") + err.what();
      return t;
    }
    PartitionRecord next = adversary.respond(running, q);
    UltraVerdict v = validate_ultraresponse(running, q, next);
    if (!v) {
      if (opts.permissive) {
        t.verdict = Verdict::accepted;
        t.detail = std::string("adversary record is inconsistent (") + to_string(v.kind) +
                   "); no measure profile extends the history";
      } else {
        t.verdict = Verdict::fault;
        t.detail = std::string("adversary: ") + to_string(v.kind) + ": " + v.detail;
      }
      return t;
    }
    Record r = visible_record(next, q);
    running = std::move(next);
    chronicle.push_back({q, r});
    t.steps.push_back({q, std::move(r), running});
    ++t.cost;
  }
}

}  // namespace cake
