#include "cake/protocols.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "cake/deficiency.hpp"

namespace cake {

namespace {

std::string serving_text(const Serving& s) {
  std::string out;
  for (const auto& iv : s.intervals()) out += "(" + iv.lo.str() + "," + iv.hi.str() + "]";
  return out;
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t chronicle_hash(const Chronicle& ch) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& step : ch) {
    h = fnv1a(h, std::to_string(step.query.cutter) + serving_text(step.query.serving) + step.query.proportion.str());
    for (const auto& e : step.response.entries) {
      h = fnv1a(h, serving_text(e.serving));
      for (const auto& v : e.values) h = fnv1a(h, v.str());
    }
  }
  return h;
}

// A seed-derived integer in [0, span).
long seeded(std::uint64_t seed, std::uint64_t salt, long span) {
  std::mt19937_64 rng(seed ^ (salt * 0x9E3779B97F4A7C15ULL));
  return static_cast<long>(rng() % static_cast<std::uint64_t>(span));
}

Allocation collect(std::size_t agents, const std::vector<std::pair<AgentId, Serving>>& grants) {
  Allocation x;
  x.pieces.assign(agents, Serving());
  for (const auto& [agent, s] : grants) x.pieces[agent] = x.pieces[agent].unite(s);
  return x;
}

struct CloneSetup {
  std::vector<AgentId> clones;
  std::size_t agents = 0;
};

CloneSetup clone_setup(const Entitlements& e) {
  check_entitlements(e);
  IndexValue c = clonage(e);
  if (c.is_infinite()) throw UnsupportedError("cloned Dubins-Spanier needs rational entitlements");
  if (c.value() > 1'000'000) throw UnsupportedError("clonage " + c.value().get_str() + " is too large to clone");
  CloneSetup setup;
  setup.agents = e.size();
  for (std::size_t i = 0; i < e.size(); ++i) {
    mpq_class share = e[i].rat() * mpq_class(c.value());
    long count = mpz_class(share.get_num() / share.get_den()).get_si();
    setup.clones.insert(setup.clones.end(), static_cast<std::size_t>(count), i);
  }
  return setup;
}

// Rounds of "every remaining clone cuts the rest; the leftmost cut wins".
// A negative cap runs to completion.
Allocation dubins_spanier_body(const CloneSetup& setup, long cap, ChronicleCursor& cur) {
  std::vector<AgentId> clones = setup.clones;
  std::vector<std::pair<AgentId, Serving>> grants;
  Scalar x(0);
  auto stop = [&]() {
    std::map<AgentId, long> left;
    for (auto a : clones) ++left[a];
    AgentId heir = clones.front();
    for (const auto& [a, n] : left) {
      if (n > left[heir] || (n == left[heir] && a < heir)) heir = a;
    }
    grants.emplace_back(heir, Serving::slice(x, 1));
    return collect(setup.agents, grants);
  };
  while (clones.size() > 1) {
    const long m = static_cast<long>(clones.size());
    Serving rest = Serving::slice(x, 1);
    std::size_t winner = 0;
    Scalar best;
    for (std::size_t k = 0; k < clones.size(); ++k) {
      if (cap >= 0 && static_cast<long>(cur.used()) >= cap) return stop();
      const Record& r = cur.ask(Query{clones[k], rest, Scalar::frac(1, m)});
      const Serving& piece = response_piece(r);
      Scalar tau = piece.empty() ? x : piece.sup();
      if (k == 0 || tau < best) {
        best = tau;
        winner = k;
      }
    }
    grants.emplace_back(clones[winner], Serving::slice(x, best));
    x = best;
    clones.erase(clones.begin() + static_cast<std::ptrdiff_t>(winner));
  }
  if (cap >= 0 && static_cast<long>(cur.used()) >= cap) return stop();
  cur.ask(Query{clones.front(), Serving::slice(x, 1), Scalar(1)});
  grants.emplace_back(clones.front(), Serving::slice(x, 1));
  return collect(setup.agents, grants);
}

void even_paz_split(std::vector<AgentId> group, const Scalar& lo, const Scalar& hi, ChronicleCursor& cur,
                    std::vector<std::pair<AgentId, Serving>>& grants) {
  const std::size_t k = group.size();
  if (k == 1) {
    grants.emplace_back(group.front(), Serving::slice(lo, hi));
    return;
  }
  const std::size_t h = k / 2;
  std::vector<std::pair<Scalar, AgentId>> cuts;
  Serving part = Serving::slice(lo, hi);
  for (AgentId a : group) {
    const Record& r = cur.ask(Query{a, part, Scalar::frac(static_cast<long>(h), static_cast<long>(k))});
    const Serving& piece = response_piece(r);
    cuts.emplace_back(piece.empty() ? lo : piece.sup(), a);
  }
  std::sort(cuts.begin(), cuts.end());
  Scalar mid = cuts[h - 1].first;
  std::vector<AgentId> left, right;
  for (std::size_t i = 0; i < k; ++i) (i < h ? left : right).push_back(cuts[i].second);
  even_paz_split(left, lo, mid, cur, grants);
  even_paz_split(right, mid, hi, cur, grants);
}

class ImmediateStrategy : public MediatorStrategy {
 public:
  explicit ImmediateStrategy(Allocation x) : x_(std::move(x)) {}
  std::string name() const override { return "immediate"; }
  Action next(const Chronicle&) const override { return x_; }

 private:
  Allocation x_;
};

class RandomMediator : public MediatorStrategy {
 public:
  RandomMediator(std::size_t agents, std::uint64_t seed, long stop_after)
      : agents_(agents), seed_(seed), stop_after_(stop_after >= 0 ? stop_after : seeded(seed, 1, 7)) {}
  std::string name() const override { return "random"; }

  Action next(const Chronicle& ch) const override {
    std::mt19937_64 rng(seed_ ^ chronicle_hash(ch));
    auto pick = [&](long n) { return static_cast<long>(rng() % static_cast<std::uint64_t>(n)); };
    auto grid = [&]() { return Scalar::frac(pick(17), 16); };

    std::vector<Serving> seen{Serving::whole()};
    for (const auto& step : ch) {
      seen.push_back(step.response.entries[0].serving);
      seen.push_back(step.response.entries[1].serving);
      seen.push_back(step.response.entries[0].serving.minus(step.response.entries[1].serving));
    }
    std::vector<Scalar> marks;
    for (const auto& s : seen) {
      for (const auto& iv : s.intervals()) {
        marks.push_back(iv.lo);
        marks.push_back(iv.hi);
      }
    }

    if (static_cast<long>(ch.size()) >= stop_after_) {
      std::vector<Scalar> points;
      for (std::size_t i = 0; i + 1 < agents_; ++i) points.push_back(pick(2) == 0 ? marks[pick(static_cast<long>(marks.size()))] : grid());
      std::sort(points.begin(), points.end());
      std::vector<AgentId> order(agents_);
      for (std::size_t i = 0; i < agents_; ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<std::pair<AgentId, Serving>> grants;
      Scalar lo(0);
      for (std::size_t i = 0; i < agents_; ++i) {
        Scalar hi = i + 1 < agents_ ? points[i] : Scalar(1);
        grants.emplace_back(order[i], Serving::slice(lo, hi));
        lo = hi;
      }
      return collect(agents_, grants);
    }

    Query q;
    q.cutter = static_cast<AgentId>(pick(static_cast<long>(agents_)));
    switch (pick(3)) {
      case 0:
        q.serving = seen[static_cast<std::size_t>(pick(static_cast<long>(seen.size())))];
        break;
      case 1: {
        Scalar a = grid();
        Scalar b = grid();
        if (b < a) std::swap(a, b);
        q.serving = Serving::slice(a, b);
        break;
      }
      default:
        q.serving = seen[static_cast<std::size_t>(pick(static_cast<long>(seen.size())))].complement();
        break;
    }
    switch (pick(5)) {
      case 0:
        q.proportion = Scalar(0);
        break;
      case 1:
        q.proportion = Scalar(1);
        break;
      default: {
        long den = 1 + pick(12);
        q.proportion = Scalar::frac(pick(den + 1), den);
      }
    }
    return q;
  }

 private:
  std::size_t agents_;
  std::uint64_t seed_;
  long stop_after_;
};

struct Atom {
  Serving serving;
  std::vector<Scalar> values;
};

Allocation greedy_body(const Entitlements& e, long cap, ChronicleCursor& cur) {
  const std::size_t n = e.size();
  std::vector<Atom> atoms{{Serving::whole(), std::vector<Scalar>(n, Scalar(1))}};
  for (long step = 0; step < cap; ++step) {
    AgentId cutter = static_cast<AgentId>(step) % n;
    std::size_t widest = 0;
    for (std::size_t a = 1; a < atoms.size(); ++a) {
      if (atoms[a].serving.length() > atoms[widest].serving.length()) widest = a;
    }
    Scalar p = rational_approximation(e[cutter], 64);
    if (p.is_zero()) p = Scalar::frac(1, 2);
    const Record& r = cur.ask(Query{cutter, atoms[widest].serving, p});
    Atom piece{r.entries[1].serving, r.entries[1].values};
    Atom rest{atoms[widest].serving.minus(piece.serving), {}};
    for (std::size_t i = 0; i < n; ++i) rest.values.push_back(atoms[widest].values[i] - piece.values[i]);
    atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(widest));
    if (!rest.serving.empty()) atoms.insert(atoms.begin() + static_cast<std::ptrdiff_t>(widest), rest);
    if (!piece.serving.empty()) atoms.insert(atoms.begin() + static_cast<std::ptrdiff_t>(widest), piece);
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.serving.inf() < b.serving.inf(); });
  std::vector<Scalar> got(n);
  std::vector<std::pair<AgentId, Serving>> grants;
  for (const auto& atom : atoms) {
    std::vector<AgentId> hungry;
    for (AgentId i = 0; i < n; ++i) {
      if (got[i] < e[i]) hungry.push_back(i);
    }
    if (hungry.empty()) {
      for (AgentId i = 0; i < n; ++i) hungry.push_back(i);
    }
    AgentId best = hungry.front();
    for (AgentId i : hungry) {
      if (atom.values[i] > atom.values[best]) best = i;
    }
    got[best] += atom.values[best];
    grants.emplace_back(best, atom.serving);
  }
  return collect(n, grants);
}

Entitlements approximate_profile(const Entitlements& e, long max_den) {
  Entitlements out;
  Scalar used;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    Scalar a = rational_approximation(e[i], max_den);
    if (used + a > Scalar(1)) a = Scalar(1) - used;
    used += a;
    out.push_back(a);
  }
  out.push_back(Scalar(1) - used);
  return out;
}

}  // namespace

std::string allocation_problem(const Allocation& x, std::size_t agents) {
  if (x.pieces.size() != agents) return "allocation has " + std::to_string(x.pieces.size()) + " pieces for " +
                                        std::to_string(agents) + " agents";
  Serving covered;
  Scalar length;
  for (const auto& s : x.pieces) {
    covered = covered.unite(s);
    length += s.length();
  }
  if (covered != Serving::whole()) return "pieces do not cover the cake";
  if (length != Scalar(1)) return "pieces overlap";
  return {};
}

const Record& ChronicleCursor::ask(const Query& q) {
  if (pos_ >= chronicle_.size()) throw Pending{q};
  const ChronicleStep& step = chronicle_[pos_];
  if (!(step.query == q)) throw PreconditionError("chronicle does not follow this protocol");
  ++pos_;
  return step.response;
}

Action ReplayStrategy::next(const Chronicle& chronicle) const {
  ChronicleCursor cur(chronicle);
  try {
    Allocation x = body_(cur);
    if (cur.used() != chronicle.size()) throw PreconditionError("chronicle runs past the protocol's end");
    return x;
  } catch (const ChronicleCursor::Pending& p) {
    return p.query;
  }
}

const Serving& response_piece(const Record& r) {
  if (r.entries.size() != 2) throw PreconditionError("a cut response has two entries");
  return r.entries[1].serving;
}

std::unique_ptr<MediatorStrategy> cloned_dubins_spanier(const Entitlements& e) {
  CloneSetup setup = clone_setup(e);
  return std::make_unique<ReplayStrategy>(
      "cloned-ds", [setup](ChronicleCursor& cur) { return dubins_spanier_body(setup, -1, cur); });
}

std::unique_ptr<MediatorStrategy> cloned_dubins_spanier_capped(const Entitlements& e, std::size_t stop_after) {
  CloneSetup setup = clone_setup(e);
  long cap = static_cast<long>(stop_after);
  return std::make_unique<ReplayStrategy>(
      "cloned-ds", [setup, cap](ChronicleCursor& cur) { return dubins_spanier_body(setup, cap, cur); });
}

std::unique_ptr<MediatorStrategy> even_paz(std::size_t agents) {
  if (agents == 0) throw PreconditionError("even-paz needs at least one agent");
  return std::make_unique<ReplayStrategy>("even-paz", [agents](ChronicleCursor& cur) {
    std::vector<AgentId> all(agents);
    for (std::size_t i = 0; i < agents; ++i) all[i] = i;
    std::vector<std::pair<AgentId, Serving>> grants;
    even_paz_split(all, Scalar(0), Scalar(1), cur, grants);
    return collect(agents, grants);
  });
}

std::unique_ptr<MediatorStrategy> allocate_immediately(Allocation x) {
  return std::make_unique<ImmediateStrategy>(std::move(x));
}

Scalar rational_approximation(const Scalar& x, long max_den) {
  if (max_den < 1) throw DomainError("max_den must be positive");
  mpz_class h_prev = 1, h = x.floor();
  mpz_class k_prev = 0, k = 1;
  Scalar y = x - Scalar(mpq_class(h));
  while (!y.is_zero()) {
    y = y.inverse();
    mpz_class a = y.floor();
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    if (k_next > max_den) {
      // The best semiconvergent may beat the last convergent.
      mpz_class t = (mpz_class(max_den) - k_prev) / k;
      if (t > 0) {
        Scalar conv(mpq_class(h, k));
        Scalar semi(mpq_class(t * h + h_prev, t * k + k_prev));
        Scalar dc = max(x - conv, conv - x);
        Scalar ds = max(x - semi, semi - x);
        if (ds < dc) return semi;
      }
      break;
    }
    h_prev = h, h = h_next;
    k_prev = k, k = k_next;
    y -= Scalar(mpq_class(a));
  }
  return Scalar(mpq_class(h, k));
}

std::vector<std::string> mediator_names() { return {"cloned-ds", "even-paz", "random", "greedy"}; }

std::unique_ptr<MediatorStrategy> make_mediator(const MediatorSpec& spec, const Entitlements& e) {
  check_entitlements(e);
  if (spec.name == "cloned-ds") {
    IndexValue c = clonage(e);
    if (!c.is_infinite() && c.value() <= 4096 && spec.stop_after < 0) return cloned_dubins_spanier(e);
    long max_den = 2 + seeded(spec.seed, 2, 15);
    long cap = spec.stop_after >= 0 ? spec.stop_after : seeded(spec.seed, 3, 8);
    Entitlements approx = c.is_infinite() || c.value() > 4096 ? approximate_profile(e, max_den) : e;
    return cloned_dubins_spanier_capped(approx, static_cast<std::size_t>(cap));
  }
  if (spec.name == "even-paz") {
    for (const auto& x : e) {
      if (x != Scalar::frac(1, static_cast<long>(e.size()))) {
        throw UnsupportedError("even-paz needs equal entitlements");
      }
    }
    return even_paz(e.size());
  }
  if (spec.name == "random") return std::make_unique<RandomMediator>(e.size(), spec.seed, spec.stop_after);
  if (spec.name == "greedy") {
    long cap = spec.stop_after >= 0 ? spec.stop_after : seeded(spec.seed, 4, 7);
    Entitlements shares = e;
    return std::make_unique<ReplayStrategy>(
        "greedy", [shares, cap](ChronicleCursor& cur) { return greedy_body(shares, cap, cur); });
  }
  throw DomainError("unknown mediator '" + spec.name + "'");
}

}  // namespace cake
