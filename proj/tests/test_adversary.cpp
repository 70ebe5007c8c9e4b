#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cake/adversary.hpp"
#include "cake/arena.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cake;
using cake::testing::random_deficient_case;
using cake::testing::random_query;
using cake::testing::random_record;
using cake::testing::random_serving;

namespace {

Scalar q(long a, long b) { return Scalar::frac(a, b); }

const std::vector<Serving> kHalves{Serving::slice(0, q(1, 2)), Serving::slice(q(1, 2), 1)};

Scalar column_sum(const CutterTable& t, std::size_t col) {
  Scalar s;
  for (const auto& row : t.values) s += row[col];
  return s;
}

}  // namespace

TEST_CASE("decayed level") {
  CHECK(decayed_level(512) == 16);
  CHECK(decayed_level(16) == 2);
  CHECK(decayed_level(8) == 2);
  CHECK(decayed_level(7) == 1);
  CHECK(decayed_level(1) == 0);
  for (long l = 0; l < 5000; ++l) {
    long r = decayed_level(l);
    REQUIRE(2 * r * r <= l);
    REQUIRE(2 * (r + 1) * (r + 1) > l - (l % 2));
  }
}

TEST_CASE("cell-query response: worked examples") {
  PartitionRecord whole = PartitionRecord::whole(2);
  Query half{0, Serving::whole(), q(1, 2)};
  PartitionRecord out = lemma3_respond(whole, q(5, 9), 8, half);
  CHECK(out.cells == kHalves);
  CHECK(out.values[0] == std::vector<Scalar>{q(1, 2), q(1, 2)});
  CHECK(out.values[1] == std::vector<Scalar>{q(1, 2), q(1, 2)});
  CHECK(validate_ultraresponse(whole, half, out).kind == VerdictKind::accept);
  CHECK(is_deficient(out, q(5, 9), 2).deficient);

  PartitionRecord same = lemma3_respond(whole, q(5, 9), 8, Query{0, Serving::whole(), Scalar(0)});
  CHECK(same == whole);
  CHECK(is_deficient(same, q(5, 9), 2).deficient);

  Scalar g = Scalar::golden();
  PartitionRecord gold = lemma3_respond(whole, g, 8, half, AdversaryOptions{true});
  CHECK(gold.cells == kHalves);
  CHECK(is_deficient(gold, g, 2).deficient);
  CHECK(validate_ultraresponse(whole, half, gold));

  CHECK_THROWS_AS(lemma3_respond(whole, q(5, 9), 8, Query{0, Serving::prefix(q(1, 2)), q(1, 2)}), PreconditionError);
  CHECK_THROWS_AS(lemma3_respond(whole, q(1, 2), 2, half, AdversaryOptions{true}), InvariantError);
}

TEST_CASE("general-query response: worked examples") {
  PartitionRecord whole = PartitionRecord::whole(2);
  Query mid{0, Serving::slice(q(1, 4), q(3, 4)), q(1, 2)};
  PartitionRecord out = lemma4_respond(whole, q(5, 9), 8, mid, AdversaryOptions{true});
  CHECK(out.size() <= 3);
  CHECK(validate_ultraresponse(whole, mid, out).kind == VerdictKind::accept);
  CHECK(is_deficient(out, q(5, 9), 2).deficient);

  // On a cell query both responses reach the same verdict.
  Query half{1, Serving::whole(), q(1, 2)};
  PartitionRecord a = lemma3_respond(whole, q(5, 9), 8, half);
  PartitionRecord b = lemma4_respond(whole, q(5, 9), 8, half);
  CHECK(is_deficient(a, q(5, 9), 2).deficient == is_deficient(b, q(5, 9), 2).deficient);

  // Proportion 1 over a serving that splits a cell.
  PartitionRecord h;
  h.cells = kHalves;
  h.values = {{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}};
  Query full{0, Serving::slice(q(1, 4), q(3, 4)), Scalar(1)};
  PartitionRecord p1 = lemma4_respond(h, q(5, 9), 8, full);
  CHECK(validate_ultraresponse(h, full, p1).kind == VerdictKind::accept);
  CHECK(is_deficient(p1, q(5, 9), 2).deficient);
}

TEST_CASE("row polarization") {
  CutterTable t;
  t.entries.resize(2);
  t.values = {{q(1, 4), q(1, 4), Scalar(0)}, {Scalar(0), Scalar(0), q(1, 2)}};
  CHECK(row_polarize(t, q(1, 2)).values == t.values);
  t.values = {{Scalar(0), Scalar(0), Scalar(1)}, {Scalar(0), Scalar(0), Scalar(0)}};
  CHECK(row_polarize(t, q(1, 3)).values == t.values);

  std::mt19937_64 rng(61);
  int polarized = 0;
  for (int k = 0; k < 400; ++k) {
    PartitionRecord p = random_record(rng, 3 + rng() % 3, 2);
    Profile w = random_extension(p, rng);
    Query qq{0, random_serving(rng, 32), q(1 + static_cast<long>(rng() % 7), 8)};
    if (qq.serving.empty()) continue;
    CutterTable before = cutter_table(p, qq, w[0]);
    for (std::size_t j = 0; j < before.rows(); ++j) {
      REQUIRE(before.values[j][0] + before.values[j][1] + before.values[j][2] == p.values[0][j]);
    }
    REQUIRE(column_sum(before, 0) == qq.proportion * (column_sum(before, 0) + column_sum(before, 1)));
    CutterTable after = row_polarize(before, qq.proportion);
    REQUIRE(after.split_rows() <= 1);
    for (std::size_t j = 0; j < after.rows(); ++j) {
      for (const auto& v : after.values[j]) REQUIRE(v.sign() >= 0);
      REQUIRE(after.values[j][0] + after.values[j][1] + after.values[j][2] == p.values[0][j]);
    }
    REQUIRE(column_sum(after, 0) == qq.proportion * (column_sum(after, 0) + column_sum(after, 1)));
    polarized += before.split_rows() > 1;
  }
  CHECK(polarized > 50);
}

TEST_CASE("decay on random deficient records") {
  std::mt19937_64 rng(62);
  for (int k = 0; k < 60; ++k) {
    auto c = random_deficient_case(rng, 12);
    const long next = decayed_level(c.level);
    bool cell = rng() % 2;
    Query qq = random_query(rng, c.record, cell);
    CAPTURE(c.origin);
    CAPTURE(c.level);
    CAPTURE(c.e1.str());
    PartitionRecord out = lemma4_respond(c.record, c.e1, c.level, qq);
    REQUIRE(validate_ultraresponse(c.record, qq, out).kind == VerdictKind::accept);
    REQUIRE(is_deficient(out, c.e1, next).deficient);
    if (cell) {
      PartitionRecord out3 = lemma3_respond(c.record, c.e1, c.level, qq);
      REQUIRE(validate_ultraresponse(c.record, qq, out3).kind == VerdictKind::accept);
      REQUIRE(is_deficient(out3, c.e1, next).deficient);
    }
  }
}

TEST_CASE("merge extension") {
  Scalar g = Scalar::golden();
  Scalar quarter = (Scalar(3) - Scalar::sqrt_of(5)) / Scalar(4);
  MergePlan plan = merge_extend({g, quarter, quarter});
  CHECK(plan.distinguished == 0);
  CHECK(plan.e1 == g);
  CHECK(Scalar(1) - plan.e1 == (Scalar(3) - Scalar::sqrt_of(5)) / Scalar(2));
  CHECK(plan.role == std::vector<int>{0, 1, 1});

  plan = merge_extend({q(1, 2), q(1, 4), q(1, 4)});
  CHECK(plan.distinguished == 1);
  CHECK(plan.e1 == q(1, 4));
  CHECK(merge_extend({q(1, 2), q(1, 6), q(1, 3)}).distinguished == 1);
  CHECK_THROWS_AS(merge_extend({q(1, 2), q(1, 2)}), UnsupportedError);

  // Agents outside the distinguished role mirror one appraisal.
  PartitionRecord two;
  two.cells = kHalves;
  two.values = {{q(1, 4), q(3, 4)}, {q(2, 3), q(1, 3)}};
  PartitionRecord three = from_roles(two, plan);
  CHECK(three.values[0] == two.values[1]);
  CHECK(three.values[1] == two.values[0]);
  CHECK(three.values[2] == two.values[1]);
  CHECK(to_roles(three, plan) == two);
  CHECK(to_roles(Query{2, Serving::whole(), q(1, 2)}, plan).cutter == 1);
  CHECK(to_roles(Query{1, Serving::whole(), q(1, 2)}, plan).cutter == 0);
}

TEST_CASE("sigma adversary") {
  Scalar g = Scalar::golden();
  Entitlements golden{g, Scalar(1) - g};
  AdversaryState st = sigma_initial_state(golden, ScheduleMode::paper, 2);
  CHECK(st.levels == std::vector<long>{512, 16, 2});
  CHECK(st.record == PartitionRecord::whole(2));
  CHECK_THROWS_AS(sigma_initial_state({q(1, 2), q(1, 2)}, ScheduleMode::paper, 1), DomainError);

  // c* = 0: nothing asked, every allocation is judged against the whole cake.
  SigmaAdversary zero(golden, ScheduleMode::paper, 0);
  auto immediate = allocate_immediately(Allocation{{Serving::prefix(q(5, 8)), Serving::slice(q(5, 8), 1)}});
  Transcript t = run_adversary_game(*immediate, zero, golden);
  CHECK(t.verdict == Verdict::rejected);
  CHECK_FALSE(payoff(t).has_value());

  // Past the schedule the responses are plain measure responses.
  SigmaStep step{{}, st};
  std::vector<Query> queries{{0, Serving::whole(), q(1, 2)}, {1, Serving::prefix(q(1, 2)), q(1, 3)},
                             {0, Serving::slice(q(1, 4), 1), q(1, 2)}, {1, Serving::whole(), q(2, 3)},
                             {0, Serving::prefix(q(1, 8)), q(1, 2)}};
  for (std::size_t k = 0; k < queries.size(); ++k) {
    PartitionRecord before = step.next.record;
    step = sigma_cstar_step(step.next, queries[k], AdversaryOptions{true});
    CHECK(validate_ultraresponse(before, queries[k], step.response).kind == VerdictKind::accept);
    CHECK(step.next.step == std::min<std::size_t>(k + 1, 2));
    if (k + 1 < 2) CHECK(is_deficient(step.next.record, g, step.next.level()).deficient);
  }

  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (const char* name : {"cloned-ds", "random", "greedy"}) {
      SigmaAdversary sigma(golden, ScheduleMode::paper, 2, AdversaryOptions{true});
      auto mediator = make_mediator(MediatorSpec{name, seed}, golden);
      Transcript duel = run_adversary_game(*mediator, sigma, golden);
      CAPTURE(name);
      CAPTURE(seed);
      REQUIRE(duel.verdict != Verdict::fault);
      auto pay = payoff(duel);
      REQUIRE((!pay || *pay < -2));
    }
  }
}

TEST_CASE("three-agent duel through the merge") {
  Scalar g = Scalar::golden();
  Scalar quarter = (Scalar(3) - Scalar::sqrt_of(5)) / Scalar(4);
  Entitlements e{g, quarter, quarter};
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (const char* name : {"cloned-ds", "random", "greedy"}) {
      SigmaAdversary sigma(e, ScheduleMode::paper, 1, AdversaryOptions{true});
      auto mediator = make_mediator(MediatorSpec{name, seed}, e);
      Transcript duel = run_adversary_game(*mediator, sigma, e);
      CAPTURE(name);
      CAPTURE(seed);
      REQUIRE(duel.verdict != Verdict::fault);
      for (const auto& s : duel.steps) {
        REQUIRE(s.record.agents() == 3);
        REQUIRE(s.record.values[1] == s.record.values[2]);
      }
      auto pay = payoff(duel);
      REQUIRE((!pay || *pay < -1));
    }
  }
}
