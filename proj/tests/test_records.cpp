#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cake/arena.hpp"
#include "cake/records.hpp"
#include "support.hpp"

using namespace cake;
using cake::testing::random_record;
using cake::testing::random_serving;

namespace {

Scalar q(long a, long b) { return Scalar::frac(a, b); }

PartitionRecord halves(std::vector<Scalar> a0, std::vector<Scalar> a1) {
  PartitionRecord p;
  p.cells = {Serving::slice(0, q(1, 2)), Serving::slice(q(1, 2), 1)};
  p.values = {std::move(a0), std::move(a1)};
  return p;
}

Profile uniforms(std::size_t n) { return Profile(n, KitchenMeasure::uniform()); }

}  // namespace

TEST_CASE("validity") {
  CHECK(is_valid(PartitionRecord::whole(3)));
  CHECK(is_valid(halves({q(1, 4), q(3, 4)}, {q(1, 2), q(1, 2)})));
  CHECK_FALSE(is_valid(halves({q(1, 4), q(1, 4)}, {q(1, 2), q(1, 2)})));
  CHECK_FALSE(is_valid(halves({Scalar(0), Scalar(1)}, {q(1, 2), q(1, 2)})));
  PartitionRecord gap = halves({q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)});
  gap.cells[1] = Serving::slice(q(3, 4), 1);
  CHECK_FALSE(is_valid(gap));
  CHECK_THROWS_AS(require_valid(gap), PreconditionError);
  PartitionRecord p = halves({q(1, 4), q(3, 4)}, {q(1, 2), q(1, 2)});
  CHECK(p.extended(0, Serving::whole()) == Scalar(1));
  CHECK(p.extended(0, Serving::slice(q(1, 2), 1)) == q(3, 4));
}

TEST_CASE("ultraresponse from measures: worked examples") {
  PartitionRecord r =
      ultraresponse_from_measures(PartitionRecord::whole(2), Query{0, Serving::whole(), q(1, 2)}, uniforms(2));
  CHECK(r.cells == std::vector<Serving>{Serving::slice(0, q(1, 2)), Serving::slice(q(1, 2), 1)});
  CHECK(r.values[0] == std::vector<Scalar>{q(1, 2), q(1, 2)});
  CHECK(r.values[1] == std::vector<Scalar>{q(1, 2), q(1, 2)});

  PartitionRecord same =
      ultraresponse_from_measures(PartitionRecord::whole(2), Query{0, Serving::whole(), Scalar(0)}, uniforms(2));
  CHECK(same == PartitionRecord::whole(2));

  PartitionRecord h = halves({q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)});
  PartitionRecord four = ultraresponse_from_measures(h, Query{0, Serving::slice(q(1, 4), q(3, 4)), q(1, 2)}, uniforms(2));
  REQUIRE(four.size() == 4);
  std::vector<Serving> want{Serving::slice(0, q(1, 4)), Serving::slice(q(1, 4), q(1, 2)),
                            Serving::slice(q(1, 2), q(3, 4)), Serving::slice(q(3, 4), 1)};
  for (const auto& cell : want) {
    auto it = std::find(four.cells.begin(), four.cells.end(), cell);
    REQUIRE(it != four.cells.end());
    CHECK(four.values[0][static_cast<std::size_t>(it - four.cells.begin())] == q(1, 4));
  }

  Profile off{KitchenMeasure::uniform(), KitchenMeasure::from_densities({0, q(1, 2), 1}, {1, 1}, true)};
  CHECK_NOTHROW(ultraresponse_from_measures(h, Query{0, Serving::whole(), q(1, 3)}, off));
  PartitionRecord skew = halves({q(1, 4), q(3, 4)}, {q(1, 2), q(1, 2)});
  CHECK_THROWS_AS(ultraresponse_from_measures(skew, Query{0, Serving::whole(), q(1, 3)}, off), PreconditionError);
}

TEST_CASE("validator rejects each broken clause") {
  PartitionRecord p = PartitionRecord::whole(2);
  Query qq{0, Serving::whole(), q(1, 2)};
  PartitionRecord r = ultraresponse_from_measures(p, qq, uniforms(2));
  CHECK(validate_ultraresponse(p, qq, r).kind == VerdictKind::accept);

  PartitionRecord bad = r;
  bad.values[1][0] += q(1, 100);
  CHECK(validate_ultraresponse(p, qq, bad).kind == VerdictKind::appraisal_incompatible);

  bad = r;
  bad.values[1] = {Scalar(0), Scalar(1)};
  CHECK(validate_ultraresponse(p, qq, bad).kind == VerdictKind::sliver_incompatible);

  bad = r;
  bad.values[0] = {q(1, 3), q(2, 3)};
  CHECK(validate_ultraresponse(p, qq, bad).kind == VerdictKind::cut_incompatible);

  // Splitting a cell that lies outside the query serving.
  PartitionRecord h = halves({q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)});
  Query left{0, Serving::slice(0, q(1, 2)), q(1, 2)};
  bad.cells = {Serving::slice(0, q(1, 4)), Serving::slice(q(1, 4), q(1, 2)), Serving::slice(q(1, 2), q(3, 4)),
               Serving::slice(q(3, 4), 1)};
  bad.values = {{q(1, 4), q(1, 4), q(1, 4), q(1, 4)}, {q(1, 4), q(1, 4), q(1, 4), q(1, 4)}};
  CHECK(validate_ultraresponse(h, left, bad).kind == VerdictKind::cut_incompatible);

  bad = r;
  bad.cells.pop_back();
  bad.values[0].pop_back();
  bad.values[1].pop_back();
  CHECK(validate_ultraresponse(p, qq, bad).kind == VerdictKind::malformed);

  // Cell order does not matter.
  PartitionRecord suffix = r;
  std::swap(suffix.cells[0], suffix.cells[1]);
  suffix.values = {{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}};
  CHECK(validate_ultraresponse(p, Query{0, Serving::whole(), q(1, 2)}, suffix).kind == VerdictKind::accept);
  // Three atoms cannot come from one cut of the whole cake.
  PartitionRecord thirds;
  thirds.cells = {Serving::slice(0, q(1, 3)), Serving::slice(q(1, 3), q(2, 3)), Serving::slice(q(2, 3), 1)};
  thirds.values = {{q(1, 3), q(1, 3), q(1, 3)}, {q(1, 3), q(1, 3), q(1, 3)}};
  CHECK_FALSE(validate_ultraresponse(p, qq, thirds));
}

TEST_CASE("random ultraresponses validate, refine and round-trip") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 300; ++k) {
    std::size_t cells = 1 + rng() % 4;
    std::size_t agents = 2 + rng() % 2;
    PartitionRecord p = random_record(rng, cells, agents);
    REQUIRE(is_valid(p));
    Profile w = random_extension(p, rng);
    Query qq{static_cast<AgentId>(rng() % agents), random_serving(rng, 32), Scalar::frac(static_cast<long>(rng() % 7), 6)};
    PartitionRecord r = ultraresponse_from_measures(p, qq, w);
    REQUIRE(is_valid(r));
    REQUIRE(validate_ultraresponse(p, qq, r).kind == VerdictKind::accept);
    REQUIRE(r.size() <= 3 * p.size());
    // Every profile extending the refinement extends the original record.
    Profile wr = witness_profile(r);
    for (AgentId i = 0; i < agents; ++i) {
      for (std::size_t c = 0; c < p.size(); ++c) REQUIRE(wr[i].value(p.cells[c]) == p.values[i][c]);
      for (std::size_t c = 0; c < r.size(); ++c) REQUIRE(wr[i].value(r.cells[c]) == r.values[i][c]);
    }
    Record vis = visible_record(r, qq);
    Record direct = respond(qq, w);
    REQUIRE(vis == direct);
  }
}

TEST_CASE("witness measure") {
  KitchenMeasure m = witness_measure(halves({q(1, 4), q(3, 4)}, {q(1, 2), q(1, 2)}), 0);
  CHECK(m.density(0) == q(1, 2));
  CHECK(m.density(1) == q(3, 2));
  CHECK(witness_measure(PartitionRecord::whole(1), 0) == KitchenMeasure::uniform());
  Scalar g = Scalar::golden();
  KitchenMeasure mg = witness_measure(halves({g, Scalar(1) - g}, {q(1, 2), q(1, 2)}), 0);
  CHECK(mg.density(0) == Scalar::sqrt_of(5) - Scalar(1));
  CHECK(mg.density(1) == Scalar(3) - Scalar::sqrt_of(5));
  KitchenMeasure flat = witness_measure(halves({g, Scalar(1) - g}, {q(1, 2), q(1, 2)}), 1);
  CHECK(flat == KitchenMeasure::uniform());
  CHECK_THROWS_AS(witness_measure(halves({Scalar(0), Scalar(1)}, {q(1, 2), q(1, 2)}), 0), PreconditionError);
}

TEST_CASE("witness measure round-trip on random records") {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 1000; ++k) {
    PartitionRecord p = random_record(rng, 1 + rng() % 4, 2);
    if (k % 2) {
      // Move a little value between two cells along sqrt 5.
      Scalar eps = (Scalar::sqrt_of(5) - Scalar(2)) / Scalar(1000);
      if (p.size() > 1) {
        p.values[0][0] += eps;
        p.values[0][1] -= eps;
      }
      if (!is_valid(p)) continue;
    }
    for (AgentId i = 0; i < 2; ++i) {
      KitchenMeasure m = witness_measure(p, i);
      for (std::size_t c = 0; c < p.size(); ++c) REQUIRE(m.value(p.cells[c]) == p.values[i][c]);
    }
  }
}
