#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cake/arena.hpp"
#include "cake/kitchen.hpp"
#include "support.hpp"

using namespace cake;
using cake::testing::random_serving;

namespace {

Serving sv(std::initializer_list<std::pair<Scalar, Scalar>> parts) {
  std::vector<Interval> ivs;
  for (const auto& [a, b] : parts) ivs.push_back({a, b});
  return Serving(ivs);
}

Scalar q(long a, long b) { return Scalar::frac(a, b); }

// Membership of the midpoint of each 1/(2*den) grid cell decides servings on
// a 1/den grid.
std::vector<bool> sample(const Serving& s, long den) {
  std::vector<bool> bits;
  for (long k = 0; k < den; ++k) bits.push_back(s.contains_point(Scalar::frac(2 * k + 1, 2 * den)));
  return bits;
}

KitchenMeasure skewed() { return KitchenMeasure::from_densities({q(0, 1), q(1, 4), q(1, 1)}, {q(2, 1), q(2, 3)}); }

}  // namespace

TEST_CASE("serving canonical form") {
  Serving s = sv({{q(1, 2), q(3, 4)}, {q(0, 1), q(1, 4)}, {q(1, 4), q(1, 3)}, {q(5, 8), q(7, 8)}});
  REQUIRE(s.intervals().size() == 2);
  CHECK(s.intervals()[0] == Interval{q(0, 1), q(1, 3)});
  CHECK(s.intervals()[1] == Interval{q(1, 2), q(7, 8)});
  CHECK(Serving(s.intervals()) == s);
  CHECK(s.length() == q(17, 24));
  CHECK(s.inf() == Scalar(0));
  CHECK(s.sup() == q(7, 8));
  CHECK(Serving::slice(q(1, 2), q(1, 2)).empty());
  CHECK(Serving::prefix(Scalar(2)) == Serving::whole());
  CHECK_THROWS_AS(sv({{q(-1, 2), q(1, 2)}}), PreconditionError);
  CHECK_THROWS_AS(sv({{q(1, 2), q(1, 4)}}), PreconditionError);
}

TEST_CASE("serving algebra agrees with point sampling") {
  std::mt19937_64 rng(21);
  const long den = 16;
  for (int k = 0; k < 2000; ++k) {
    Serving a = random_serving(rng, den);
    Serving b = random_serving(rng, den);
    auto sa = sample(a, den);
    auto sb = sample(b, den);
    auto su = sample(a.unite(b), den);
    auto si = sample(a.intersect(b), den);
    auto sm = sample(a.minus(b), den);
    auto sc = sample(a.complement(), den);
    bool contains = true;
    bool disjoint = true;
    for (long x = 0; x < den; ++x) {
      REQUIRE(su[x] == (sa[x] || sb[x]));
      REQUIRE(si[x] == (sa[x] && sb[x]));
      REQUIRE(sm[x] == (sa[x] && !sb[x]));
      REQUIRE(sc[x] == !sa[x]);
      if (sb[x] && !sa[x]) contains = false;
      if (sa[x] && sb[x]) disjoint = false;
    }
    REQUIRE(a.contains(b) == contains);
    REQUIRE(a.disjoint(b) == disjoint);
    REQUIRE(Serving(a.intervals()) == a);
    REQUIRE(a.unite(b).length() + a.intersect(b).length() == a.length() + b.length());
  }
}

TEST_CASE("measure values") {
  KitchenMeasure u = KitchenMeasure::uniform();
  CHECK(u.value(Serving::whole()) == Scalar(1));
  CHECK(u.value(sv({{q(0, 1), q(1, 4)}, {q(1, 2), q(3, 4)}})) == q(1, 2));
  CHECK(skewed().value(Serving::prefix(q(1, 2))) == q(2, 3));
  CHECK(skewed().cdf(q(1, 4)) == q(1, 2));
  CHECK(skewed().cdf_inverse(q(1, 2)) == q(1, 4));
  CHECK(u.value(Serving()) == Scalar(0));
  CHECK_THROWS_AS(KitchenMeasure({q(0, 1), q(1, 2), q(1, 1)}, {q(1, 1), q(0, 1)}), PreconditionError);
  CHECK_THROWS_AS(KitchenMeasure({q(0, 1), q(1, 1)}, {q(1, 2)}), PreconditionError);
}

TEST_CASE("threshold and cut: worked examples") {
  KitchenMeasure u = KitchenMeasure::uniform();
  Cut c = threshold_and_cut(u, Query{0, Serving::whole(), q(1, 2)});
  CHECK(c.tau == q(1, 2));
  CHECK(c.piece == Serving::prefix(q(1, 2)));
  c = threshold_and_cut(u, Query{0, Serving::slice(q(1, 2), 1), q(1, 2)});
  CHECK(c.tau == q(3, 4));
  CHECK(c.piece == Serving::slice(q(1, 2), q(3, 4)));
  CHECK(threshold_and_cut(skewed(), Query{0, Serving::whole(), q(1, 4)}).tau == q(1, 8));
  c = threshold_and_cut(skewed(), Query{0, Serving::slice(q(1, 3), 1), Scalar(0)});
  CHECK(c.tau == Scalar(0));
  CHECK(c.piece.empty());
}

TEST_CASE("threshold identity and minimality on random measures") {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 1000; ++k) {
    KitchenMeasure m = random_profile(1, rng).front();
    Serving s = random_serving(rng);
    Scalar p = Scalar::frac(static_cast<long>(rng() % 9), 8);
    Cut c = threshold_and_cut(m, Query{0, s, p});
    REQUIRE(s.contains(c.piece));
    REQUIRE(m.value(c.piece) == p * m.value(s));
    REQUIRE(c.piece == s.intersect(Serving::prefix(c.tau)));
    if (c.tau > Scalar(0)) {
      // Just below tau the prefix falls short.
      Scalar below = c.tau - (c.tau / Scalar(1024));
      REQUIRE(m.value(s.intersect(Serving::prefix(below))) < p * m.value(s));
    }
  }
}

TEST_CASE("threshold on an irrational measure") {
  Scalar g = Scalar::golden();
  KitchenMeasure m({Scalar(0), q(1, 2), Scalar(1)}, {g, Scalar(1) - g});
  Cut c = threshold_and_cut(m, Query{0, Serving::whole(), q(1, 2)});
  CHECK(m.value(c.piece) == q(1, 2));
  CHECK(c.tau < q(1, 2));
}

TEST_CASE("respond") {
  Profile two{KitchenMeasure::uniform(), KitchenMeasure::uniform()};
  Record r = respond(Query{0, Serving::whole(), q(1, 2)}, two);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].serving == Serving::whole());
  CHECK(r.entries[0].values == std::vector<Scalar>{1, 1});
  CHECK(r.entries[1].serving == Serving::prefix(q(1, 2)));
  CHECK(r.entries[1].values == std::vector<Scalar>{q(1, 2), q(1, 2)});

  Profile mixed{KitchenMeasure::uniform(),
                KitchenMeasure::from_densities({q(0, 1), q(1, 2), q(1, 1)}, {q(1, 2), q(3, 2)})};
  r = respond(Query{0, Serving::whole(), q(1, 2)}, mixed);
  CHECK(r.entries[1].values == std::vector<Scalar>{q(1, 2), q(1, 4)});

  r = respond(Query{1, Serving::whole(), Scalar(1)}, two);
  CHECK(r.entries[1].serving == Serving::whole());
  CHECK_THROWS_AS(check_query(Query{2, Serving::whole(), q(1, 2)}, 2), PreconditionError);
  CHECK_THROWS_AS(check_query(Query{0, Serving::whole(), q(3, 2)}, 2), PreconditionError);
}
