#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "vanhove/diagrammatics.hpp"

using namespace vanhove;

namespace {

// Independent counting oracle: T(2k) = (2k-1) T(2k-2) matchings of 2k slots.
std::uint64_t matching_count_recursive(int slots) {
  if (slots <= 0) return 1;
  return static_cast<std::uint64_t>(slots - 1) * matching_count_recursive(slots - 2);
}

// Independent Catalan oracle via Pascal's triangle: C_k = binom(2k,k)/(k+1).
std::uint64_t catalan_binomial(int k) {
  std::vector<std::vector<std::uint64_t>> b(2 * k + 1);
  for (int r = 0; r <= 2 * k; ++r) {
    b[r].assign(r + 1, 1);
    for (int c = 1; c < r; ++c) b[r][c] = b[r - 1][c - 1] + b[r - 1][c];
  }
  return b[2 * k][k] / (k + 1);
}

Pairing make(std::vector<std::pair<int, int>> pairs) { return Pairing{std::move(pairs)}; }

}  // namespace

TEST_CASE("enumeration count matches the recursion and the double factorial") {
  for (int k = 0; k <= 7; ++k) {
    const std::uint64_t expect = matching_count_recursive(2 * k);
    CHECK(double_factorial_odd(k) == expect);
    std::uint64_t seen = 0;
    for_each_pairing(k, [&](const Pairing&) { ++seen; });
    CHECK(seen == expect);
  }
  CHECK(double_factorial_odd(6) == 10395);
}

TEST_CASE("enumeration order pairs the smallest open slot first") {
  const auto all = enumerate_pairings(2);
  REQUIRE(all.size() == 3);
  CHECK(all[0].pairs == make({{1, 2}, {3, 4}}).pairs);
  CHECK(all[1].pairs == make({{1, 3}, {2, 4}}).pairs);
  CHECK(all[2].pairs == make({{1, 4}, {2, 3}}).pairs);
}

TEST_CASE("catalan numbers agree with the binomial oracle") {
  for (int k = 0; k <= 10; ++k) CHECK(catalan(k) == catalan_binomial(k));
}

TEST_CASE("classification of the canonical small pairings") {
  const auto sequential = make({{1, 2}, {3, 4}});
  const auto enclosing = make({{1, 4}, {2, 3}});
  const auto interleaved = make({{1, 3}, {2, 4}});

  for (int m = 0; m <= 4; ++m)
    CHECK(classify(sequential, 4 - m, m) == GraphClass::Simple);

  // an enclosing pair is a nest only when both pairs sit on one side of m
  CHECK(classify(enclosing, 4, 0) == GraphClass::Nested);
  CHECK(classify(enclosing, 0, 4) == GraphClass::Nested);
  CHECK(classify(enclosing, 2, 2) == GraphClass::Simple);
  CHECK(classify(enclosing, 3, 1) == GraphClass::Simple);

  for (int m = 0; m <= 4; ++m)
    CHECK(classify(interleaved, 4 - m, m) == GraphClass::Crossing);

  CHECK(classify(make({}), 0, 0) == GraphClass::Simple);
  CHECK_THROWS_AS(classify(sequential, 3, 0), std::invalid_argument);
}

TEST_CASE("kappa on the worked examples") {
  // single pair across the boundary: E'_1 = E_1 stays independent of E_0
  CHECK(kappa(make({{1, 2}})).kappa == 2);
  // fully interleaved pairing collapses every variable
  CHECK(kappa(make({{1, 3}, {2, 4}})).kappa == 1);
  // one nest keeps (n+m)/2 + 1 variables
  CHECK(kappa(make({{1, 4}, {2, 3}})).kappa == 3);
}

TEST_CASE("kappa law and ends-meet, exhaustive through n+m = 8") {
  for (int k = 1; k <= 4; ++k) {
    const int slots = 2 * k;
    for_each_pairing(k, [&](const Pairing& p) {
      const int kap = kappa(p).kappa;
      const bool crossing = classify(p, slots, 0) == GraphClass::Crossing;
      if (crossing)
        CHECK(kap <= k - 1);
      else
        CHECK(kap == k + 1);
      CHECK(ends_meet(p));
    });
  }
}

TEST_CASE("multiplicities on the worked examples") {
  SUBCASE("single cross-boundary pair, n=m=1") {
    const auto s = multiplicities(make({{1, 2}}), 1, 1);
    REQUIRE(s.kappa == 2);
    int total = 0;
    for (const auto& mult : s.mults) {
      CHECK(mult.left == 1);
      CHECK(mult.right == 1);
      total += mult.left + mult.right;
    }
    CHECK(total == 4);
    CHECK(s.nprime == 0);
    CHECK(s.nbar == 1);
  }

  SUBCASE("single unprimed pair, n=2, m=0") {
    const auto s = multiplicities(make({{1, 2}}), 2, 0);
    REQUIRE(s.kappa == 2);
    // the inner variable E_1 touches one propagator only
    CHECK(s.nprime == 1);
    CHECK(s.nbar == 0);
    int total = 0;
    for (const auto& mult : s.mults) total += mult.left + mult.right;
    CHECK(total == 4);
  }

  SUBCASE("nested pairing, n=4, m=0: a one-sided class of multiplicity 2") {
    const auto s = multiplicities(make({{1, 4}, {2, 3}}), 4, 0);
    REQUIRE(s.cls == GraphClass::Nested);
    bool one_sided_multi = false;
    for (const auto& mult : s.mults)
      if ((mult.right == 0 && mult.left >= 2) || (mult.left == 0 && mult.right >= 2))
        one_sided_multi = true;
    CHECK(one_sided_multi);
  }
}

TEST_CASE("multiplicity bookkeeping holds for every pairing and split, n+m <= 8") {
  for (int k = 0; k <= 4; ++k) {
    const int slots = 2 * k;
    for_each_pairing(k, [&](const Pairing& p) {
      for (int m = 0; m <= slots; ++m) {
        const int n = slots - m;
        const auto s = multiplicities(p, n, m);
        int total = 0;
        bool one_sided_multi = false;
        bool irregular = false;  // anything but mult-1 or two-sided
        for (const auto& mult : s.mults) {
          total += mult.left + mult.right;
          const int t = mult.left + mult.right;
          if (t >= 2 && (mult.left == 0 || mult.right == 0)) one_sided_multi = true;
          if (t != 1 && (mult.left == 0 || mult.right == 0)) irregular = true;
        }
        CHECK(total == slots + 2);
        // class counts split kappa
        CHECK(s.nbar + 1 + s.nprime == s.kappa);
        if (s.cls != GraphClass::Crossing) {
          CHECK(s.kappa == k + 1);
          // class signatures separate nested from simple
          CHECK((s.cls == GraphClass::Nested) == one_sided_multi);
          if (s.cls == GraphClass::Simple) CHECK_FALSE(irregular);
        }
      }
    });
  }
}

TEST_CASE("class counts: totals and the Catalan split") {
  const auto c22 = count_by_class(2, 2);
  CHECK(c22.simple == 2);
  CHECK(c22.nested == 0);
  CHECK(c22.crossing == 1);

  const auto c40 = count_by_class(4, 0);
  CHECK(c40.simple == 1);
  CHECK(c40.nested == 1);
  CHECK(c40.crossing == 1);

  const auto c33 = count_by_class(3, 3);
  CHECK(c33.noncrossing() == 5);
  CHECK(c33.crossing == 10);
  CHECK(c33.total() == 15);

  for (int k = 0; k <= 5; ++k) {
    for (int m = 0; m <= 2 * k; ++m) {
      const auto c = count_by_class(2 * k - m, m);
      CHECK(c.noncrossing() == catalan(k));
      CHECK(c.total() == double_factorial_odd(k));
    }
  }
  CHECK_THROWS_AS(count_by_class(2, 1), std::invalid_argument);
}

TEST_CASE("second moment is exactly 2N") {
  CHECK(moment_from_pairings(1, 8) == doctest::Approx(16.0).epsilon(1e-15));
  CHECK(moment_from_pairings(1, 64) == doctest::Approx(128.0).epsilon(1e-15));
}

TEST_CASE("site alternation kills interleaved pairings at k <= 2") {
  // k=1: no crossing pairings exist at all
  CHECK(moment_split(1, 16).crossing == 0.0);
  // k=2: the unique crossing pairing pairs equal parities, which the
  // two-site alternation forbids
  CHECK(moment_split(2, 16).crossing == 0.0);
  CHECK(moment_split(2, 16).noncrossing == doctest::Approx(2.0 * 16 * catalan(2)));
}

TEST_CASE("non-crossing partial sum per level is N-independent") {
  for (int k = 1; k <= 4; ++k) {
    const double at16 = moment_split(k, 16).noncrossing / 16.0;
    const double at64 = moment_split(k, 64).noncrossing / 64.0;
    CHECK(at16 == doctest::Approx(2.0 * catalan(k)).epsilon(1e-12));
    CHECK(at64 == doctest::Approx(2.0 * catalan(k)).epsilon(1e-12));
  }
}

TEST_CASE("crossing partial sum per level scales like 1/N^2") {
  const double r16 = moment_split(3, 16).crossing / 16.0;
  const double r32 = moment_split(3, 32).crossing / 32.0;
  REQUIRE(r16 > 0.0);
  const double ratio = r16 / r32;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("pairing-sum moments match Monte Carlo within 3 sigma") {
  for (int k = 1; k <= 2; ++k) {
    const auto mc = moment_monte_carlo(k, 16, 400, 20260501);
    const double formula = moment_from_pairings(k, 16);
    REQUIRE(mc.stderr > 0.0);
    CHECK(std::abs(mc.mean - formula) <= 3.0 * mc.stderr);
  }
}

TEST_CASE("odd trace powers vanish identically") {
  const auto odd = trace_power_monte_carlo(3, 8, 50, 99);
  CHECK(odd.mean == 0.0);
  CHECK(odd.stderr == 0.0);
}
