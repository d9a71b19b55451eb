#include <doctest.h>

#include "kida/curve.hpp"
#include "oracles.hpp"

using namespace kida;

namespace {
const WeierstrassModel kExample(0, 0, 1, -3, -5);
}

TEST_CASE("invariants of the example curve") {
  const auto inv = invariants(kExample);
  CHECK(inv.c4 == 144);
  CHECK(inv.c6 == 4104);
  CHECK(inv.disc == -8019);
  CHECK(inv.j == Rational(-4096, 11));
  Rational j(BigInt(-144 * 144 * 144), BigInt(8019));
  j.canonicalize();
  CHECK(inv.j == j);
  const auto inv2 = invariants(WeierstrassModel(0, 0, 0, -1, 0));
  CHECK(inv2.disc == 64);
  CHECK(inv2.c4 == 48);
  CHECK_THROWS_AS(invariants(WeierstrassModel(0, 0, 0, 0, 0)), Error);
}

TEST_CASE("c4^3 - c6^2 = 1728 disc on random models") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto w = oracle::random_curve(rng, 1000);
    const auto inv = invariants(w);
    CHECK(inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6 == 1728 * inv.disc);
  }
}

TEST_CASE("parse and print") {
  CHECK(WeierstrassModel::parse("0,0,1,-3,-5") == kExample);
  CHECK(kExample.to_string() == "0,0,1,-3,-5");
  CHECK_THROWS_AS(WeierstrassModel::parse("1,2"), Error);
  CHECK_THROWS_AS(WeierstrassModel::parse("1,2,x,4,5"), Error);
}

TEST_CASE("minimal models") {
  const auto m = minimal_model(kExample);
  CHECK(m.model == kExample);
  CHECK(m.u == 1);

  const auto tw = quadratic_twist(kExample, -3);
  const auto ti = invariants(tw);
  CHECK(ti.c4 == 1296);
  CHECK(ti.c6 == -110808);
  CHECK(ti.disc == -pow(BigInt(3), 12) * 11);
  const auto tm = minimal_model(tw);
  const auto mi = invariants(tm.model);
  CHECK(mi.c4 == 16);
  CHECK(mi.c6 == -152);
  CHECK(mi.disc == -11);
  CHECK(tm.u == 3);

  const WeierstrassModel base(0, 0, 0, -1, 0);
  const auto scaled = transform(base, 0, 0, 0, BigInt(1)) ;
  CHECK(scaled == base);
  // x = x'/4, y = y'/8: a4 -> 16 a4, a6 -> 64 a6.
  const WeierstrassModel big(0, 0, 0, -16, 0);
  const auto bm = minimal_model(big);
  CHECK(bm.u == 2);
  CHECK(invariants(bm.model).c4 == invariants(base).c4);
  CHECK(invariants(bm.model).c6 == invariants(base).c6);
}

TEST_CASE("minimal model keeps j and only removes 12th powers") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto w = oracle::random_curve(rng, 50);
    const BigInt u = 1 + static_cast<long>(rng() % 6);
    const auto scaled = transform(w, static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 3) - 1,
                                  static_cast<long>(rng() % 5) - 2, 1);
    const WeierstrassModel up(scaled.a1 * u, scaled.a2 * u * u, scaled.a3 * u * u * u, scaled.a4 * u * u * u * u,
                              scaled.a6 * u * u * u * u * u * u);
    const auto m = minimal_model(up);
    const auto mi = invariants(m.model), wi = invariants(w);
    CHECK(mi.j == wi.j);
    CHECK(abs(mi.disc) <= abs(wi.disc));
    for (u64 l : bad_primes(m.model)) {
      const bool non_min = padic_valuation(mi.c4 == 0 ? BigInt(0) + pow(BigInt(static_cast<unsigned long>(l)), 4)
                                                      : mi.c4, l) >= 4 &&
                           padic_valuation(mi.c6 == 0 ? pow(BigInt(static_cast<unsigned long>(l)), 6) : mi.c6, l) >= 6 &&
                           padic_valuation(mi.disc, l) >= 12;
      if (l > 3) CHECK_FALSE(non_min);
    }
  }
}

TEST_CASE("quadratic twists") {
  const auto one = quadratic_twist(kExample, 1);
  CHECK(invariants(one).c4 == invariants(kExample).c4);
  CHECK(invariants(one).c6 == invariants(kExample).c6);
  CHECK_THROWS_AS(quadratic_twist(kExample, 0), Error);
  CHECK_THROWS_AS(quadratic_twist(kExample, 12), Error);
  for (long d : {-3L, 5L, -7L, 2L, -1L, 6L}) {
    const auto twice = minimal_model(quadratic_twist(quadratic_twist(kExample, d), d)).model;
    CHECK(invariants(twice).c4 == invariants(kExample).c4);
    CHECK(invariants(twice).c6 == invariants(kExample).c6);
  }
  const EllipticCurve t(quadratic_twist(kExample, -3));
  CHECK(t.invariants().disc == -11);
  CHECK(t.has_good_reduction(3));
}

TEST_CASE("local data of the example curve") {
  const EllipticCurve e(kExample);
  CHECK(e.bad_primes() == std::vector<u64>{3, 11});
  const auto at3 = e.local_data(3);
  CHECK(at3.type == ReductionType::additive);
  CHECK(at3.v_disc == 6);
  CHECK(at3.v_c4 == 2);
  const auto at11 = e.local_data(11);
  CHECK(at11.type == ReductionType::nonsplit_multiplicative);
  CHECK(at11.tamagawa == 1);
  CHECK(at11.v_disc == 1);
  CHECK(e.local_data(7).type == ReductionType::good);
  // Conductor 99 = 3^2 * 11.
  CHECK(at3.conductor_exponent == 2);
  CHECK(at11.conductor_exponent == 1);
  CHECK(potentially_good(kExample, 3));
  CHECK_FALSE(potentially_good(kExample, 11));
}

TEST_CASE("Tate's algorithm on curves with known reduction data") {
  struct Case {
    WeierstrassModel w;
    u64 l;
    const char* kodaira;
    unsigned c;  // 0 when not asserted
    unsigned f;
  };
  // Conductors are known (11, 14, 27, 32, 37, 99); the symbol then follows
  // from v(disc) and the component count.
  const std::vector<Case> cases = {
      {{0, -1, 1, -10, -20}, 11, "I5", 5, 1},
      {{0, -1, 1, 0, 0}, 11, "I1", 1, 1},
      {{1, 0, 1, 4, -6}, 2, "I6", 2, 1},
      {{1, 0, 1, 4, -6}, 7, "I3", 3, 1},
      {{0, 0, 1, -1, 0}, 37, "I1", 1, 1},
      {{0, 0, 1, 0, -7}, 3, "IV*", 0, 3},
      {{0, 0, 0, -1, 0}, 2, "III", 2, 5},
      {{0, 0, 1, -3, -5}, 3, "I0*", 0, 2},
  };
  for (const auto& c : cases) {
    CAPTURE(c.w.to_string());
    CAPTURE(c.l);
    const EllipticCurve e(c.w);
    const auto d = e.local_data(c.l);
    CHECK(d.kodaira.to_string() == c.kodaira);
    if (c.c != 0) CHECK(d.tamagawa == c.c);
    CHECK(d.conductor_exponent == c.f);
  }
}

namespace {

// Kodaira symbol for l >= 5 from the valuations of c4, c6 and disc alone.
std::string kodaira_from_valuations(unsigned v4, unsigned v6, unsigned vd) {
  if (vd == 0) return "I0";
  if (v4 == 0) return "I" + std::to_string(vd);
  if (vd == 2) return "II";
  if (vd == 3) return "III";
  if (vd == 4) return "IV";
  if (vd == 6 && !(v4 == 2 && v6 == 3)) return "I0*";
  if (v4 == 2 && v6 == 3 && vd >= 6) return vd == 6 ? "I0*" : "I" + std::to_string(vd - 6) + "*";
  if (vd == 8) return "IV*";
  if (vd == 9) return "III*";
  if (vd == 10) return "II*";
  return "?";
}

unsigned val(const BigInt& v, u64 l) { return v == 0 ? 99 : padic_valuation(v, l); }

}  // namespace

TEST_CASE("Kodaira symbols for l >= 5 match the valuation table") {
  std::mt19937_64 rng(23);
  int additive = 0;
  for (int i = 0; i < 3000; ++i) {
    // Multiply in small powers of 5 and 7 to reach additive fibres often.
    auto w = oracle::random_curve(rng, 30);
    const long s = std::vector<long>{1, 5, 7, 25, 35}[rng() % 5];
    w = WeierstrassModel(0, 0, 0, -27 * invariants(w).c4 * s * s, -54 * invariants(w).c6 * s * s * s);
    const EllipticCurve e(w);
    const auto& inv = e.invariants();
    for (u64 l : e.bad_primes()) {
      if (l < 5) continue;
      const auto d = e.local_data(l);
      CAPTURE(e.model().to_string());
      CAPTURE(l);
      CHECK(d.kodaira.to_string() == kodaira_from_valuations(val(inv.c4, l), val(inv.c6, l), val(inv.disc, l)));
      CHECK(d.conductor_exponent == (d.type == ReductionType::additive ? 2u : 1u));
      if (d.type == ReductionType::additive) ++additive;
    }
  }
  CHECK(additive > 200);
}

TEST_CASE("local data is invariant under changes of coordinates") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    const auto w = oracle::random_curve(rng, 60);
    const auto moved = transform(w, static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 5) - 2,
                                 static_cast<long>(rng() % 9) - 4, 1);
    const EllipticCurve a(w), b(moved);
    REQUIRE(a.bad_primes() == b.bad_primes());
    for (u64 l : a.bad_primes()) {
      const auto x = a.local_data(l), y = b.local_data(l);
      CHECK(x.kodaira == y.kodaira);
      CHECK(x.tamagawa == y.tamagawa);
      CHECK(x.conductor_exponent == y.conductor_exponent);
      CHECK(x.type == y.type);
    }
  }
}

TEST_CASE("Tamagawa numbers at multiplicative primes follow v(disc)") {
  std::mt19937_64 rng(17);
  int seen = 0;
  for (int i = 0; i < 400; ++i) {
    const EllipticCurve e(oracle::random_curve(rng, 40));
    for (u64 l : e.bad_primes()) {
      const auto d = e.local_data(l);
      if (d.type == ReductionType::split_multiplicative) {
        CHECK(d.tamagawa == d.v_disc);
        ++seen;
      } else if (d.type == ReductionType::nonsplit_multiplicative) {
        CHECK(d.tamagawa == (d.v_disc % 2 == 0 ? 2u : 1u));
        ++seen;
      }
      // Valuation table: multiplicative iff v(c4) = 0 < v(disc) for l >= 5.
      if (l >= 5) CHECK((d.type != ReductionType::additive) == (d.v_c4 == 0));
    }
  }
  CHECK(seen > 100);
}

TEST_CASE("non-minimal input is rejected at the prime") {
  const WeierstrassModel big(0, 0, 0, -625, 0);  // scaled by 5 from y^2 = x^3 - x
  CHECK_THROWS_AS(reduction_type(big, 5), Error);
}
