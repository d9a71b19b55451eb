#include <doctest.h>

#include <random>

#include "kida/iwasawa.hpp"

using namespace kida;

namespace {

CharSeries series(u64 p, std::vector<long> c) {
  std::vector<BigInt> v;
  for (long x : c) v.emplace_back(x);
  return CharSeries(p, v);
}

std::vector<BigInt> bigs(std::vector<long> c) {
  std::vector<BigInt> v;
  for (long x : c) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("elementary modules") {
  CHECK(from_elementary(3, {1}, {}) == series(3, {3}));
  CHECK(from_elementary(3, {}, {{bigs({3, 1}), 2}}) == series(3, {9, 6, 1}));
  CHECK(from_elementary(3, {1}, {{bigs({3, 1}), 1}}) == series(3, {9, 3}));
  CHECK_THROWS_AS(from_elementary(3, {}, {{bigs({1, 1}), 1}}), Error);
  CHECK_THROWS_AS(from_elementary(3, {}, {{bigs({3, 2}), 1}}), Error);
}

TEST_CASE("mu and lambda") {
  auto inv = iwasawa_invariants(series(3, {3}));
  CHECK(inv.mu == 1);
  CHECK(inv.lambda == 0);
  inv = iwasawa_invariants(series(3, {3, 3, 1}));
  CHECK(inv.mu == 0);
  CHECK(inv.lambda == 2);
  CHECK(inv.euler_char_valuation == 1u);
  inv = iwasawa_invariants(from_elementary(3, {2}, {{bigs({3, 0, 1}), 1}, {bigs({3, 1}), 3}}));
  CHECK(inv.mu == 2);
  CHECK(inv.lambda == 5);
  CHECK_THROWS_AS(iwasawa_invariants(CharSeries(3, bigs({9, 27}), 2, false)), Error);
}

TEST_CASE("Euler characteristic") {
  const auto cyclo = series(3, {0, 3, 3, 1});
  CHECK_FALSE(euler_char_defined(cyclo));
  CHECK_THROWS_AS(euler_characteristic(cyclo), Error);
  CHECK_THROWS_AS(mu_lambda_zero(cyclo), Error);
  CHECK(euler_char_defined(series(3, {3})));
  CHECK(euler_char_defined(series(3, {3, 3, 1})));
  CHECK(euler_characteristic(series(3, {3})) == 3);
  CHECK(euler_characteristic(series(3, {1, 1})) == 1);
  CHECK(euler_characteristic(from_elementary(3, {1}, {{bigs({3, 1}), 1}})) == 9);
  // only the p-part of a_0 matters
  CHECK(euler_characteristic(series(3, {-6, 1})) == 3);
  CHECK(mu_lambda_zero(series(3, {1, 3})));
  CHECK_FALSE(mu_lambda_zero(series(3, {3})));
  CHECK_FALSE(mu_lambda_zero(series(3, {3, 1})));
  // a_0 zero at precision only
  const CharSeries fuzzy(3, bigs({0, 1}), 4, false);
  CHECK_THROWS_AS(euler_char_defined(fuzzy), Error);
  CHECK_FALSE(iwasawa_invariants(fuzzy).euler_char_defined.has_value());
}

TEST_CASE("invariants are additive under products") {
  std::mt19937_64 rng(7);
  for (u64 p : {3, 5, 7}) {
    for (int i = 0; i < 100; ++i) {
      auto random_series = [&] {
        std::vector<BigInt> c;
        const int deg = static_cast<int>(rng() % 5);
        for (int k = 0; k <= deg; ++k) c.emplace_back(static_cast<long>(rng() % 200) - 100);
        if (c.back() == 0) c.back() = 1;
        return CharSeries(p, c);
      };
      const auto f = random_series(), g = random_series();
      const auto fi = iwasawa_invariants(f), gi = iwasawa_invariants(g), hi = iwasawa_invariants(f * g);
      CHECK(hi.mu == fi.mu + gi.mu);
      CHECK(hi.lambda == fi.lambda + gi.lambda);
    }
  }
}

TEST_CASE("mu = lambda = 0 three ways") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const u64 p = std::vector<u64>{3, 5, 7}[rng() % 3];
    std::vector<BigInt> c;
    for (int k = 0; k < 4; ++k) c.emplace_back(static_cast<long>(rng() % 50) - 25);
    if (c[0] == 0) c[0] = static_cast<long>(p);
    const CharSeries f(p, c);
    const auto inv = iwasawa_invariants(f);
    const bool by_invariants = inv.mu == 0 && inv.lambda == 0;
    CHECK(mu_lambda_zero(f) == by_invariants);
    CHECK((euler_characteristic(f) == 1) == by_invariants);
  }
}

TEST_CASE("json round trip") {
  const auto f = from_elementary(5, {1}, {{bigs({5, 1}), 2}});
  CHECK(series_from_json(to_json(f)) == f);
  const auto big = CharSeries(3, {BigInt("123456789012345678901234567890"), BigInt(1)});
  CHECK(series_from_json(to_json(big)) == big);
  const auto j = nlohmann::json::parse(R"({"p": 3, "precision": 5, "coeffs": [3, "2", 1]})");
  const auto g = series_from_json(j);
  CHECK_FALSE(g.exact());
  CHECK(iwasawa_invariants(g).lambda == 1);
  CHECK_THROWS_AS(series_from_json(nlohmann::json::parse(R"({"p": 4, "coeffs": [1]})")), Error);
}
