#include <doctest.h>

#include <random>

#include "kida/point_count.hpp"
#include "oracles.hpp"

using namespace kida;

namespace {
const WeierstrassModel kExample(0, 0, 1, -3, -5);
}

TEST_CASE("naive counts") {
  CHECK(count_points_naive(kExample, 7) == 10);
  CHECK(count_points_naive(WeierstrassModel(0, 0, 0, 1, 0), 5) == 4);
  for (u64 l : {5, 11, 17}) CHECK(count_points_naive(WeierstrassModel(0, 0, 0, 0, 1), l) == l + 1);
  CHECK_THROWS_AS(count_points_naive(kExample, 11), Error);
  CHECK_THROWS_AS(count_points_naive(kExample, 3), Error);
}

TEST_CASE("naive count agrees with the field oracle over F_l") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    const auto w = oracle::random_curve(rng, 15);
    for (u64 l : {2, 3, 5, 7, 13, 29}) {
      if (reduce(discriminant(w), l) == 0) continue;
      CHECK(count_points_naive(w, l) == oracle::count_points(w, l, 1));
    }
  }
}

TEST_CASE("BSGS agrees with enumeration") {
  std::mt19937_64 rng(5);
  const auto primes = sieve_primes(1500);
  for (int i = 0; i < 6; ++i) {
    const auto w = oracle::random_curve(rng, 50);
    for (u64 l : primes) {
      if (l <= kBsgsMinPrime || reduce(discriminant(w), l) == 0) continue;
      CHECK(count_points_bsgs(w, l) == count_points_naive(w, l));
    }
  }
  // supersingular y^2 = x^3 + 1 for l = 2 mod 3 has many points of order dividing l + 1
  for (u64 l : {233, 461, 1013})
    CHECK(count_points_bsgs(WeierstrassModel(0, 0, 0, 0, 1), l) == l + 1);
  CHECK_THROWS_AS(count_points_bsgs(kExample, 7), Error);
}

TEST_CASE("dispatch and Hasse bound") {
  const auto fd = frobenius(kExample, 1009);
  CHECK(within_hasse(fd.trace, 1009));
  CHECK(count_points(kExample, 1009) == count_points_naive(kExample, 1009));
  CHECK(count_points(kExample, 1009, 2000) == count_points(kExample, 1009, 300));
  CHECK(frobenius(kExample, 7).trace == -2);
  CHECK(within_hasse(5, 7));
  CHECK_FALSE(within_hasse(6, 7));
}

TEST_CASE("orders over extensions") {
  const FrobeniusData fd{7, -2};
  CHECK(order_over_extension(fd, 1) == 10);
  CHECK(order_over_extension(fd, 2) == 60);
  CHECK(oracle::count_points(kExample, 7, 2) == 60);
  CHECK(order_over_extension(fd, 3) == oracle::count_points(kExample, 7, 3));
  CHECK(order_over_extension(FrobeniusData{13, 3}, 1) == 11);
}

TEST_CASE("orders over extensions agree with brute force over F_{l^n}") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto w = oracle::random_curve(rng, 10);
    for (u64 l : {2, 3, 5, 7}) {
      if (reduce(discriminant(w), l) == 0) continue;
      const auto fd = frobenius(w, l);
      for (unsigned n = 1; n <= 3; ++n) {
        if (std::pow(double(l), double(n)) > 400) break;
        CHECK(order_over_extension(fd, n) == oracle::count_points(w, l, n));
      }
    }
  }
}
