#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "kida/cache.hpp"
#include "kida/classify.hpp"
#include "oracles.hpp"

using namespace kida;

namespace {

const WeierstrassModel kExample(0, 0, 1, -3, -5);

// Class straight from the definitions, with brute-force point counts.
PrimeClassKind oracle_class(const WeierstrassModel& w, u64 p, u64 l) {
  if (oracle::mod(static_cast<i64>(reduce(discriminant(w), l)), static_cast<i64>(l)) == 0) return PrimeClassKind::Q1;
  return oracle::count_points(w, l, 1) % p == 0 ? PrimeClassKind::Q2 : PrimeClassKind::Q3;
}

u64 upow(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_CASE("classes of small primes for the example curve") {
  const auto c7 = classify_prime(kExample, 3, 7);
  CHECK(c7.cls == PrimeClassKind::Q3);
  CHECK(c7.in_script_q);
  CHECK(c7.trace == -2);
  const auto c11 = classify_prime(kExample, 3, 11);
  CHECK(c11.cls == PrimeClassKind::Q1);
  CHECK_FALSE(c11.trace.has_value());
  CHECK_FALSE(c11.in_script_q);
  CHECK(classify_prime(kExample, 3, 13).cls == oracle_class(kExample, 3, 13));
  CHECK_THROWS_AS(classify_prime(kExample, 3, 3), Error);
  CHECK_THROWS_AS(classify_prime(kExample, 4, 7), Error);
  CHECK_THROWS_AS(classify_prime(kExample, 3, 9), Error);
}

TEST_CASE("classification matches brute force on random curves") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 30; ++i) {
    const auto w = oracle::random_curve(rng, 25);
    const EllipticCurve e(w);
    for (u64 p : {3, 5}) {
      for (u64 l : sieve_primes(60)) {
        if (l == p) continue;
        const auto c = classify_prime(e, p, l);
        CHECK(c.cls == oracle_class(w, p, l));
        CHECK(c.in_script_q == (c.cls == PrimeClassKind::Q3 && l % p == 1));
      }
    }
  }
}

TEST_CASE("P2 membership") {
  CHECK_FALSE(p2_membership(kExample, 3, 7, 1));
  CHECK_FALSE(p2_membership(kExample, 3, 7, 3));
  CHECK(oracle::count_points(kExample, 7, 3) % 3 != 0);
  CHECK_THROWS_AS(p2_membership(kExample, 3, 11, 1), Error);
  // ground level is the definition of Q2
  for (u64 l : sieve_primes(200)) {
    if (l == 3 || l == 11) continue;
    CHECK(p2_membership(kExample, 3, l, 1) == (classify_prime(kExample, 3, l).cls == PrimeClassKind::Q2));
  }
  std::mt19937_64 rng(43);
  for (int i = 0; i < 15; ++i) {
    const auto w = oracle::random_curve(rng, 10);
    for (u64 l : {2, 5, 7}) {
      if (reduce(discriminant(w), l) == 0) continue;
      for (unsigned f : {1u, 3u}) {
        if (upow(l, f) > 400) continue;
        CHECK(p2_membership(w, 3, l, f) == (oracle::count_points(w, l, f) % 3 == 0));
      }
    }
  }
}

TEST_CASE("splitting in the cyclotomic tower") {
  CHECK(cyclotomic_split_count(7, 3).m == 0);
  CHECK(cyclotomic_split_count(2, 3).m == 0);
  CHECK_THROWS_AS(cyclotomic_split_count(3, 3), Error);
  for (u64 p : {3, 5}) {
    bool seen_m1 = false;
    for (u64 l : sieve_primes(500)) {
      if (l == p) continue;
      const unsigned m = cyclotomic_split_count(l, p).m;
      for (unsigned n = 1; n <= 3; ++n) {
        CAPTURE(l);
        CHECK(oracle::layer_prime_count(l, p, n) == upow(p, std::min(n, m)));
      }
      if (!seen_m1 && l % (p * p) == 1 && m == 1) seen_m1 = true;
    }
    CHECK(seen_m1);
  }
}

TEST_CASE("bulk classification") {
  const EllipticCurve e(kExample);
  const auto classes = bulk_classify(e, 3, 20);
  std::vector<u64> primes;
  for (const auto& c : classes) {
    primes.push_back(c.prime);
    CHECK(c == classify_prime(e, 3, c.prime));
  }
  CHECK(primes == std::vector<u64>{2, 5, 7, 11, 13, 17, 19});
  CHECK(bulk_classify(e, 3, 1).empty());
  CHECK(bulk_classify(e, 3, 20) == classes);
  SweepOptions serial;
  serial.parallelism.workers = 1;
  CHECK(bulk_classify(e, 3, 3000, serial) == bulk_classify(e, 3, 3000));
  const auto q = script_q_primes(e, 3, 100);
  CHECK(q.front() == 7);
  for (u64 l : q) CHECK(classify_prime(e, 3, l).in_script_q);
}

TEST_CASE("classification CSV") {
  std::ostringstream os;
  write_classification_csv(os, bulk_classify(EllipticCurve(kExample), 3, 11));
  CHECK(os.str() == "l,class,a_l,in_script_Q\n2,Q3,2,false\n5,Q3,-1,false\n7,Q3,-2,true\n11,Q1,,false\n");
}

TEST_CASE("trace cache returns the same values") {
  const auto dir = std::filesystem::temp_directory_path() / "kida_classify_cache_test";
  std::filesystem::remove_all(dir);
  TraceCache cache(dir);
  const EllipticCurve e(kExample);
  SweepOptions opts;
  opts.cache = &cache;
  const auto sieve = sieve_primes(2000);
  const std::vector<u64> primes(sieve.begin(), sieve.end());
  const auto plain = traces(e, primes);
  CHECK(traces(e, primes, opts) == plain);
  CHECK_FALSE(cache.load(e.model()).empty());
  CHECK(traces(e, primes, opts) == plain);
  CHECK(bulk_classify(e, 3, 2000, opts) == bulk_classify(e, 3, 2000));
  std::filesystem::remove_all(dir);
}
