#include <doctest.h>

#include <random>
#include <set>

#include "kida/kida.hpp"
#include "oracles.hpp"

using namespace kida;

namespace {

const WeierstrassModel kExample(0, 0, 1, -3, -5);

BaseInputs known_base() {
  BaseInputs b;
  b.mu_lambda_zero = true;
  b.mu = 0;
  return b;
}

// Least x in [1, n) with x = a_i mod m_i for every pair.
u64 crt_search(u64 n, const std::vector<std::pair<u64, u64>>& conditions) {
  for (u64 x = 1; x < n; ++x) {
    bool ok = true;
    for (auto [a, m] : conditions) ok = ok && x % m == a % m;
    if (ok) return x;
  }
  throw std::runtime_error("no CRT solution");
}

// Primes of L Q_n above a tame l, from the decomposition group inside
// (Z/p)^k x Z/p^n: inertia comes from a generator of (Z/l)^*, Frobenius
// from l itself on the other components and on the cyclotomic part.
u64 primes_above_in_layer(const std::vector<CyclicExtension>& exts, u64 l, unsigned n) {
  const u64 p = exts[0].p;
  u64 pn = 1;
  for (unsigned i = 0; i < n; ++i) pn *= p;
  u64 gen = 2;
  while (mult_order(gen, l) != l - 1) ++gen;
  std::vector<u64> inertia, frob;
  for (const auto& ext : exts) {
    const u64 cond = ext.conductor().get_ui();
    std::vector<std::pair<u64, u64>> at_i, at_f;
    for (u64 q : ext.tame_ramified) {
      at_i.push_back({q == l ? gen : 1, q});
      at_f.push_back({q == l ? 1 : l, q});
    }
    if (ext.wild_at_p) {
      at_i.push_back({1, p * p});
      at_f.push_back({l, p * p});
    }
    inertia.push_back(ext.character_value(crt_search(cond, at_i)));
    frob.push_back(ext.character_value(crt_search(cond, at_f)));
  }
  // cyclotomic component: l^{p-1} in (1 + pZ)/(1 + p^{n+1}Z), a cyclic group of order p^n
  const u64 mod = pn * p;
  u64 c = 1;
  for (u64 i = 0; i < p - 1; ++i) c = c * (l % mod) % mod;
  using Elt = std::pair<std::vector<u64>, u64>;
  std::set<Elt> group{{std::vector<u64>(exts.size(), 0), 1}};
  std::vector<Elt> gens{{inertia, 1}, {frob, c}};
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& g : std::vector<Elt>(group.begin(), group.end()))
      for (const auto& h : gens) {
        Elt s{g.first, g.second * h.second % mod};
        for (std::size_t i = 0; i < s.first.size(); ++i) s.first[i] = (s.first[i] + h.first[i]) % p;
        grew |= group.insert(s).second;
      }
  }
  u64 order = pn;
  for (std::size_t i = 0; i < exts.size(); ++i) order *= p;
  return order / group.size();
}

EllipticCurve find_curve(std::mt19937_64& rng, u64 l, ReductionType want) {
  for (;;) {
    const EllipticCurve e(oracle::random_curve(rng, 60));
    if (!e.has_good_reduction(l) && e.local_data(l).type == want && e.has_good_reduction(3)) return e;
  }
}

}  // namespace

TEST_CASE("hypothesis report for the example curve") {
  const EllipticCurve e(kExample);
  const auto L = enumerate_extensions(3, {7})[0];
  const auto h = check_hypotheses(e, 3, L, known_base());
  CHECK(h.additive_at_p);
  CHECK(h.potentially_good_at_p);
  REQUIRE(h.good_twist.has_value());
  CHECK(h.good_twist->d == -3);
  CHECK(discriminant(h.good_twist->model) == -11);
  CHECK(h.prime_to_p_defect == Tristate::yes);
  CHECK(h.additive_stability == AdditiveStability::satisfied_by_unramified);
  CHECK(h.additive_primes.empty());
  CHECK(h.base_mu_lambda_zero == true);
  CHECK(h.base_source == "external");
  CHECK_FALSE(h.blocking());

  BaseInputs via_euler;
  via_euler.sha_p_order = BigInt(1);
  via_euler.analytic_rank_zero = true;
  const auto h2 = check_hypotheses(e, 3, L, via_euler);
  CHECK(h2.base_mu_lambda_zero == true);
  CHECK(h2.base_source == "euler-characteristic");
  CHECK_FALSE(h2.blocking());

  const auto h3 = check_hypotheses(e, 3, L);
  CHECK_FALSE(h3.base_mu_lambda_zero.has_value());
  CHECK(h3.blocking());
}

TEST_CASE("transfer over the cubic field of conductor 7") {
  const EllipticCurve e(kExample);
  const auto L = enumerate_extensions(3, {7})[0];
  const auto h = check_hypotheses(e, 3, L, known_base());
  const auto kr = lambda_transfer(0, e, L, h);
  CHECK(kr.lambda_L == 0);
  CHECK(kr.degree == 3);
  REQUIRE(kr.witnesses.size() == 1);
  CHECK(kr.witnesses[0].prime == 7);
  CHECK(kr.witnesses[0].cls == PrimeClassKind::Q3);
  CHECK(kr.witnesses[0].w_count == 1);
  CHECK_FALSE(kr.witnesses[0].in_p2);
  CHECK_FALSE(kr.acknowledged_override);
  const auto rb = rank_bound(kr);
  CHECK(rb.rank_is_zero);
  CHECK(rb.bound == 0);
  CHECK(stable_extension_test(e, 3, L));
}

TEST_CASE("lambda vanishes over fields ramified only at script-Q primes") {
  const EllipticCurve e(kExample);
  const auto q = script_q_primes(e, 3, 200);
  REQUIRE(q.size() >= 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) {
      std::vector<u64> set{q[i]};
      if (j != i) set.push_back(q[j]);
      for (const auto& L : enumerate_extensions(3, set)) {
        const auto h = check_hypotheses(e, 3, L, known_base());
        CHECK(stable_extension_test(e, 3, L));
        CHECK(lambda_transfer(0, e, L, h).lambda_L == 0);
      }
    }
}

TEST_CASE("split multiplicative ramified prime contributes (e - 1) per prime above it") {
  std::mt19937_64 rng(61);
  const auto e = find_curve(rng, 7, ReductionType::split_multiplicative);
  CHECK(cyclotomic_split_count(7, 3).m == 0);
  const auto L = enumerate_extensions(3, {7})[0];
  const auto h = check_hypotheses(e, 3, L, known_base());
  const auto kr = lambda_transfer(2, e, L, h, true);
  CHECK(kr.lambda_L == 8);
  CHECK(kr.p1_term == 2);
  CHECK(kr.witnesses[0].in_p1);
  CHECK_FALSE(stable_extension_test(e, 3, L));
  CHECK_FALSE(rank_bound(kr).rank_is_zero);
  CHECK(rank_bound(kr).bound == 8);

  const auto ns = find_curve(rng, 7, ReductionType::nonsplit_multiplicative);
  CHECK(lambda_transfer(2, ns, L, check_hypotheses(ns, 3, L, known_base()), true).lambda_L == 6);
}

TEST_CASE("local terms against the definitions") {
  std::mt19937_64 rng(67);
  const std::vector<u64> ones{7, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97};
  for (int i = 0; i < 40; ++i) {
    const EllipticCurve e(oracle::random_curve(rng, 40));
    const u64 l = ones[rng() % ones.size()];
    const auto L = enumerate_extensions(3, {l})[0];
    const auto kr = lambda_transfer(1, e, L, check_hypotheses(e, 3, L, known_base()), true);
    const unsigned m = cyclotomic_split_count(l, 3).m;
    BigInt expect = 3;
    BigInt per = 2;
    for (unsigned j = 0; j < m; ++j) per *= 3;
    if (e.has_good_reduction(l)) {
      if (oracle::count_points(e.model(), l, 1) % 3 == 0) expect += 2 * per;
    } else if (e.local_data(l).type == ReductionType::split_multiplicative) {
      expect += per;
    }
    CAPTURE(e.model().to_string());
    CAPTURE(l);
    CHECK(kr.lambda_L == expect);
  }
}

TEST_CASE("number of primes above a ramified prime in the compositum tower") {
  const EllipticCurve e(kExample);
  const std::vector<std::vector<CyclicExtension>> cases = {
      {enumerate_extensions(3, {7})[0]},
      {enumerate_extensions(3, {19})[0]},
      {enumerate_extensions(3, {7})[0], enumerate_extensions(3, {13})[0]},
      {enumerate_extensions(3, {7, 13})[1], enumerate_extensions(3, {19})[0]},
      {enumerate_extensions(3, {7, 13})[0], enumerate_extensions(3, {13, 19})[0], enumerate_extensions(3, {19})[0]},
      {enumerate_extensions(3, {19})[0], enumerate_extensions(3, {}, true)[0]},
      {enumerate_extensions(5, {11})[0]},
      {enumerate_extensions(5, {11})[0], enumerate_extensions(5, {31, 41})[3]},
  };
  for (const auto& exts : cases) {
    const u64 p = exts[0].p;
    const auto kr = lambda_transfer(0, e, exts, check_hypotheses(e, p, exts, known_base()), true);
    BigInt degree = 1;
    for (std::size_t i = 0; i < exts.size(); ++i) degree *= static_cast<unsigned long>(p);
    CHECK(kr.degree == degree);
    for (const auto& w : kr.witnesses) {
      const unsigned n = cyclotomic_split_count(w.prime, p).m + 2;  // past the point of stabilisation
      CAPTURE(w.prime);
      CHECK(w.w_count == primes_above_in_layer(exts, w.prime, n));
      CHECK(w.w_count == primes_above_in_layer(exts, w.prime, n + 1));
    }
  }
  const auto L = enumerate_extensions(3, {7})[0];
  CHECK_THROWS_AS(lambda_transfer(0, e, {L, L}, check_hypotheses(e, 3, {L, L}, known_base()), true), Error);
}

TEST_CASE("stability of local conditions up the tower") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 40; ++i) {
    const EllipticCurve e(oracle::random_curve(rng, 30));
    for (u64 p : {3, 5}) {
      for (u64 l : sieve_primes(200)) {
        if (l == p) continue;
        if (e.has_good_reduction(l)) {
          const bool ground = p2_membership(e, p, l, 1);
          CHECK(p2_membership(e, p, l, static_cast<unsigned>(p)) == ground);
          CHECK(p2_membership(e, p, l, static_cast<unsigned>(p * p)) == ground);
        } else if (e.local_data(l).type != ReductionType::additive) {
          const bool split = e.local_data(l).type == ReductionType::split_multiplicative;
          CHECK(split_over_extension(e, l, static_cast<unsigned>(p)) == split);
          CHECK(split_over_extension(e, l, static_cast<unsigned>(p * p)) == split);
          CHECK(split_over_extension(e, l, 2));
        }
      }
    }
  }
}

TEST_CASE("stable extension test") {
  const EllipticCurve e(kExample);
  // 11 is the multiplicative prime; it is 1 mod 5 but not 1 mod 3
  CHECK_FALSE(stable_extension_test(e, 5, enumerate_extensions(5, {11})[0]));
  CHECK_FALSE(stable_extension_test(e, 3, enumerate_extensions(3, {}, true)[0]));
  CHECK(enumerate_extensions(3, {}).empty());
  CHECK_THROWS_AS(stable_extension_test(e, 5, enumerate_extensions(3, {7})[0]), Error);
  for (u64 l : sieve_primes(300)) {
    if (l % 3 != 1) continue;
    CHECK(stable_extension_test(e, 3, enumerate_extensions(3, {l})[0]) ==
          (classify_prime(e, 3, l).cls == PrimeClassKind::Q3));
  }
}

TEST_CASE("curves that are good or potentially multiplicative at p") {
  const EllipticCurve good(WeierstrassModel(0, -1, 1, 0, 0));
  const auto L = enumerate_extensions(3, {7})[0];
  const auto h = check_hypotheses(good, 3, L, known_base());
  CHECK_FALSE(h.additive_at_p);
  CHECK(h.reduction_at_p == ReductionType::good);
  CHECK(h.prime_to_p_defect == Tristate::yes);
  CHECK_FALSE(h.notes.empty());

  std::mt19937_64 rng(73);
  for (;;) {
    const EllipticCurve e(oracle::random_curve(rng, 40));
    if (e.has_good_reduction(3) || e.local_data(3).type != ReductionType::additive) continue;
    if (potentially_good(e.model(), 3)) continue;
    const auto hm = check_hypotheses(e, 3, L, known_base());
    CHECK_FALSE(hm.potentially_good_at_p);
    CHECK_FALSE(hm.good_twist.has_value());
    CHECK(hm.prime_to_p_defect == Tristate::no);
    CHECK(hm.blocking());
    break;
  }
}

TEST_CASE("blocked transfer") {
  const EllipticCurve e(kExample);
  const auto L = enumerate_extensions(3, {7})[0];
  const auto h = check_hypotheses(e, 3, L);
  try {
    lambda_transfer(0, e, L, h);
    FAIL("expected a blocked transfer");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::hypothesis_blocked);
    CHECK(err.is_hypothesis());
  }
  const auto kr = lambda_transfer(0, e, L, h, true);
  CHECK(kr.acknowledged_override);
  CHECK(kr.lambda_L == 0);
  CHECK_THROWS_AS(lambda_transfer(-1, e, L, check_hypotheses(e, 3, L, known_base())), Error);
}

TEST_CASE("json output") {
  const EllipticCurve e(kExample);
  const auto L = enumerate_extensions(3, {7})[0];
  const auto h = check_hypotheses(e, 3, L, known_base());
  const auto j = to_json(h);
  CHECK(j.at("additive_stability") == "satisfied_by_unramified");
  const auto k = to_json(lambda_transfer(0, e, L, h));
  CHECK(k.at("lambda_L") == 0);
}
