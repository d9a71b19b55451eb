#include "kida/euler_char.hpp"

#include <algorithm>

#include "kida/json_util.hpp"
#include "kida/point_count.hpp"

namespace kida {

namespace {

using Poly = std::vector<BigInt>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly mul(const Poly& f, const Poly& g) {
  if (f.empty() || g.empty()) return {};
  Poly h(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
  trim(h);
  return h;
}

Poly sub(const Poly& f, const Poly& g) {
  Poly h(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < f.size(); ++i) h[i] += f[i];
  for (std::size_t i = 0; i < g.size(); ++i) h[i] -= g[i];
  trim(h);
  return h;
}

Poly cube(const Poly& f) { return mul(f, mul(f, f)); }

BigInt eval(const Poly& f, const BigInt& x) {
  BigInt acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

u64 eval_mod(const Poly& f, u64 x, u64 q) {
  u64 acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = addmod(mulmod(acc, x, q), reduce(*it, q), q);
  return acc;
}

Poly derivative(const Poly& f) {
  Poly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
  return d;
}

BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

void require_odd_prime(u64 p) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::invalid_modulus, std::to_string(p) + " is not an odd prime");
}

}  // namespace

namespace detail {

std::vector<BigInt> division_polynomial(const BigInt& A, const BigInt& B, unsigned n) {
  std::vector<Poly> f(std::max(5u, n + 1));
  f[0] = {};
  f[1] = {1};
  f[2] = {1};
  f[3] = {-A * A, 12 * B, 6 * A, 0, 3};
  f[4] = {2 * (-8 * B * B - A * A * A), 2 * (-4 * A * B), 2 * (-5 * A * A), 2 * (20 * B), 2 * (5 * A), 0, 2};
  const Poly F = {4 * B, 4 * A, 0, 4};
  const Poly F2 = mul(F, F);
  for (unsigned k = 5; k <= n; ++k) {
    const unsigned m = k / 2;
    if (k % 2 == 1) {
      Poly t1 = mul(f[m + 2], cube(f[m]));
      Poly t2 = mul(f[m - 1], cube(f[m + 1]));
      if (m % 2 == 0)
        t1 = mul(F2, t1);
      else
        t2 = mul(F2, t2);
      f[k] = sub(t1, t2);
    } else {
      f[k] = mul(f[m], sub(mul(f[m + 2], mul(f[m - 1], f[m - 1])), mul(f[m - 2], mul(f[m + 1], f[m + 1]))));
    }
  }
  return f[n];
}

std::vector<BigInt> integer_roots(const std::vector<BigInt>& f_in) {
  Poly f = f_in;
  trim(f);
  if (f.empty()) throw Error(Errc::invalid_input, "zero polynomial");
  std::vector<BigInt> roots;
  // Strip the root 0 first so the remaining constant term is nonzero.
  std::size_t shift = 0;
  while (shift < f.size() && f[shift] == 0) ++shift;
  if (shift > 0) {
    roots.push_back(0);
    f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(shift));
  }
  if (f.size() <= 1) return roots;
  const Poly df = derivative(f);
  const BigInt lead = abs(f.back());
  BigInt bound = 0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) bound = std::max(bound, BigInt(abs(f[i])));
  bound = bound / lead + 2;

  for (u64 q = 5; q < 5000; q = q + 2) {
    if (!is_prime(q) || reduce(f.back(), q) == 0) continue;
    std::vector<u64> local;
    bool simple = true;
    for (u64 r = 0; r < q && simple; ++r) {
      if (eval_mod(f, r, q) != 0) continue;
      if (eval_mod(df, r, q) == 0) simple = false;
      local.push_back(r);
    }
    if (!simple) continue;
    BigInt modulus = q;
    unsigned k = 1;
    while (modulus <= 2 * bound) {
      modulus *= static_cast<unsigned long>(q);
      ++k;
    }
    for (u64 r0 : local) {
      // Linear Hensel lifting with the inverse of f'(r0) mod q.
      const u64 u = invmod(eval_mod(df, r0, q), q);
      BigInt r = r0;
      BigInt qk = q;
      for (unsigned j = 1; j < k; ++j) {
        qk *= static_cast<unsigned long>(q);
        r = mod_floor(r - eval(f, r) * static_cast<unsigned long>(u), qk);
      }
      if (r > modulus / 2) r -= modulus;
      if (eval(f, r) == 0) roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }
  throw Error(Errc::indeterminate, "no prime found with only simple roots");
}

}  // namespace detail

std::string_view to_string(Vanishing v) {
  switch (v) {
    case Vanishing::zero: return "zero";
    case Vanishing::nonzero: return "nonzero";
    case Vanishing::unresolved: return "unresolved";
  }
  return "?";
}

std::string_view to_string(PiImageStatus s) {
  return s == PiImageStatus::prime_to_p_implied ? "prime_to_p_implied" : "unknown";
}

OrdinaryTwist good_ordinary_twist(const EllipticCurve& e, u64 p) {
  require_odd_prime(p);
  if (e.local_data(p).type != ReductionType::additive)
    throw Error(Errc::invalid_input, "curve is not additive at " + std::to_string(p));
  if (!potentially_good(e.model(), p))
    throw Error(Errc::invalid_input, "curve is potentially multiplicative at " + std::to_string(p));
  OrdinaryTwist tw;
  tw.d = (p % 4 == 1) ? BigInt(static_cast<unsigned long>(p)) : BigInt(-static_cast<long>(p));
  const EllipticCurve twisted(quadratic_twist(e.model(), tw.d));
  tw.model = twisted.model();
  if (!twisted.has_good_reduction(p))
    throw Error(Errc::assumption_not_satisfied,
                "twist by " + tw.d.get_str() + " is not good at " + std::to_string(p));
  tw.frak_F_count = count_points_naive(tw.model, p);
  tw.a_p = static_cast<i64>(p + 1) - static_cast<i64>(tw.frak_F_count);
  if (reduce(tw.a_p, p) == 0)
    throw Error(Errc::supersingular, "twist is supersingular at " + std::to_string(p));
  return tw;
}

TorsionCheck p_torsion_check(const EllipticCurve& e, u64 p) {
  require_odd_prime(p);
  TorsionCheck tc;
  unsigned tried = 0;
  for (u64 l = 3; tried < 30 && l < 100000; l += 2) {
    if (l == p || !is_prime(l) || !e.has_good_reduction(l)) continue;
    ++tried;
    if (count_points(e.model(), l) % p != 0) {
      tc.method = "reduction";
      tc.witnesses.push_back(l);
      return tc;
    }
  }
  tc.method = "division-polynomial";
  const auto& inv = e.invariants();
  const BigInt A = -27 * inv.c4, B = -54 * inv.c6;
  const auto f = detail::division_polynomial(A, B, static_cast<unsigned>(p));
  for (const BigInt& x : detail::integer_roots(f)) {
    const BigInt rhs = x * x * x + A * x + B;
    if (rhs > 0 && mpz_perfect_square_p(rhs.get_mpz_t())) {
      tc.torsion_free = false;
      tc.point_x = x;
      return tc;
    }
  }
  return tc;
}

EulerFactors euler_char_factors(const EllipticCurve& e, u64 p, const std::optional<BigInt>& sha,
                                const std::optional<bool>& analytic_rank_zero) {
  require_odd_prime(p);
  if (sha) {
    BigInt s = *sha;
    if (s <= 0) throw Error(Errc::invalid_input, "sha order must be positive");
    while (mpz_divisible_ui_p(s.get_mpz_t(), p)) s /= static_cast<unsigned long>(p);
    if (s != 1) throw Error(Errc::invalid_input, "sha order " + sha->get_str() + " is not a power of " + std::to_string(p));
  }
  EulerFactors ef;
  ef.p = p;
  ef.sha_p_order = sha;
  ef.twist = good_ordinary_twist(e, p);
  ef.ordinary = true;
  ef.pi_image_status =
      ef.twist.frak_F_count % p != 0 ? PiImageStatus::prime_to_p_implied : PiImageStatus::unknown;
  if (analytic_rank_zero && !*analytic_rank_zero)
    throw Error(Errc::assumption_not_satisfied, "analytic rank is not zero");
  ef.analytic_rank_zero = analytic_rank_zero;
  ef.torsion = p_torsion_check(e, p);
  if (!ef.torsion.torsion_free)
    throw Error(Errc::assumption_not_satisfied, "E(Q)[" + std::to_string(p) + "] is nonzero");
  for (u64 l : e.bad_primes()) {
    if (l == p) continue;
    const unsigned c = e.local_data(l).tamagawa;
    ef.tamagawa.emplace_back(l, c);
    ef.tamagawa_product *= c;
  }
  return ef;
}

Vanishing mu_lambda_vanish(const EulerFactors& ef) {
  if (!ef.sha_p_order || !ef.analytic_rank_zero) return Vanishing::unresolved;
  const auto v = euler_char_valuation(ef);
  if (!v) return Vanishing::nonzero;  // p | #F(F_p) already, whatever Pi is
  return *v == 0 ? Vanishing::zero : Vanishing::nonzero;
}

std::optional<unsigned> euler_char_valuation(const EulerFactors& ef) {
  if (!ef.sha_p_order || ef.pi_image_status == PiImageStatus::unknown) return std::nullopt;
  return padic_valuation(*ef.sha_p_order, ef.p) +
         padic_valuation(BigInt(static_cast<unsigned long>(ef.twist.frak_F_count)), ef.p) +
         padic_valuation(ef.tamagawa_product, ef.p);
}

CharSeries induced_series(const EulerFactors& ef) {
  const auto v = euler_char_valuation(ef);
  if (!v) throw Error(Errc::indeterminate, "Euler characteristic valuation is not determined");
  return CharSeries(ef.p, {pow(BigInt(static_cast<unsigned long>(ef.p)), *v), 1});
}

nlohmann::json to_json(const EulerFactors& ef) {
  nlohmann::json tam = nlohmann::json::array();
  for (const auto& [l, c] : ef.tamagawa) tam.push_back({{"l", l}, {"c", c}});
  nlohmann::json j = {
      {"p", ef.p},
      {"sha_p_order", ef.sha_p_order ? big_json(*ef.sha_p_order) : nlohmann::json("unknown")},
      {"twist",
       {{"d", big_json(ef.twist.d)}, {"model", ef.twist.model.to_string()}, {"a_p", ef.twist.a_p}}},
      {"frak_F_count", ef.twist.frak_F_count},
      {"pi_image_status", to_string(ef.pi_image_status)},
      {"tamagawa", tam},
      {"tamagawa_product", big_json(ef.tamagawa_product)},
      {"ordinary", ef.ordinary},
      {"analytic_rank_zero", ef.analytic_rank_zero ? nlohmann::json(*ef.analytic_rank_zero) : nlohmann::json()},
      {"torsion_free_at_p", ef.torsion.torsion_free},
      {"torsion_method", ef.torsion.method},
  };
  return j;
}

}  // namespace kida
