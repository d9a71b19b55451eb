#include "kida/fields.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "kida/classify.hpp"
#include "kida/json_util.hpp"

namespace kida {

namespace {

void require_odd_prime(u64 p) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::invalid_modulus, std::to_string(p) + " is not an odd prime");
}

// dlog_g(x) mod p in (Z/l)^*, found in the order-p subgroup.
u64 dlog_mod_p(u64 x, u64 l, u64 g, u64 p) {
  const u64 q = (l - 1) / p;
  const u64 y = powmod(x % l, q, l);
  const u64 h = powmod(g, q, l);
  u64 acc = 1;
  for (u64 j = 0; j < p; ++j) {
    if (acc == y) return j;
    acc = mulmod(acc, h, l);
  }
  throw Error(Errc::invalid_input, "discrete log outside the order-p subgroup");
}

u64 weight(u64 p, unsigned r) { return ipow(p - 1, r - 1); }

std::vector<u64> smallest_prime_factors(u64 n) {
  std::vector<u64> spf(n + 1, 0);
  for (u64 i = 2; i <= n; ++i) {
    if (spf[i] != 0) continue;
    for (u64 j = i; j <= n; j += i)
      if (spf[j] == 0) spf[j] = i;
  }
  return spf;
}

std::vector<u64> primes_one_mod(u64 p, u64 bound) {
  std::vector<u64> out;
  if (bound < 2) return out;
  for (u64 l : sieve_primes(bound))
    if (l % p == 1) out.push_back(l);
  return out;
}

// Visits every product of distinct primes (ascending) with prod <= x, k >= 1.
void squarefree_products(const std::vector<u64>& primes, u64 x, u64 base,
                         const std::function<void(u64, unsigned)>& visit) {
  std::function<void(std::size_t, u64, unsigned)> rec = [&](std::size_t start, u64 prod, unsigned k) {
    for (std::size_t i = start; i < primes.size(); ++i) {
      if (primes[i] > x / prod) break;
      const u64 next = prod * primes[i];
      visit(next, k + 1);
      rec(i + 1, next, k + 1);
    }
  };
  rec(0, base, 0);
}

}  // namespace

bool CyclicExtension::operator<(const CyclicExtension& o) const {
  const BigInt a = conductor(), b = o.conductor();
  if (a != b) return a < b;
  return std::tie(p, tame_ramified, wild_at_p, exponents, wild_exponent) <
         std::tie(o.p, o.tame_ramified, o.wild_at_p, o.exponents, o.wild_exponent);
}

BigInt CyclicExtension::conductor() const {
  BigInt f = wild_at_p ? BigInt(static_cast<unsigned long>(p * p)) : BigInt(1);
  for (u64 l : tame_ramified) f *= static_cast<unsigned long>(l);
  return f;
}

bool CyclicExtension::ramified_at(u64 l) const {
  if (l == p) return wild_at_p;
  return std::binary_search(tame_ramified.begin(), tame_ramified.end(), l);
}

u64 CyclicExtension::character_value(u64 x) const {
  if (ramified_at(x)) throw Error(Errc::invalid_input, "character evaluated at a ramified prime");
  u64 value = 0;
  for (std::size_t i = 0; i < tame_ramified.size(); ++i) {
    const u64 l = tame_ramified[i];
    if (x % l == 0) throw Error(Errc::non_unit, "argument not prime to the conductor");
    value = (value + exponents[i] * dlog_mod_p(x, l, primitive_root(l), p)) % p;
  }
  if (wild_at_p) {
    if (x % p == 0) throw Error(Errc::non_unit, "argument not prime to the conductor");
    const u64 pp = p * p;
    const u64 t = powmod(x % pp, p - 1, pp);
    value = (value + wild_exponent * ((t + pp - 1) % pp / p)) % p;
  }
  return value;
}

u64 primitive_root(u64 l) {
  if (l == 2) return 1;
  if (!is_prime(l)) throw Error(Errc::invalid_modulus, std::to_string(l) + " is not prime");
  const auto fac = factor(l - 1);
  for (u64 g = 2;; ++g) {
    bool ok = true;
    for (const auto& [q, e] : fac)
      if (powmod(g, (l - 1) / q, l) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
}

namespace {

std::vector<u64> validated_ramification(u64 p, std::vector<u64> ram_set) {
  require_odd_prime(p);
  std::sort(ram_set.begin(), ram_set.end());
  if (std::adjacent_find(ram_set.begin(), ram_set.end()) != ram_set.end())
    throw Error(Errc::invalid_input, "ramified primes must be distinct");
  for (u64 l : ram_set) {
    if (!is_prime(l)) throw Error(Errc::invalid_modulus, std::to_string(l) + " is not prime");
    if (l % p != 1)
      throw Error(Errc::class_field_obstruction,
                  "no degree-" + std::to_string(p) + " cyclic field is tamely ramified at " + std::to_string(l));
  }
  return ram_set;
}

}  // namespace

BigInt count_extensions(u64 p, const std::vector<u64>& ram_set, bool wild) {
  const auto primes = validated_ramification(p, ram_set);
  const unsigned r = static_cast<unsigned>(primes.size()) + (wild ? 1 : 0);
  if (r == 0) return 0;
  return pow(BigInt(static_cast<unsigned long>(p - 1)), r - 1);
}

std::vector<CyclicExtension> enumerate_extensions(u64 p, const std::vector<u64>& ram_set, bool wild) {
  const auto primes = validated_ramification(p, ram_set);
  const std::size_t r = primes.size() + (wild ? 1 : 0);
  std::vector<CyclicExtension> out;
  if (r == 0) return out;
  // Odometer over exponent vectors in [1, p-1]^r with the first entry 1.
  std::vector<u64> v(r, 1);
  for (;;) {
    CyclicExtension ext;
    ext.p = p;
    ext.tame_ramified = primes;
    ext.exponents.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(primes.size()));
    ext.wild_at_p = wild;
    ext.wild_exponent = wild ? v.back() : 0;
    out.push_back(std::move(ext));
    std::size_t i = r;
    while (i > 1 && v[i - 1] == p - 1) v[--i] = 1;
    if (i <= 1) break;
    ++v[i - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt discriminant(const CyclicExtension& ext) {
  return pow(ext.conductor(), static_cast<unsigned long>(ext.p - 1));
}

SplittingRecord splitting(const CyclicExtension& ext, u64 l) {
  if (l == ext.p) throw Error(Errc::excluded_prime, "splitting is defined for l != p");
  if (ext.ramified_at(l)) throw Error(Errc::wrong_operation, std::to_string(l) + " ramifies; use ramified_splitting");
  SplittingRecord rec;
  rec.prime = l;
  rec.f = ext.character_value(l) == 0 ? 1 : ext.p;
  rec.g = ext.p / rec.f;
  const unsigned m = cyclotomic_split_count(l, ext.p).m;
  rec.w_count = pow(BigInt(static_cast<unsigned long>(ext.p)), m + 1);
  return rec;
}

SplittingRecord ramified_splitting(const CyclicExtension& ext, u64 l) {
  if (l == ext.p || !ext.ramified_at(l))
    throw Error(Errc::wrong_operation, std::to_string(l) + " is not a tame ramified prime");
  SplittingRecord rec;
  rec.prime = l;
  rec.e = ext.p;
  rec.e_cyc = ext.p;
  const unsigned m = cyclotomic_split_count(l, ext.p).m;
  rec.w_count = pow(BigInt(static_cast<unsigned long>(ext.p)), m);
  return rec;
}

std::vector<u64> g_coefficients_dfs(const std::vector<u64>& q_primes, u64 p, u64 x) {
  std::vector<u64> a(x + 1, 0);
  if (x < 2) return a;
  std::vector<u64> qs(q_primes);
  std::sort(qs.begin(), qs.end());
  squarefree_products(qs, x, 1, [&](u64 n, unsigned k) { a[n] = weight(p, k); });
  return a;
}

std::vector<u64> g_coefficients_sieve(const std::vector<u64>& q_primes, u64 p, u64 x) {
  std::vector<u64> a(x + 1, 0);
  if (x < 2) return a;
  std::vector<char> in_q(x + 1, 0);
  for (u64 q : q_primes)
    if (q <= x) in_q[q] = 1;
  const auto spf = smallest_prime_factors(x);
  // b_n = (p-1)^{omega(n)} on admissible n, b_1 = 1; then a_n = b_n/(p-1).
  std::vector<u64> b(x + 1, 0);
  b[1] = 1;
  for (u64 n = 2; n <= x; ++n) {
    const u64 q = spf[n], m = n / q;
    if (in_q[q] && (m == 1 || spf[m] > q)) b[n] = b[m] * (p - 1);
  }
  for (u64 n = 2; n <= x; ++n) a[n] = b[n] / (p - 1);
  return a;
}

u64 g_of_X(const std::vector<u64>& q_primes, u64 p, u64 x) {
  if (x < 2) return 0;
  std::vector<u64> qs(q_primes);
  std::sort(qs.begin(), qs.end());
  u64 total = 0;
  squarefree_products(qs, x, 1, [&](u64, unsigned k) { total += weight(p, k); });
  return total;
}

std::vector<u64> conductor_counts_dfs(u64 p, u64 max_conductor) {
  require_odd_prime(p);
  std::vector<u64> c(max_conductor + 1, 0);
  const auto primes = primes_one_mod(p, max_conductor);
  squarefree_products(primes, max_conductor, 1, [&](u64 n, unsigned k) { c[n] = weight(p, k); });
  const u64 pp = p * p;
  if (pp <= max_conductor) {
    c[pp] = 1;
    squarefree_products(primes, max_conductor, pp, [&](u64 n, unsigned k) { c[n] = weight(p, k + 1); });
  }
  return c;
}

std::vector<u64> conductor_counts_sieve(u64 p, u64 max_conductor) {
  require_odd_prime(p);
  std::vector<u64> c(max_conductor + 1, 0);
  if (max_conductor < 2) return c;
  const auto spf = smallest_prime_factors(max_conductor);
  for (u64 n = 2; n <= max_conductor; ++n) {
    u64 m = n;
    unsigned r = 0;
    if (m % p == 0) {
      m /= p;
      if (m % p != 0) continue;
      m /= p;
      if (m % p == 0) continue;
      r = 1;
    }
    bool ok = true;
    u64 last = 0;
    while (m > 1) {
      const u64 q = spf[m];
      if (q == last || q % p != 1) {
        ok = false;
        break;
      }
      last = q;
      m /= q;
      ++r;
    }
    if (ok && r > 0) c[n] = weight(p, r);
  }
  return c;
}

u64 conductor_bound(u64 p, const BigInt& x) {
  require_odd_prime(p);
  if (x < 1) return 0;
  const BigInt f = iroot(x, static_cast<unsigned>(p - 1));
  if (!f.fits_ulong_p()) throw Error(Errc::budget, "conductor bound exceeds a machine word");
  return f.get_ui();
}

u64 M_of_X(u64 p, const BigInt& x) {
  const u64 bound = conductor_bound(p, x);
  u64 total = 0;
  for (u64 v : conductor_counts_dfs(p, bound)) total += v;
  return total;
}

std::vector<CyclicExtension> enumerate_fields(u64 p, const BigInt& max_disc) {
  const u64 bound = conductor_bound(p, max_disc);
  std::vector<CyclicExtension> out;
  const auto primes = primes_one_mod(p, bound);
  auto add = [&](const std::vector<u64>& set, bool wild) {
    auto exts = enumerate_extensions(p, set, wild);
    out.insert(out.end(), exts.begin(), exts.end());
  };
  std::vector<u64> chosen;
  std::function<void(std::size_t, u64, bool)> rec = [&](std::size_t start, u64 prod, bool wild) {
    for (std::size_t i = start; i < primes.size(); ++i) {
      if (primes[i] > bound / prod) break;
      chosen.push_back(primes[i]);
      add(chosen, wild);
      rec(i + 1, prod * primes[i], wild);
      chosen.pop_back();
    }
  };
  rec(0, 1, false);
  if (p * p <= bound) {
    add({}, true);
    rec(0, p * p, true);
  }
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json to_json(const CyclicExtension& ext) {
  std::vector<u64> exps = ext.exponents;
  if (ext.wild_at_p) exps.push_back(ext.wild_exponent);
  return {{"p", ext.p},
          {"tame_ramified", ext.tame_ramified},
          {"wild_at_p", ext.wild_at_p},
          {"exponents", exps},
          {"discriminant", big_json(discriminant(ext))}};
}

nlohmann::json to_json(const SplittingRecord& rec) {
  return {{"l", rec.prime}, {"e", rec.e},         {"f", rec.f},
          {"g", rec.g},     {"e_cyc", rec.e_cyc}, {"w_count", big_json(rec.w_count)}};
}

}  // namespace kida
