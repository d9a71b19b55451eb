#include "kida/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace kida {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::empty_range: return "empty-range";
    case Errc::invalid_modulus: return "invalid-modulus";
    case Errc::infinite_valuation: return "infinite-valuation";
    case Errc::non_unit: return "non-unit";
    case Errc::singular_curve: return "singular-curve";
    case Errc::not_minimal: return "not-minimal";
    case Errc::bad_reduction: return "bad-reduction";
    case Errc::invalid_twist: return "invalid-twist";
    case Errc::invalid_input: return "invalid-input";
    case Errc::indeterminate: return "indeterminate";
    case Errc::euler_char_undefined: return "euler-characteristic-undefined";
    case Errc::excluded_prime: return "excluded-prime";
    case Errc::class_field_obstruction: return "class-field-obstruction";
    case Errc::wrong_operation: return "wrong-operation";
    case Errc::hypothesis_blocked: return "hypothesis-blocked";
    case Errc::assumption_not_satisfied: return "assumption-not-satisfied";
    case Errc::supersingular: return "supersingular";
    case Errc::budget: return "budget";
    case Errc::fit_unavailable: return "fit-unavailable";
    case Errc::parse: return "parse";
    case Errc::schema: return "schema";
    case Errc::io: return "io";
    case Errc::out_of_range: return "out-of-range";
  }
  return "unknown";
}

bool PrimeSieve::contains(u64 n) const {
  return std::binary_search(primes_.begin(), primes_.end(), n);
}

namespace {

std::vector<u64> plain_sieve(u64 bound) {
  std::vector<bool> composite(bound + 1, false);
  std::vector<u64> out;
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

// Odd-only segmented sieve; memory is O(sqrt(bound) + segment).
std::vector<u64> segmented_sieve(u64 bound) {
  const u64 root = isqrt(bound);
  std::vector<u64> small = plain_sieve(root);
  std::vector<u64> out;
  out.reserve(static_cast<std::size_t>(1.1 * bound / std::log(double(bound))));
  out.push_back(2);

  std::vector<u64> next;  // next odd multiple to strike, per small odd prime
  for (std::size_t i = 1; i < small.size(); ++i) next.push_back(small[i] * small[i]);

  std::vector<char> seg(kSieveSegment);
  for (u64 low = 3; low <= bound; low += 2 * kSieveSegment) {
    // seg[k] represents low + 2k
    const u64 high = std::min(bound, low + 2 * kSieveSegment - 1);
    std::fill(seg.begin(), seg.end(), 1);
    for (std::size_t i = 1; i < small.size(); ++i) {
      const u64 q = small[i];
      u64 j = next[i - 1];
      if (j > high) continue;
      for (; j <= high; j += 2 * q) seg[(j - low) / 2] = 0;
      next[i - 1] = j;
    }
    for (u64 n = low; n <= high; n += 2)
      if (seg[(n - low) / 2]) out.push_back(n);
  }
  return out;
}

}  // namespace

PrimeSieve sieve_primes(u64 bound) {
  if (bound < 2) throw Error(Errc::empty_range, "sieve bound must be at least 2");
  return {bound, bound > kPlainSieveLimit ? segmented_sieve(bound) : plain_sieve(bound)};
}

Residue::Residue(i64 value, u64 modulus) : value_(0), modulus_(modulus) {
  if (modulus < 2) throw Error(Errc::invalid_modulus, "modulus must be >= 2");
  value_ = reduce(value, modulus);
}

Residue::Residue(const BigInt& value, u64 modulus) : value_(0), modulus_(modulus) {
  if (modulus < 2) throw Error(Errc::invalid_modulus, "modulus must be >= 2");
  value_ = reduce(value, modulus);
}

Residue Residue::operator+(const Residue& o) const {
  return {addmod(value_, o.value_, modulus_), modulus_, 0};
}
Residue Residue::operator-(const Residue& o) const {
  return {submod(value_, o.value_, modulus_), modulus_, 0};
}
Residue Residue::operator*(const Residue& o) const {
  return {mulmod(value_, o.value_, modulus_), modulus_, 0};
}
Residue Residue::pow(u64 e) const { return {powmod(value_, e, modulus_), modulus_, 0}; }
Residue Residue::inverse() const { return {invmod(value_, modulus_), modulus_, 0}; }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 invmod(u64 a, u64 m) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    const i64 q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw Error(Errc::non_unit, std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

u64 reduce(const BigInt& a, u64 m) {
  return mpz_fdiv_ui(a.get_mpz_t(), m);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n.fits_ulong_p()) return is_prime(static_cast<u64>(n.get_ui()));
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {
void require_odd_prime(u64 l) {
  if (l % 2 == 0 || !is_prime(l))
    throw Error(Errc::invalid_modulus, std::to_string(l) + " is not an odd prime");
}
}  // namespace

int legendre(const BigInt& a, u64 l) {
  require_odd_prime(l);
  const u64 r = reduce(a, l);
  if (r == 0) return 0;
  return powmod(r, (l - 1) / 2, l) == 1 ? 1 : -1;
}

int legendre(i64 a, u64 l) { return legendre(BigInt(static_cast<long>(a)), l); }

u64 sqrt_mod(u64 a, u64 l) {
  a %= l;
  if (a == 0) return 0;
  if (powmod(a, (l - 1) / 2, l) != 1) throw Error(Errc::invalid_input, "not a square");
  if (l % 4 == 3) return powmod(a, (l + 1) / 4, l);
  u64 q = l - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (powmod(z, (l - 1) / 2, l) != l - 1) ++z;
  u64 m = s, c = powmod(z, q, l), t = powmod(a, q, l), r = powmod(a, (q + 1) / 2, l);
  while (t != 1) {
    u64 i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, l);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, l);
    m = i;
    c = mulmod(b, b, l);
    t = mulmod(t, c, l);
    r = mulmod(r, b, l);
  }
  return r;
}

unsigned padic_valuation(const BigInt& n, u64 p) {
  if (n == 0) throw Error(Errc::infinite_valuation, "valuation of zero");
  if (p < 2) throw Error(Errc::invalid_modulus, "valuation base must be >= 2");
  const BigInt bp(static_cast<unsigned long>(p));
  BigInt m = n;
  unsigned e = 0;
  while (mpz_divisible_p(m.get_mpz_t(), bp.get_mpz_t())) {
    mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), bp.get_mpz_t());
    ++e;
  }
  return e;
}

unsigned padic_valuation(i64 n, u64 p) { return padic_valuation(BigInt(static_cast<long>(n)), p); }

std::vector<std::pair<u64, unsigned>> factor(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    if (n % q) continue;
    unsigned e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

u64 euler_phi(u64 m) {
  u64 phi = m;
  for (auto [q, e] : factor(m)) phi = phi / q * (q - 1);
  return phi;
}

u64 mult_order(const BigInt& a, u64 m) {
  if (m == 0) throw Error(Errc::invalid_modulus, "modulus must be positive");
  if (m == 1) return 1;
  const u64 r = reduce(a, m);
  if (std::gcd(r, m) != 1)
    throw Error(Errc::non_unit, a.get_str() + " is not a unit mod " + std::to_string(m));
  u64 order = euler_phi(m);
  for (auto [q, e] : factor(order)) {
    for (unsigned i = 0; i < e && order % q == 0 && powmod(r, order / q, m) == 1; ++i) order /= q;
  }
  return order;
}

u64 mult_order(i64 a, u64 m) { return mult_order(BigInt(static_cast<long>(a)), m); }

std::vector<std::pair<BigInt, unsigned>> factor(const BigInt& n, u64 trial_bound) {
  if (n == 0) throw Error(Errc::invalid_input, "cannot factor zero");
  BigInt m = abs(n);
  std::vector<std::pair<BigInt, unsigned>> out;
  for (u64 q = 2; q <= trial_bound; q += (q == 2 ? 1 : 2)) {
    const BigInt bq(static_cast<unsigned long>(q));
    if (bq * bq > m) break;
    if (!mpz_divisible_ui_p(m.get_mpz_t(), q)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), q)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), q);
      ++e;
    }
    out.emplace_back(bq, e);
  }
  if (m > 1) {
    if (!is_prime(m)) throw Error(Errc::out_of_range, "cofactor " + m.get_str() + " beyond trial division");
    out.emplace_back(m, 1);
  }
  return out;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && u128(r) * r > n) --r;
  while (u128(r + 1) * (r + 1) <= n) ++r;
  return r;
}

BigInt iroot(const BigInt& n, unsigned k) {
  if (n < 0) throw Error(Errc::invalid_input, "root of a negative number");
  BigInt r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

BigInt pow(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

u64 ipow(u64 base, unsigned exp) {
  u64 r = 1;
  while (exp--) r *= base;
  return r;
}

}  // namespace kida
