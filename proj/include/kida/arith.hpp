#pragma once

// Exact integer substrate shared by every other module: prime sieving,
// modular arithmetic on machine words, Legendre symbols, valuations and
// multiplicative orders. Arbitrary precision values are GMP integers.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "kida/error.hpp"

namespace kida {

using BigInt = mpz_class;
using Rational = mpq_class;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Immutable list of all primes up to a bound.
class PrimeSieve {
 public:
  PrimeSieve() = default;
  PrimeSieve(u64 bound, std::vector<u64> primes) : bound_(bound), primes_(std::move(primes)) {}

  u64 bound() const noexcept { return bound_; }
  std::span<const u64> primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  bool contains(u64 n) const;

  auto begin() const { return primes_.begin(); }
  auto end() const { return primes_.end(); }

 private:
  u64 bound_ = 0;
  std::vector<u64> primes_;
};

/// Segment width used once the bound exceeds the plain-sieve threshold.
inline constexpr u64 kSieveSegment = u64{1} << 18;
inline constexpr u64 kPlainSieveLimit = 10'000'000;

PrimeSieve sieve_primes(u64 bound);

/// Element of Z/mZ with m >= 2.
class Residue {
 public:
  Residue(i64 value, u64 modulus);
  Residue(const BigInt& value, u64 modulus);

  u64 value() const noexcept { return value_; }
  u64 modulus() const noexcept { return modulus_; }

  Residue operator+(const Residue& o) const;
  Residue operator-(const Residue& o) const;
  Residue operator*(const Residue& o) const;
  Residue pow(u64 e) const;
  Residue inverse() const;
  bool operator==(const Residue& o) const = default;

 private:
  Residue(u64 value, u64 modulus, int) : value_(value), modulus_(modulus) {}
  u64 value_;
  u64 modulus_;
};

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }
inline u64 addmod(u64 a, u64 b, u64 m) { return a >= m - b ? a - (m - b) : a + b; }
inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }
u64 powmod(u64 base, u64 exp, u64 m);
/// Inverse of a modulo m; throws non_unit when gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);
/// Reduce an arbitrary integer into [0, m).
u64 reduce(const BigInt& a, u64 m);
inline u64 reduce(i64 a, u64 m) {
  i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(u64 n);
bool is_prime(const BigInt& n);

/// Legendre symbol (a / l) for an odd prime l, by Euler's criterion.
int legendre(const BigInt& a, u64 l);
int legendre(i64 a, u64 l);

/// Square root modulo an odd prime (Tonelli-Shanks); a must be a square.
u64 sqrt_mod(u64 a, u64 l);

/// Largest e with p^e | n; n = 0 throws infinite_valuation.
unsigned padic_valuation(const BigInt& n, u64 p);
unsigned padic_valuation(i64 n, u64 p);

/// Least k >= 1 with a^k = 1 mod m.
u64 mult_order(const BigInt& a, u64 m);
u64 mult_order(i64 a, u64 m);

u64 euler_phi(u64 m);

/// Trial-division factorisation of a machine word, primes ascending.
std::vector<std::pair<u64, unsigned>> factor(u64 n);

/// Factorisation of |n| by trial division up to a bound, accepting a final
/// cofactor only when it is prime. Throws out_of_range otherwise.
std::vector<std::pair<BigInt, unsigned>> factor(const BigInt& n, u64 trial_bound = 10'000'000);

u64 isqrt(u64 n);
/// floor(n^(1/k)) for k >= 1.
BigInt iroot(const BigInt& n, unsigned k);
BigInt pow(const BigInt& base, unsigned long exp);
u64 ipow(u64 base, unsigned exp);

}  // namespace kida
