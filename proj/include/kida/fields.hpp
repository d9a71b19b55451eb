#pragma once

// Degree-p cyclic extensions of Q, represented by their Dirichlet
// characters of order p, and the counting functions g(X) and M(X).

#include <optional>
#include <vector>

#include <json.hpp>

#include "kida/arith.hpp"

namespace kida {

/// A cyclic degree-p field L/Q given by a character chi of order p on
/// (Z/f)^*. The tame part of chi at l_i is e_i * dlog_{g_i}(x) mod p, with
/// g_i the least primitive root mod l_i. The wild part at p is
/// w * (x^{p-1} - 1)/p mod p on (Z/p^2)^*. Characters are normalised so the
/// first nonzero exponent (tame first, then wild) equals 1.
struct CyclicExtension {
  u64 p = 3;
  std::vector<u64> tame_ramified;  // ascending, each = 1 mod p
  std::vector<u64> exponents;      // one per tame prime, in [1, p-1]
  bool wild_at_p = false;
  u64 wild_exponent = 0;  // in [1, p-1] when wild_at_p, else 0

  bool operator==(const CyclicExtension&) const = default;
  bool operator<(const CyclicExtension& o) const;

  /// Conductor (p^2 if wild) * prod l_i.
  BigInt conductor() const;
  bool ramified_at(u64 l) const;
  /// chi(x) in Z/p for x prime to the conductor.
  u64 character_value(u64 x) const;
};

/// Number of degree-p cyclic fields ramified exactly at ram_set (and at p
/// when wild): (p-1)^{r-1} with r the number of ramified places. Throws
/// class_field_obstruction when a prime is not 1 mod p.
BigInt count_extensions(u64 p, const std::vector<u64>& ram_set, bool wild = false);

/// All such fields, sorted by exponent vector. Input order is irrelevant.
std::vector<CyclicExtension> enumerate_extensions(u64 p, const std::vector<u64>& ram_set, bool wild = false);

/// Delta_L = conductor^{p-1}; positive since L is totally real.
BigInt discriminant(const CyclicExtension& ext);

struct SplittingRecord {
  u64 prime = 0;
  u64 e = 1;
  u64 f = 1;
  u64 g = 1;
  u64 e_cyc = 1;   // ramification index of each w of L_cyc over l
  BigInt w_count;  // number of primes of L_cyc above l
};

/// Decomposition of an unramified prime l != p. The Frobenius at l lives in
/// Gal(L_cyc/Q) = Z/p x Z_p with Z_p-part of exact valuation m, so its
/// closure has index p^{m+1} whatever chi(l) is.
SplittingRecord splitting(const CyclicExtension& ext, u64 l);

/// Decomposition of a tame ramified prime: totally ramified in L, one w over
/// each of the p^m primes of Q_cyc. Throws wrong_operation when l is not a
/// tame ramified prime of ext.
SplittingRecord ramified_splitting(const CyclicExtension& ext, u64 l);

/// Least primitive root modulo a prime.
u64 primitive_root(u64 l);

// Coefficient tables indexed by n in [0, x]. The DFS and sieve variants are
// independent algorithms for the same numbers.

/// a_n = (p-1)^{k-1} when n > 1 is a product of k distinct primes from
/// q_primes, else 0.
std::vector<u64> g_coefficients_dfs(const std::vector<u64>& q_primes, u64 p, u64 x);
std::vector<u64> g_coefficients_sieve(const std::vector<u64>& q_primes, u64 p, u64 x);

/// sum_{n <= x} a_n, by DFS without materialising a table.
u64 g_of_X(const std::vector<u64>& q_primes, u64 p, u64 x);

/// Number of degree-p cyclic fields by conductor: entry f is (p-1)^{r-1}
/// when f = (p^2 or 1) * (squarefree product of primes = 1 mod p) > 1.
std::vector<u64> conductor_counts_dfs(u64 p, u64 max_conductor);
std::vector<u64> conductor_counts_sieve(u64 p, u64 max_conductor);

/// Largest conductor whose discriminant f^{p-1} is at most x.
u64 conductor_bound(u64 p, const BigInt& x);

/// M(x): cyclic degree-p fields with discriminant at most x.
u64 M_of_X(u64 p, const BigInt& x);

/// Every cyclic degree-p field with discriminant at most x, ordered by
/// conductor and then character.
std::vector<CyclicExtension> enumerate_fields(u64 p, const BigInt& max_disc);

nlohmann::json to_json(const CyclicExtension& ext);
nlohmann::json to_json(const SplittingRecord& rec);

}  // namespace kida
