#pragma once

// Classification of rational primes l != p for a fixed curve and odd prime
// p: bad primes (Q1), good primes with p | #E(F_l) (Q2), the rest (Q3), and
// the subset of Q3 congruent to 1 mod p that governs stable extensions.

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "kida/cache.hpp"
#include "kida/curve.hpp"
#include "kida/parallel.hpp"
#include "kida/point_count.hpp"

namespace kida {

enum class PrimeClassKind { Q1, Q2, Q3 };

std::string_view to_string(PrimeClassKind k);

struct PrimeClass {
  u64 prime = 0;
  PrimeClassKind cls = PrimeClassKind::Q3;
  bool in_script_q = false;
  std::optional<i64> trace;  // absent at bad primes

  bool operator==(const PrimeClass&) const = default;
};

struct CyclotomicSplitting {
  u64 prime = 0;
  unsigned m = 0;  // p^m primes of Q_cyc lie above l
};

/// Options for sweeps over many primes.
struct SweepOptions {
  Parallelism parallelism;
  TraceCache* cache = nullptr;
  u64 crossover = kDefaultBsgsCrossover;
};

PrimeClass classify_prime(const EllipticCurve& e, u64 p, u64 l, u64 crossover = kDefaultBsgsCrossover);
PrimeClass classify_prime(const WeierstrassModel& e, u64 p, u64 l);

/// Whether E acquires a point of order p at some prime w of L_cyc above a
/// prime of L of residue degree f over l. Decided as p | #E(F_{l^f}):
/// Frobenius eigenvalues mod p have order prime to p, so passing to the
/// p-power residue extensions of the cyclotomic tower never creates new
/// p-torsion, and the kernel of reduction is pro-l.
bool p2_membership(const EllipticCurve& e, u64 p, u64 l, unsigned f);
bool p2_membership(const WeierstrassModel& e, u64 p, u64 l, unsigned f);

/// m = v_p(l^{p-1} - 1) - 1.
CyclotomicSplitting cyclotomic_split_count(u64 l, u64 p);

/// Frobenius traces at the given primes (nothing at bad primes), in input
/// order. Cached values are reused and new ones appended to the cache.
std::vector<std::optional<i64>> traces(const EllipticCurve& e, const std::vector<u64>& primes,
                                       const SweepOptions& opts = {});

/// Classification of every prime l <= x, l != p, sorted by l.
std::vector<PrimeClass> bulk_classify(const EllipticCurve& e, u64 p, u64 x, const SweepOptions& opts = {});

/// Primes l <= x in the stable set: good, l = 1 mod p, p does not divide
/// #E(F_l). Ascending.
std::vector<u64> script_q_primes(const EllipticCurve& e, u64 p, u64 x, const SweepOptions& opts = {});

/// CSV with header "l,class,a_l,in_script_Q".
void write_classification_csv(std::ostream& os, const std::vector<PrimeClass>& classes);

}  // namespace kida
