#pragma once

// Euler-characteristic factors for curves over Q that are additive at p and
// become good ordinary over the quadratic subfield of Q(mu_p), and the
// mu = lambda = 0 criterion built on them.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kida/curve.hpp"
#include "kida/iwasawa.hpp"

namespace kida {

struct OrdinaryTwist {
  BigInt d;                 // (-1)^{(p-1)/2} p
  WeierstrassModel model;   // global minimal model of the twist
  i64 a_p = 0;
  u64 frak_F_count = 0;     // #F(F_p) for the reduction F of the twist
};

/// Twist by the discriminant of the quadratic subfield of Q(mu_p). Throws
/// invalid_input when E is not additive and potentially good at p,
/// assumption_not_satisfied when the twist is still bad at p and
/// supersingular when it is good with a_p = 0 mod p.
OrdinaryTwist good_ordinary_twist(const EllipticCurve& e, u64 p);

enum class PiImageStatus { prime_to_p_implied, unknown };

struct TorsionCheck {
  bool torsion_free = true;
  std::string method;            // "reduction" or "division-polynomial"
  std::vector<u64> witnesses;    // good primes l with p not dividing #E(F_l)
  std::optional<BigInt> point_x; // x on y^2 = x^3 - 27 c4 x - 54 c6 when torsion exists
};

/// Decides E(Q)[p] = 0. Reduction injects prime-to-l torsion into E(F_l),
/// so one good l with p not dividing #E(F_l) settles it. Otherwise the
/// integral roots of the p-division polynomial of the short model are
/// searched (Nagell-Lutz), Hensel lifting roots from a prime where all of
/// them are simple.
TorsionCheck p_torsion_check(const EllipticCurve& e, u64 p);

struct EulerFactors {
  u64 p = 3;
  std::optional<BigInt> sha_p_order;  // nothing when unknown
  OrdinaryTwist twist;
  PiImageStatus pi_image_status = PiImageStatus::unknown;
  std::vector<std::pair<u64, unsigned>> tamagawa;  // (l, c_l) for bad l != p
  BigInt tamagawa_product = 1;
  bool ordinary = true;
  std::optional<bool> analytic_rank_zero;  // external
  TorsionCheck torsion;
};

/// Factors of the Euler-characteristic product. sha must be a power of p
/// when given. analytic_rank_zero = false and E(Q)[p] != 0 are hypothesis
/// failures (assumption_not_satisfied); an absent analytic rank is carried
/// through and leaves the criterion unresolved.
EulerFactors euler_char_factors(const EllipticCurve& e, u64 p, const std::optional<BigInt>& sha,
                                const std::optional<bool>& analytic_rank_zero);

enum class Vanishing { zero, nonzero, unresolved };

std::string_view to_string(Vanishing v);
std::string_view to_string(PiImageStatus s);

/// mu = lambda = 0 from the factors: zero when every factor is known and
/// prime to p, nonzero when everything is known and some factor is
/// divisible by p, unresolved otherwise.
Vanishing mu_lambda_vanish(const EulerFactors& ef);

/// v_p of the product, when determined.
std::optional<unsigned> euler_char_valuation(const EulerFactors& ef);

/// The series p^v + T whose constant term carries the product's valuation.
CharSeries induced_series(const EulerFactors& ef);

nlohmann::json to_json(const EulerFactors& ef);

namespace detail {
/// f_n with psi_n = f_n (n odd) or 2y f_n (n even) on y^2 = x^3 + A x + B;
/// coefficients low degree first.
std::vector<BigInt> division_polynomial(const BigInt& A, const BigInt& B, unsigned n);
/// Integer roots of a nonzero integer polynomial with squarefree part
/// equal to itself.
std::vector<BigInt> integer_roots(const std::vector<BigInt>& f);
}  // namespace detail

}  // namespace kida
