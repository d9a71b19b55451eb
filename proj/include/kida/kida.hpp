#pragma once

// Hypothesis checks for the lambda-transfer formula over Q, the transfer
// itself with its per-prime local terms, and the rank bound it implies.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kida/classify.hpp"
#include "kida/curve.hpp"
#include "kida/fields.hpp"

namespace kida {

enum class AdditiveStability { satisfied_by_p_ge_5, satisfied_by_unramified, unresolved };
std::string_view to_string(AdditiveStability s);

/// A three-valued answer.
enum class Tristate { yes, no, unresolved };
std::string_view to_string(Tristate t);

struct GoodTwist {
  BigInt d;
  WeierstrassModel model;  // minimal model of the twist
};

/// Facts about the base that cannot be computed here.
struct BaseInputs {
  std::optional<bool> mu_lambda_zero;      // mu_p(E/Q) = lambda_p(E/Q) = 0
  std::optional<unsigned> mu;              // mu_p(E/Q)
  std::optional<BigInt> sha_p_order;       // feeds the Euler-characteristic route
  std::optional<bool> analytic_rank_zero;  // likewise
};

struct HypothesisReport {
  u64 p = 3;
  ReductionType reduction_at_p = ReductionType::good;
  bool additive_at_p = false;
  bool potentially_good_at_p = false;
  std::optional<GoodTwist> good_twist;
  Tristate prime_to_p_defect = Tristate::unresolved;
  AdditiveStability additive_stability = AdditiveStability::unresolved;
  std::vector<u64> additive_primes;  // away from p
  std::optional<bool> base_mu_lambda_zero;
  std::optional<bool> base_mu_zero;
  std::string base_source;  // "external", "euler-characteristic" or "unresolved"
  std::vector<std::string> notes;

  /// Some hypothesis of the transfer formula is not known to hold.
  bool blocking() const;
};

HypothesisReport check_hypotheses(const EllipticCurve& e, u64 p, const CyclicExtension& ext,
                                  const BaseInputs& base = {});
/// Same for the compositum of independent cyclic degree-p fields.
HypothesisReport check_hypotheses(const EllipticCurve& e, u64 p, const std::vector<CyclicExtension>& exts,
                                  const BaseInputs& base = {});

struct LocalWitness {
  u64 prime = 0;
  ReductionType reduction = ReductionType::good;
  PrimeClassKind cls = PrimeClassKind::Q3;
  u64 e = 1;           // ramification index of each w
  BigInt w_count;      // primes w of L_cyc above l
  bool in_p1 = false;  // split multiplicative at w
  bool in_p2 = false;  // good at w with a point of order p
  BigInt p1_contribution;
  BigInt p2_contribution;
};

struct KidaResult {
  u64 p = 3;
  BigInt lambda_K;
  BigInt lambda_L;
  BigInt degree;  // [L_cyc : Q_cyc]
  BigInt p1_term;
  BigInt p2_term;
  std::vector<LocalWitness> witnesses;
  bool acknowledged_override = false;
};

/// lambda_L = [L_cyc:Q_cyc] lambda_K + sum_{P1}(e-1) + 2 sum_{P2}(e-1), the
/// sums over primes w not above p. Throws hypothesis_blocked when the
/// report blocks and acknowledge_unresolved is false.
KidaResult lambda_transfer(const BigInt& lambda_K, const EllipticCurve& e, const CyclicExtension& ext,
                           const HypothesisReport& hyp, bool acknowledge_unresolved = false);

/// Transfer to the compositum of independent cyclic degree-p fields, of
/// degree p^k. A tame prime has inertia of order p there and p^{m+k-1}
/// primes above it in L_cyc. Throws invalid_input when the characters are
/// dependent.
KidaResult lambda_transfer(const BigInt& lambda_K, const EllipticCurve& e, const std::vector<CyclicExtension>& exts,
                           const HypothesisReport& hyp, bool acknowledge_unresolved = false);

/// Split multiplicative status over F_{l^f}: -c6 stays a non-square in odd
/// degree extensions, so only even f can change it.
bool split_over_extension(const EllipticCurve& e, u64 l, unsigned f);

struct RankBound {
  BigInt bound;
  bool rank_is_zero = false;
};

/// rank E(L) <= lambda_L, which forces rank 0 when lambda_L = 0.
RankBound rank_bound(const KidaResult& kr);

/// Every ramified prime of ext is in Q3 (p itself never is).
bool stable_extension_test(const EllipticCurve& e, u64 p, const CyclicExtension& ext);

nlohmann::json to_json(const HypothesisReport& h);
nlohmann::json to_json(const KidaResult& k);

}  // namespace kida
