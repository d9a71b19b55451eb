#pragma once

// Characteristic series of finitely generated torsion Lambda-modules and
// the invariants read off from them.

#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kida/arith.hpp"

namespace kida {

inline constexpr unsigned kDefaultSeriesPrecision = 20;

/// Polynomial a_0 + a_1 T + ... + a_d T^d over Z_p.
///
/// Exact series carry true integer coefficients (anything built from
/// elementary data is exact). Inexact series carry residues mod p^N and
/// only know coefficients up to that precision; a coefficient that
/// reduces to 0 is "zero at precision", not known to be zero.
class CharSeries {
 public:
  CharSeries(u64 p, std::vector<BigInt> coeffs, unsigned precision = kDefaultSeriesPrecision, bool exact = true);

  u64 p() const noexcept { return p_; }
  unsigned precision() const noexcept { return precision_; }
  bool exact() const noexcept { return exact_; }
  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
  /// Coefficient i, zero past the stored degree.
  BigInt coefficient(std::size_t i) const;
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Valuation of coefficient i, or nothing when the coefficient is zero
  /// (exactly, or at precision for inexact series).
  std::optional<unsigned> valuation(std::size_t i) const;

  friend CharSeries operator*(const CharSeries& f, const CharSeries& g);
  bool operator==(const CharSeries&) const = default;

 private:
  u64 p_;
  unsigned precision_;
  bool exact_;
  std::vector<BigInt> coeffs_;
};

/// Distinguished polynomial (coefficients low degree first) raised to a
/// multiplicity.
struct DistinguishedFactor {
  std::vector<BigInt> coeffs;
  unsigned multiplicity = 1;
};

/// prod_i p^{m_i} * prod_j f_j(T)^{n_j}. Throws invalid_input when some f_j
/// is not distinguished.
CharSeries from_elementary(u64 p, const std::vector<unsigned>& p_powers,
                           const std::vector<DistinguishedFactor>& polys,
                           unsigned precision = kDefaultSeriesPrecision);

struct IwasawaInvariants {
  unsigned mu = 0;
  unsigned lambda = 0;
  /// a_0 != 0; nothing when a_0 is zero at precision but not known zero.
  std::optional<bool> euler_char_defined;
  std::optional<unsigned> euler_char_valuation;
};

/// mu is the least coefficient valuation, lambda the first index attaining
/// it. Throws indeterminate when every coefficient is zero at precision.
IwasawaInvariants iwasawa_invariants(const CharSeries& f);

/// a_0 != 0. Throws indeterminate when a_0 is zero only at precision.
bool euler_char_defined(const CharSeries& f);

/// The Euler characteristic as the p-power p^{v_p(a_0)}. The
/// characteristic series determines chi only up to a p-adic unit, but chi
/// is itself a power of p, so the p-power part of a_0 pins it exactly.
BigInt euler_characteristic(const CharSeries& f);

/// mu = lambda = 0, decided by p not dividing a_0. Requires a_0 != 0.
bool mu_lambda_zero(const CharSeries& f);

nlohmann::json to_json(const CharSeries& f);
/// {"p": 3, "precision": 20, "coeffs": [...], "exact": bool?}. Coefficients
/// may be JSON integers or decimal strings. Missing "exact" means the
/// coefficients are residues at the stated precision.
CharSeries series_from_json(const nlohmann::json& j);

}  // namespace kida
