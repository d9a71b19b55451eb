#pragma once

// Densities and counting functions for cyclic degree-p fields in which the
// lambda-invariant of a fixed curve stays 0: the Chebotarev density alpha of
// the stable set, the g/M tables and a log-log fit of g against its
// predicted asymptotic shape.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kida/classify.hpp"

namespace kida {

/// #{A in SL_2(F_p) : tr A = t}, by enumerating matrices.
u64 sl2_trace_count(u64 p, u64 t);

/// (p^2 - p - 1) / (p^3 - p^2 - p + 1).
Rational alpha_closed_form(u64 p);

/// Largest p accepted by alpha_brute_force.
inline constexpr u64 kAlphaBruteForceMax = 31;

/// (#SL_2 - #{tr = 2 in SL_2}) / #GL_2 with every count taken over all p^4
/// matrices. Throws budget when p exceeds kAlphaBruteForceMax.
Rational alpha_brute_force(u64 p);

struct DelangeExponents {
  Rational a;  // pole location, always 1
  Rational b;  // pole order (p-1) alpha
  Rational log_exponent() const { return b - 1; }
};

DelangeExponents delange_exponents(u64 p, const Rational& alpha);

/// Exponent of log X in the lower bound, simplified: -p/(p^2-1).
Rational predicted_log_exponent(u64 p);

/// The exponent as printed in the statement of the main density theorem:
/// (p^2 - p + 2)/(p^3 - p^2 - p + 1). It disagrees with the value forced
/// by its own proof; both are reported.
Rational stated_beta(u64 p);

struct EmpiricalDensity {
  Rational density;       // #stable primes <= X / #primes <= X
  u64 stable_count = 0;
  u64 prime_count = 0;
  bool routes_agree = true;  // classification vs a_l != 2 mod p, prime by prime
};

EmpiricalDensity empirical_density(const EllipticCurve& e, u64 p, u64 x, const SweepOptions& opts = {});

inline constexpr u64 kDensityGridMax = 10'000'000;

struct GRow {
  u64 x = 0;
  u64 g = 0;
};

struct MRow {
  u64 x = 0;         // conductor-scale bound
  BigInt disc;       // x^{p-1}
  u64 M = 0;         // fields with discriminant <= disc
};

struct FitResult {
  double slope = 0;
  double intercept = 0;
  std::size_t points = 0;
};

/// Least squares of log g(X) - log X against log log X over rows with
/// g > 0. Throws fit_unavailable with fewer than 4 usable rows.
FitResult fit_log_exponent(const std::vector<GRow>& rows);

struct DensityReport {
  u64 p = 3;
  Rational alpha;
  Rational alpha_brute;  // equal to alpha; absent for p beyond the brute-force budget
  bool alpha_brute_available = false;
  DelangeExponents delange;
  EmpiricalDensity empirical;
  std::vector<GRow> g_table;
  std::vector<MRow> M_table;
  bool g_bounded_by_M = true;  // g(X) <= M(X^{p-1}) on every row
  FitResult fit;
  double fitted_exponent = 0;
  double predicted_exponent = 0;
  Rational stated_beta;
  Rational proof_beta;
};

/// Builds every table over an increasing grid with at least 4 points and
/// maximum at most kDensityGridMax.
DensityReport asymptotic_report(const EllipticCurve& e, u64 p, const std::vector<u64>& grid,
                                const SweepOptions& opts = {});

nlohmann::json to_json(const DensityReport& r);

}  // namespace kida
