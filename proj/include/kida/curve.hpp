#pragma once

// Weierstrass models over Q and everything local about them: invariants,
// global minimal models, quadratic twists and Tate's algorithm.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kida/arith.hpp"

namespace kida {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients.
struct WeierstrassModel {
  BigInt a1, a2, a3, a4, a6;

  WeierstrassModel() = default;
  WeierstrassModel(BigInt a1_, BigInt a2_, BigInt a3_, BigInt a4_, BigInt a6_)
      : a1(std::move(a1_)), a2(std::move(a2_)), a3(std::move(a3_)), a4(std::move(a4_)), a6(std::move(a6_)) {}
  WeierstrassModel(long a1_, long a2_, long a3_, long a4_, long a6_)
      : a1(a1_), a2(a2_), a3(a3_), a4(a4_), a6(a6_) {}

  bool operator==(const WeierstrassModel&) const = default;

  /// "a1,a2,a3,a4,a6"
  std::string to_string() const;
  /// Inverse of to_string; throws parse on malformed text. Does not check
  /// for singularity.
  static WeierstrassModel parse(std::string_view text);
};

struct CurveInvariants {
  BigInt b2, b4, b6, b8, c4, c6, disc;
  Rational j;
};

/// Standard b/c invariants, discriminant and j; throws singular_curve when
/// the discriminant vanishes.
CurveInvariants invariants(const WeierstrassModel& w);

/// Discriminant without the singularity check.
BigInt discriminant(const WeierstrassModel& w);

/// Change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t. Throws
/// invalid_input when the result is not integral.
WeierstrassModel transform(const WeierstrassModel& w, const BigInt& r, const BigInt& s, const BigInt& t,
                           const BigInt& u = 1);

/// Reduced integral model with the given c4, c6 (a1, a3 in {0,1},
/// a2 in {-1,0,1}), or nothing when no integral model has these invariants.
std::optional<WeierstrassModel> model_from_c4c6(const BigInt& c4, const BigInt& c6);

struct MinimalModel {
  WeierstrassModel model;
  BigInt u;  // c4 = u^4 c4', c6 = u^6 c6', disc = u^12 disc'
};

/// Global minimal model over Q in reduced form.
MinimalModel minimal_model(const WeierstrassModel& w);

/// Quadratic twist by a squarefree d != 0. The returned model has
/// c4' = d^2 c4 and c6' = d^3 c6 whenever an integral model with those
/// invariants exists, and otherwise the 2-scaled model with
/// c4' = 16 d^2 c4, c6' = 64 d^3 c6.
WeierstrassModel quadratic_twist(const WeierstrassModel& w, const BigInt& d);

bool is_squarefree(const BigInt& d);

enum class ReductionType { good, split_multiplicative, nonsplit_multiplicative, additive };

std::string_view to_string(ReductionType t);

struct Kodaira {
  enum class Kind { I0, In, II, III, IV, I0s, Ins, IVs, IIIs, IIs };
  Kind kind = Kind::I0;
  unsigned n = 0;  // index of I_n and I_n*

  bool operator==(const Kodaira&) const = default;
  std::string to_string() const;
};

struct LocalReductionData {
  u64 prime = 0;
  ReductionType type = ReductionType::good;
  Kodaira kodaira;
  unsigned tamagawa = 1;
  unsigned v_disc = 0;
  unsigned v_c4 = 0;  // capped at a large value when c4 = 0
  unsigned conductor_exponent = 0;
};

/// Tate's algorithm at a prime for a model minimal at that prime. Throws
/// not_minimal when the model is not minimal at l.
LocalReductionData reduction_type(const WeierstrassModel& w_min, u64 l);

/// Valuation of c4 as stored in LocalReductionData when c4 = 0.
inline constexpr unsigned kInfiniteValuation = 1u << 30;

/// Potentially good reduction at p: the denominator of j is prime to p.
bool potentially_good(const WeierstrassModel& w, u64 p);

/// Primes of bad reduction of a model (prime divisors of its discriminant).
std::vector<u64> bad_primes(const WeierstrassModel& w);

/// A curve over Q prepared for repeated local queries: the global minimal
/// model, its invariants and its bad primes are computed once.
class EllipticCurve {
 public:
  explicit EllipticCurve(const WeierstrassModel& w);

  const WeierstrassModel& input() const noexcept { return input_; }
  const WeierstrassModel& model() const noexcept { return min_.model; }
  const BigInt& scaling() const noexcept { return min_.u; }
  const CurveInvariants& invariants() const noexcept { return inv_; }
  const std::vector<u64>& bad_primes() const noexcept { return bad_; }
  bool has_good_reduction(u64 l) const;
  LocalReductionData local_data(u64 l) const;

 private:
  WeierstrassModel input_;
  MinimalModel min_;
  CurveInvariants inv_;
  std::vector<u64> bad_;
};

namespace detail {
struct TateOutcome {
  LocalReductionData data;
  unsigned scalings = 0;  // times the model was divided down by l
  WeierstrassModel model;  // local minimal model reached
};
TateOutcome tate(const WeierstrassModel& w, u64 l, bool allow_rescale);
}  // namespace detail

}  // namespace kida
