#include "kida/curve.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace kida {

std::string WeierstrassModel::to_string() const {
  std::ostringstream os;
  os << a1 << ',' << a2 << ',' << a3 << ',' << a4 << ',' << a6;
  return os.str();
}

WeierstrassModel WeierstrassModel::parse(std::string_view text) {
  std::vector<BigInt> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string token(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    // trim blanks
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    token = first == std::string::npos ? std::string() : token.substr(first, last - first + 1);
    const std::string digits = !token.empty() && (token[0] == '-' || token[0] == '+') ? token.substr(1) : token;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw Error(Errc::parse, "malformed coefficient '" + token + "' in curve '" + std::string(text) + "'");
    fields.emplace_back(token[0] == '+' ? digits : token, 10);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() != 5)
    throw Error(Errc::parse, "expected five coefficients a1,a2,a3,a4,a6, got " + std::to_string(fields.size()));
  return {fields[0], fields[1], fields[2], fields[3], fields[4]};
}

namespace {

struct BInv {
  BigInt b2, b4, b6, b8;
};

BInv b_invariants(const WeierstrassModel& w) {
  BInv b;
  b.b2 = w.a1 * w.a1 + 4 * w.a2;
  b.b4 = w.a1 * w.a3 + 2 * w.a4;
  b.b6 = w.a3 * w.a3 + 4 * w.a6;
  b.b8 = w.a1 * w.a1 * w.a6 + 4 * w.a2 * w.a6 - w.a1 * w.a3 * w.a4 + w.a2 * w.a3 * w.a3 - w.a4 * w.a4;
  return b;
}

BigInt disc_from_b(const BInv& b) {
  return -b.b2 * b.b2 * b.b8 - 8 * b.b4 * b.b4 * b.b4 - 27 * b.b6 * b.b6 + 9 * b.b2 * b.b4 * b.b6;
}

bool divides(const BigInt& d, const BigInt& n) { return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0; }

BigInt exact_div(const BigInt& n, const BigInt& d) {
  BigInt q;
  mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

// floor-style residue of n mod m in [-(m-1)/2 ... m/2], the signed range
// used to normalise b2.
BigInt signed_mod(const BigInt& n, long m) {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(m));
  if (r > m / 2) r -= m;
  return r;
}

}  // namespace

BigInt discriminant(const WeierstrassModel& w) { return disc_from_b(b_invariants(w)); }

CurveInvariants invariants(const WeierstrassModel& w) {
  const BInv b = b_invariants(w);
  CurveInvariants inv;
  inv.b2 = b.b2;
  inv.b4 = b.b4;
  inv.b6 = b.b6;
  inv.b8 = b.b8;
  inv.c4 = b.b2 * b.b2 - 24 * b.b4;
  inv.c6 = -b.b2 * b.b2 * b.b2 + 36 * b.b2 * b.b4 - 216 * b.b6;
  inv.disc = disc_from_b(b);
  if (inv.disc == 0) throw Error(Errc::singular_curve, "discriminant vanishes for " + w.to_string());
  if (inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6 != 1728 * inv.disc)
    throw Error(Errc::invalid_input, "invariant identity c4^3 - c6^2 = 1728 disc failed");
  inv.j = Rational(inv.c4 * inv.c4 * inv.c4, inv.disc);
  inv.j.canonicalize();
  return inv;
}

WeierstrassModel transform(const WeierstrassModel& w, const BigInt& r, const BigInt& s, const BigInt& t,
                           const BigInt& u) {
  const BigInt a1 = w.a1 + 2 * s;
  const BigInt a2 = w.a2 - s * w.a1 + 3 * r - s * s;
  const BigInt a3 = w.a3 + r * w.a1 + 2 * t;
  const BigInt a4 = w.a4 - s * w.a3 + 2 * r * w.a2 - (t + r * s) * w.a1 + 3 * r * r - 2 * s * t;
  const BigInt a6 = w.a6 + r * w.a4 + r * r * w.a2 + r * r * r - t * w.a3 - t * t - r * t * w.a1;
  if (u == 1) return {a1, a2, a3, a4, a6};
  const BigInt u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  if (!divides(u, a1) || !divides(u2, a2) || !divides(u3, a3) || !divides(u4, a4) || !divides(u6, a6))
    throw Error(Errc::invalid_input, "scaled model is not integral");
  return {exact_div(a1, u), exact_div(a2, u2), exact_div(a3, u3), exact_div(a4, u4), exact_div(a6, u6)};
}

std::optional<WeierstrassModel> model_from_c4c6(const BigInt& c4, const BigInt& c6) {
  const BigInt b2 = signed_mod(-c6, 12);
  const BigInt num4 = b2 * b2 - c4;
  if (!divides(24, num4)) return std::nullopt;
  const BigInt b4 = exact_div(num4, 24);
  const BigInt num6 = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
  if (!divides(216, num6)) return std::nullopt;
  const BigInt b6 = exact_div(num6, 216);
  const BigInt a1 = mpz_odd_p(b2.get_mpz_t()) ? 1 : 0;
  const BigInt a3 = mpz_odd_p(b6.get_mpz_t()) ? 1 : 0;
  const BigInt n2 = b2 - a1, n4 = b4 - a1 * a3, n6 = b6 - a3;
  if (!divides(4, n2) || !divides(2, n4) || !divides(4, n6)) return std::nullopt;
  WeierstrassModel w(a1, exact_div(n2, 4), a3, exact_div(n4, 2), exact_div(n6, 4));
  const BInv b = b_invariants(w);
  const BigInt c4w = b.b2 * b.b2 - 24 * b.b4;
  const BigInt c6w = -b.b2 * b.b2 * b.b2 + 36 * b.b2 * b.b4 - 216 * b.b6;
  if (c4w != c4 || c6w != c6) return std::nullopt;
  return w;
}

MinimalModel minimal_model(const WeierstrassModel& w) {
  const CurveInvariants inv = invariants(w);
  BigInt g = gcd(inv.c4, inv.c6);
  BigInt u = 1;
  if (abs(g) > 1) {
    for (const auto& [q, e] : factor(g)) {
      if (padic_valuation(inv.disc, q.get_ui()) < 12) continue;
      unsigned d = 0;
      if (q >= 5) {
        const unsigned v4 = inv.c4 == 0 ? kInfiniteValuation : padic_valuation(inv.c4, q.get_ui());
        const unsigned v6 = inv.c6 == 0 ? kInfiniteValuation : padic_valuation(inv.c6, q.get_ui());
        d = std::min({v4 / 4, v6 / 6, padic_valuation(inv.disc, q.get_ui()) / 12});
      } else {
        d = detail::tate(w, q.get_ui(), true).scalings;
      }
      u *= pow(q, d);
    }
  }
  const BigInt u4 = pow(u, 4), u6 = pow(u, 6);
  auto model = model_from_c4c6(exact_div(inv.c4, u4), exact_div(inv.c6, u6));
  if (!model) throw Error(Errc::invalid_input, "no integral model after minimisation of " + w.to_string());
  return {*model, u};
}

bool is_squarefree(const BigInt& d) {
  if (d == 0) return false;
  if (abs(d) == 1) return true;
  for (const auto& [q, e] : factor(d))
    if (e > 1) return false;
  return true;
}

WeierstrassModel quadratic_twist(const WeierstrassModel& w, const BigInt& d) {
  if (!is_squarefree(d)) throw Error(Errc::invalid_twist, "twist parameter " + d.get_str() + " is not squarefree");
  const CurveInvariants inv = invariants(w);
  if (auto m = model_from_c4c6(d * d * inv.c4, d * d * d * inv.c6)) return *m;
  auto m = model_from_c4c6(16 * d * d * inv.c4, 64 * d * d * d * inv.c6);
  if (!m) throw Error(Errc::invalid_input, "twist reconstruction failed");
  return *m;
}

std::string_view to_string(ReductionType t) {
  switch (t) {
    case ReductionType::good: return "good";
    case ReductionType::split_multiplicative: return "split_multiplicative";
    case ReductionType::nonsplit_multiplicative: return "nonsplit_multiplicative";
    case ReductionType::additive: return "additive";
  }
  return "?";
}

std::string Kodaira::to_string() const {
  switch (kind) {
    case Kind::I0: return "I0";
    case Kind::In: return "I" + std::to_string(n);
    case Kind::II: return "II";
    case Kind::III: return "III";
    case Kind::IV: return "IV";
    case Kind::I0s: return "I0*";
    case Kind::Ins: return "I" + std::to_string(n) + "*";
    case Kind::IVs: return "IV*";
    case Kind::IIIs: return "III*";
    case Kind::IIs: return "II*";
  }
  return "?";
}

bool potentially_good(const WeierstrassModel& w, u64 p) {
  const CurveInvariants inv = invariants(w);
  const BigInt den = inv.j.get_den();
  return padic_valuation(den, p) == 0;
}

std::vector<u64> bad_primes(const WeierstrassModel& w) {
  const CurveInvariants inv = invariants(w);
  std::vector<u64> out;
  for (const auto& [q, e] : factor(inv.disc)) {
    if (!q.fits_ulong_p()) throw Error(Errc::out_of_range, "bad prime " + q.get_str() + " exceeds 64 bits");
    out.push_back(q.get_ui());
  }
  return out;
}

EllipticCurve::EllipticCurve(const WeierstrassModel& w)
    : input_(w), min_(minimal_model(w)), inv_(kida::invariants(min_.model)), bad_(kida::bad_primes(min_.model)) {}

bool EllipticCurve::has_good_reduction(u64 l) const { return reduce(inv_.disc, l) != 0; }

LocalReductionData EllipticCurve::local_data(u64 l) const { return reduction_type(min_.model, l); }

}  // namespace kida
