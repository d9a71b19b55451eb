// Tate's algorithm over Z at a single prime. Coordinates are moved so the
// singular point of the reduction sits at the origin, then the Kodaira type
// is read off from successive divisibility tests. Types I_n* run the usual
// alternating quadratic sub-loop until a quadratic with distinct roots
// appears.

#include <vector>

#include "kida/curve.hpp"

namespace kida {

namespace {

BigInt big(u64 v) { return BigInt(static_cast<unsigned long>(v)); }

bool divides(const BigInt& d, const BigInt& n) { return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0; }

BigInt div_exact(const BigInt& n, const BigInt& d) {
  BigInt q;
  mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

BigInt mod(const BigInt& n, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return r;
}

BigInt inverse(const BigInt& a, const BigInt& m) {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw Error(Errc::non_unit, "no inverse of " + a.get_str() + " mod " + m.get_str());
  return r;
}

constexpr u64 kBruteForcePrime = 1000;

// a T^2 + b T + c has a root mod l
bool quadratic_has_root(const BigInt& a, const BigInt& b, const BigInt& c, u64 l) {
  const u64 ra = reduce(a, l), rb = reduce(b, l), rc = reduce(c, l);
  if (l < kBruteForcePrime) {
    for (u64 t = 0; t < l; ++t)
      if (addmod(addmod(mulmod(mulmod(ra, t, l), t, l), mulmod(rb, t, l), l), rc, l) == 0) return true;
    return false;
  }
  if (ra == 0) return rb != 0 || rc == 0;
  const u64 disc = submod(mulmod(rb, rb, l), mulmod(4 % l, mulmod(ra, rc, l), l), l);
  return disc == 0 || powmod(disc, (l - 1) / 2, l) == 1;
}

using Poly = std::vector<u64>;  // coefficients, low degree first

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, u64 l) {
  trim(a);
  const u64 lead_inv = invmod(m.back(), l);
  while (a.size() >= m.size()) {
    const u64 coef = mulmod(a.back(), lead_inv, l);
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = submod(a[shift + i], mulmod(coef, m[i], l), l);
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, u64 l) {
  Poly r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = addmod(r[i + j], mulmod(a[i], b[j], l), l);
  return poly_mod(std::move(r), m, l);
}

// Number of distinct roots in F_l of the monic cubic T^3 + b T^2 + c T + d.
unsigned cubic_root_count(const BigInt& b, const BigInt& c, const BigInt& d, u64 l) {
  const u64 rb = reduce(b, l), rc = reduce(c, l), rd = reduce(d, l);
  if (l < kBruteForcePrime) {
    unsigned count = 0;
    for (u64 t = 0; t < l; ++t) {
      const u64 v = addmod(mulmod(addmod(mulmod(addmod(t, rb, l), t, l), rc, l), t, l), rd, l);
      if (v == 0) ++count;
    }
    return count;
  }
  const Poly cubic{rd, rc, rb, 1};
  // x^l mod cubic, then gcd(cubic, x^l - x)
  Poly result{1}, base{0, 1};
  for (u64 e = l; e; e >>= 1) {
    if (e & 1) result = poly_mulmod(result, base, cubic, l);
    base = poly_mulmod(base, base, cubic, l);
  }
  result.resize(std::max<std::size_t>(result.size(), 2), 0);
  result[1] = submod(result[1], 1, l);
  trim(result);
  Poly a = cubic, g = result;
  while (!g.empty()) {
    Poly r = poly_mod(a, g, l);
    a = std::move(g);
    g = std::move(r);
  }
  return static_cast<unsigned>(a.size() - 1);
}

// Singular point of the reduction of w mod l, which must have bad reduction.
std::pair<BigInt, BigInt> singular_point(const WeierstrassModel& w, u64 l) {
  const BigInt L = big(l);
  if (l < 50) {
    for (u64 x = 0; x < l; ++x)
      for (u64 y = 0; y < l; ++y) {
        const BigInt X = big(x), Y = big(y);
        const BigInt f = Y * Y + w.a1 * X * Y + w.a3 * Y - X * X * X - w.a2 * X * X - w.a4 * X - w.a6;
        const BigInt fx = w.a1 * Y - 3 * X * X - 2 * w.a2 * X - w.a4;
        const BigInt fy = 2 * Y + w.a1 * X + w.a3;
        if (divides(L, f) && divides(L, fx) && divides(L, fy)) return {X, Y};
      }
    throw Error(Errc::invalid_input, "no singular point found mod " + std::to_string(l));
  }
  const CurveInvariants inv = invariants(w);
  const BigInt i2 = inverse(2, L), i4 = inverse(4, L);
  const BigInt B = mod(inv.b2 * i4, L), C = mod(inv.b4 * i2, L), D = mod(inv.b6 * i4, L);
  BigInt x0;
  if (divides(L, inv.c4)) {
    x0 = mod(-B * inverse(3, L), L);
  } else {
    x0 = mod((B * C - 9 * D) * inverse(mod(2 * (3 * C - B * B), L), L), L);
  }
  const BigInt y0 = mod(-(w.a1 * x0 + w.a3) * i2, L);
  return {x0, y0};
}

void check(bool cond, const char* what) {
  if (!cond) throw Error(Errc::invalid_input, std::string("Tate's algorithm invariant violated: ") + what);
}

}  // namespace

namespace detail {

TateOutcome tate(const WeierstrassModel& w0, u64 l, bool allow_rescale) {
  const BigInt L = big(l), L2 = L * L, L3 = L2 * L, L4 = L3 * L, L6 = L3 * L3;
  WeierstrassModel w = w0;
  TateOutcome out;
  auto finish = [&](ReductionType type, Kodaira k, unsigned c, unsigned n, unsigned f, unsigned v4) {
    out.data.prime = l;
    out.data.type = type;
    out.data.kodaira = k;
    out.data.tamagawa = c;
    out.data.v_disc = n;
    out.data.v_c4 = v4;
    out.data.conductor_exponent = f;
    out.model = w;
    return out;
  };
  using K = Kodaira::Kind;
  const auto additive = ReductionType::additive;

  while (true) {
    const CurveInvariants inv0 = invariants(w);
    const unsigned n = padic_valuation(inv0.disc, l);
    const unsigned v4 = inv0.c4 == 0 ? kInfiniteValuation : padic_valuation(inv0.c4, l);
    if (n == 0) return finish(ReductionType::good, {K::I0, 0}, 1, 0, 0, v4);

    const auto [x0, y0] = singular_point(w, l);
    w = transform(w, x0, 0, y0);
    check(divides(L, w.a3) && divides(L, w.a4) && divides(L, w.a6), "singular point at origin");
    const CurveInvariants inv = invariants(w);

    if (v4 == 0) {
      const bool split = l == 2 ? quadratic_has_root(1, w.a1, -w.a2, l) : legendre(BigInt(-inv.c6), l) == 1;
      const unsigned c = split ? n : (n % 2 == 0 ? 2 : 1);
      return finish(split ? ReductionType::split_multiplicative : ReductionType::nonsplit_multiplicative,
                    {K::In, n}, c, n, 1, v4);
    }
    if (!divides(L2, w.a6)) return finish(additive, {K::II, 0}, 1, n, n, v4);
    if (!divides(L3, inv.b8)) return finish(additive, {K::III, 0}, 2, n, n - 1, v4);
    if (!divides(L3, inv.b6)) {
      const unsigned c = quadratic_has_root(1, div_exact(w.a3, L), -div_exact(w.a6, L2), l) ? 3 : 1;
      return finish(additive, {K::IV, 0}, c, n, n - 2, v4);
    }

    BigInt s, t;
    if (l == 2) {
      s = mod(w.a2, 2);
      t = 2 * mod(div_exact(w.a6, 4), 2);
    } else {
      s = mod(-w.a1 * inverse(2, L), L);
      t = mod(-w.a3 * inverse(2, L2), L2);
    }
    w = transform(w, 0, s, t);
    check(divides(L, w.a1) && divides(L, w.a2) && divides(L2, w.a3) && divides(L2, w.a4) && divides(L3, w.a6),
          "cubic normal form");

    const BigInt B = div_exact(w.a2, L), C = div_exact(w.a4, L2), D = div_exact(w.a6, L3);
    const BigInt cubic_disc = B * B * C * C - 4 * C * C * C - 4 * B * B * B * D - 27 * D * D + 18 * B * C * D;
    if (!divides(L, cubic_disc)) {
      const unsigned c = 1 + cubic_root_count(B, C, D, l);
      return finish(additive, {K::I0s, 0}, c, n, n - 4, v4);
    }

    if (!divides(L, 3 * C - B * B)) {
      // double root: move it to 0, then run the I_m* sub-loop
      BigInt root;
      if (l == 2) root = mod(C, 2);
      else if (l == 3) root = mod(B * C, 3);
      else root = mod((B * C - 9 * D) * inverse(mod(2 * (3 * C - B * B), L), L), L);
      w = transform(w, L * root, 0, 0);
      unsigned ix = 3, iy = 3;
      BigInt mx = L2, my = L2;
      unsigned c = 0;
      while (true) {
        check(ix + iy <= n + 8, "I_m* loop bounded by the discriminant valuation");
        BigInt xa2 = div_exact(w.a2, L), xa3 = div_exact(w.a3, my);
        BigInt xa4 = div_exact(w.a4, L * mx), xa6 = div_exact(w.a6, mx * my);
        if (!divides(L, xa3 * xa3 + 4 * xa6)) {
          c = quadratic_has_root(1, xa3, -xa6, l) ? 4 : 2;
          break;
        }
        t = l == 2 ? my * mod(xa6, 2) : my * mod(-xa3 * inverse(2, L), L);
        w = transform(w, 0, 0, t);
        my *= L;
        ++iy;
        xa2 = div_exact(w.a2, L);
        xa3 = div_exact(w.a3, my);
        xa4 = div_exact(w.a4, L * mx);
        xa6 = div_exact(w.a6, mx * my);
        if (!divides(L, xa4 * xa4 - 4 * xa2 * xa6)) {
          c = quadratic_has_root(xa2, xa4, xa6, l) ? 4 : 2;
          break;
        }
        const BigInt r = l == 2 ? mx * mod(xa6 * xa2, 2) : mx * mod(-xa4 * inverse(mod(2 * xa2, L), L), L);
        w = transform(w, r, 0, 0);
        mx *= L;
        ++ix;
      }
      const unsigned m = ix + iy - 5;
      return finish(additive, {K::Ins, m}, c, n, n - 4 - m, v4);
    }

    // triple root
    BigInt root;
    if (l == 2) root = mod(B, 2);
    else if (l == 3) root = mod(-D, 3);
    else root = mod(-B * inverse(3, L), L);
    w = transform(w, L * root, 0, 0);
    check(divides(L2, w.a2) && divides(L3, w.a4) && divides(L4, w.a6), "triple root at origin");
    const BigInt x3 = div_exact(w.a3, L2), x6 = div_exact(w.a6, L4);
    if (!divides(L, x3 * x3 + 4 * x6)) {
      const unsigned c = quadratic_has_root(1, x3, -x6, l) ? 3 : 1;
      return finish(additive, {K::IVs, 0}, c, n, n - 6, v4);
    }
    t = l == 2 ? L2 * mod(x6, 2) : L2 * mod(-x3 * inverse(2, L), L);
    w = transform(w, 0, 0, t);
    check(divides(L3, w.a3) && divides(L * L4, w.a6), "IV* tail normal form");
    if (!divides(L4, w.a4)) return finish(additive, {K::IIIs, 0}, 2, n, n - 7, v4);
    if (!divides(L6, w.a6)) return finish(additive, {K::IIs, 0}, 1, n, n - 8, v4);

    if (!allow_rescale) throw Error(Errc::not_minimal, w0.to_string() + " is not minimal at " + std::to_string(l));
    w = transform(w, 0, 0, 0, L);
    ++out.scalings;
  }
}

}  // namespace detail

LocalReductionData reduction_type(const WeierstrassModel& w_min, u64 l) {
  if (!is_prime(l)) throw Error(Errc::invalid_modulus, std::to_string(l) + " is not prime");
  const CurveInvariants inv = invariants(w_min);
  // Shortcut only for l >= 5; at 2 and 3 Tate's algorithm itself decides.
  const bool c4_high = l >= 5 && (inv.c4 == 0 || padic_valuation(inv.c4, l) >= 4);
  const bool c6_high = inv.c6 == 0 || padic_valuation(inv.c6, l) >= 6;
  if (c4_high && c6_high && padic_valuation(inv.disc, l) >= 12)
    throw Error(Errc::not_minimal, w_min.to_string() + " is not minimal at " + std::to_string(l));
  return detail::tate(w_min, l, false).data;
}

}  // namespace kida
