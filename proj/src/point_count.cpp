#include "kida/point_count.hpp"

#include <random>
#include <unordered_map>
#include <vector>

namespace kida {

namespace {

void require_good(const WeierstrassModel& w, u64 l) {
  if (!is_prime(l)) throw Error(Errc::invalid_modulus, std::to_string(l) + " is not prime");
  const BigInt disc = discriminant(w);
  if (disc == 0) throw Error(Errc::singular_curve, w.to_string());
  if (reduce(disc, l) == 0)
    throw Error(Errc::bad_reduction, w.to_string() + " has bad reduction at " + std::to_string(l));
}

// Affine point on y^2 = x^3 + A x + B over F_l; inf marks the identity.
struct Point {
  u64 x = 0, y = 0;
  bool inf = true;
};

class ShortCurve {
 public:
  ShortCurve(u64 a, u64 b, u64 l) : a_(a), b_(b), l_(l) {}

  u64 rhs(u64 x) const { return addmod(mulmod(addmod(mulmod(x, x, l_), a_, l_), x, l_), b_, l_); }

  Point neg(const Point& p) const { return p.inf ? p : Point{p.x, p.y == 0 ? 0 : l_ - p.y, false}; }

  Point add(const Point& p, const Point& q) const {
    if (p.inf) return q;
    if (q.inf) return p;
    u64 lambda;
    if (p.x == q.x) {
      if (addmod(p.y, q.y, l_) == 0) return {};
      const u64 num = addmod(mulmod(3, mulmod(p.x, p.x, l_), l_), a_, l_);
      lambda = mulmod(num, invmod(mulmod(2, p.y, l_), l_), l_);
    } else {
      lambda = mulmod(submod(q.y, p.y, l_), invmod(submod(q.x, p.x, l_), l_), l_);
    }
    const u64 x3 = submod(submod(mulmod(lambda, lambda, l_), p.x, l_), q.x, l_);
    const u64 y3 = submod(mulmod(lambda, submod(p.x, x3, l_), l_), p.y, l_);
    return {x3, y3, false};
  }

  Point mul(Point p, u64 k) const {
    Point r;
    while (k) {
      if (k & 1) r = add(r, p);
      p = add(p, p);
      k >>= 1;
    }
    return r;
  }

  Point random_point(std::mt19937_64& rng) const {
    std::uniform_int_distribution<u64> dist(0, l_ - 1);
    while (true) {
      const u64 x = dist(rng);
      const u64 f = rhs(x);
      if (f == 0) return {x, 0, false};
      if (powmod(f, (l_ - 1) / 2, l_) != 1) continue;
      u64 y = sqrt_mod(f, l_);
      if (rng() & 1) y = l_ - y;
      return {x, y, false};
    }
  }

  // Exact order of p, knowing the group order lies in [lo, hi].
  u64 order(const Point& p, u64 lo, u64 hi) const {
    const u64 width = hi - lo;
    const u64 m = isqrt(width) + 1;
    std::unordered_map<u64, std::pair<u64, u64>> baby;  // x -> (j, y) for j P, 1 <= j < m
    Point jp = p;
    for (u64 j = 1; j < m; ++j) {
      if (jp.inf) return exact_order(p, j);
      baby.try_emplace(jp.x, j, jp.y);
      jp = add(jp, p);
    }
    const Point step = mul(p, m);
    Point r = mul(p, lo);
    for (u64 i = 0; i * m <= width + m; ++i, r = add(r, step)) {
      // want (lo + i m + j) P = O, i.e. R = -jP
      if (r.inf) return exact_order(p, lo + i * m);
      auto it = baby.find(r.x);
      if (it == baby.end()) continue;
      const auto [j, y] = it->second;
      const u64 k = (y == r.y) ? lo + i * m - j : lo + i * m + j;  // R = jP or R = -jP
      if (k > 0 && mul(p, k).inf) return exact_order(p, k);
    }
    throw Error(Errc::invalid_input, "no multiple of the point order found in the Hasse interval");
  }

 private:
  u64 exact_order(const Point& p, u64 multiple) const {
    u64 ord = multiple;
    for (auto [q, e] : factor(multiple)) {
      for (unsigned i = 0; i < e && mul(p, ord / q).inf; ++i) ord /= q;
    }
    return ord;
  }

  u64 a_, b_, l_;
};

u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

}  // namespace

u64 count_points_naive(const WeierstrassModel& w, u64 l) {
  require_good(w, l);
  if (l == 2) {
    u64 count = 1;
    const u64 a1 = reduce(w.a1, 2), a2 = reduce(w.a2, 2), a3 = reduce(w.a3, 2), a4 = reduce(w.a4, 2),
              a6 = reduce(w.a6, 2);
    for (u64 x = 0; x < 2; ++x)
      for (u64 y = 0; y < 2; ++y)
        if ((y * y + a1 * x * y + a3 * y + x * x * x + a2 * x * x + a4 * x + a6) % 2 == 0) ++count;
    return count;
  }
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
  const CurveInvariants inv = invariants(w);
  const u64 b2 = reduce(inv.b2, l), b4 = reduce(2 * inv.b4, l), b6 = reduce(inv.b6, l), four = 4 % l;
  std::vector<unsigned char> roots(l, 0);  // number of square roots of each residue
  for (u64 y = 0; y < l; ++y) ++roots[mulmod(y, y, l)];
  u64 count = 1;
  for (u64 x = 0; x < l; ++x) {
    const u64 g = addmod(mulmod(addmod(mulmod(addmod(mulmod(four, x, l), b2, l), x, l), b4, l), x, l), b6, l);
    count += roots[g];
  }
  return count;
}

u64 count_points_bsgs(const WeierstrassModel& w, u64 l) {
  require_good(w, l);
  if (l <= kBsgsMinPrime)
    throw Error(Errc::out_of_range, "BSGS counting needs l > " + std::to_string(kBsgsMinPrime));
  const CurveInvariants inv = invariants(w);
  // y^2 = x^3 - 27 c4 x - 54 c6 is isomorphic to w over F_l for l >= 5
  const u64 a = reduce(BigInt(-27 * inv.c4), l), b = reduce(BigInt(-54 * inv.c6), l);
  u64 nonresidue = 2;
  while (powmod(nonresidue, (l - 1) / 2, l) != l - 1) ++nonresidue;
  const u64 g2 = mulmod(nonresidue, nonresidue, l);
  const ShortCurve curve(a, b, l);
  const ShortCurve twist(mulmod(a, g2, l), mulmod(b, mulmod(g2, nonresidue, l), l), l);

  const u64 span = isqrt(4 * l);  // floor(2 sqrt l)
  const u64 lo = l + 1 - span, hi = l + 1 + span;
  std::mt19937_64 rng(l * 0x9E3779B97F4A7C15ull ^ (a << 1) ^ (b << 3));
  u64 m = 1, m_twist = 1;
  for (int round = 0; round < 400; ++round) {
    if (round % 2 == 0) m = lcm_u64(m, curve.order(curve.random_point(rng), lo, hi));
    else m_twist = lcm_u64(m_twist, twist.order(twist.random_point(rng), lo, hi));
    u64 found = 0, candidates = 0;
    for (u64 n = (lo + m - 1) / m * m; n <= hi; n += m) {
      if ((2 * l + 2 - n) % m_twist == 0) {
        found = n;
        ++candidates;
      }
    }
    if (candidates == 1) return found;
  }
  throw Error(Errc::invalid_input, "BSGS failed to isolate the group order at " + std::to_string(l));
}

u64 count_points(const WeierstrassModel& w, u64 l, u64 crossover) {
  if (l <= std::max(crossover, kBsgsMinPrime)) return count_points_naive(w, l);
  return count_points_bsgs(w, l);
}

FrobeniusData frobenius(const WeierstrassModel& w, u64 l, u64 crossover) {
  const u64 n = count_points(w, l, crossover);
  return {l, static_cast<i64>(l + 1) - static_cast<i64>(n)};
}

BigInt order_over_extension(const FrobeniusData& fd, unsigned n) {
  if (n == 0) throw Error(Errc::invalid_input, "extension degree must be >= 1");
  const BigInt a(static_cast<long>(fd.trace)), q(static_cast<unsigned long>(fd.prime));
  BigInt s_prev = 2, s = a;
  for (unsigned k = 2; k <= n; ++k) {
    BigInt next = a * s - q * s_prev;
    s_prev = std::move(s);
    s = std::move(next);
  }
  return pow(q, n) + 1 - s;
}

bool within_hasse(i64 trace, u64 l) {
  return u128(trace < 0 ? -trace : trace) * u128(trace < 0 ? -trace : trace) <= u128(4) * l;
}

}  // namespace kida
