#include "kida/density.hpp"

#include <algorithm>
#include <cmath>

#include "kida/fields.hpp"
#include "kida/json_util.hpp"

namespace kida {

namespace {

void require_odd_prime(u64 p) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::invalid_modulus, std::to_string(p) + " is not an odd prime");
}

Rational ratio(u64 n, u64 d) {
  Rational q(BigInt(static_cast<unsigned long>(n)), BigInt(static_cast<unsigned long>(d)));
  q.canonicalize();
  return q;
}

}  // namespace

u64 sl2_trace_count(u64 p, u64 t) {
  require_odd_prime(p);
  t %= p;
  u64 count = 0;
  for (u64 a = 0; a < p; ++a)
    for (u64 b = 0; b < p; ++b)
      for (u64 c = 0; c < p; ++c)
        for (u64 d = 0; d < p; ++d)
          if ((a + d) % p == t && (a * d + p * p - b * c) % p == 1) ++count;
  return count;
}

Rational alpha_closed_form(u64 p) {
  require_odd_prime(p);
  return ratio(p * p - p - 1, p * p * p - p * p - p + 1);
}

Rational alpha_brute_force(u64 p) {
  require_odd_prime(p);
  if (p > kAlphaBruteForceMax)
    throw Error(Errc::budget, "brute-force alpha is limited to p <= " + std::to_string(kAlphaBruteForceMax));
  u64 gl = 0, sl = 0, sl_trace2 = 0;
  for (u64 a = 0; a < p; ++a)
    for (u64 b = 0; b < p; ++b)
      for (u64 c = 0; c < p; ++c)
        for (u64 d = 0; d < p; ++d) {
          const u64 det = (a * d + p * p - b * c) % p;
          if (det == 0) continue;
          ++gl;
          if (det != 1) continue;
          ++sl;
          if ((a + d) % p == 2) ++sl_trace2;
        }
  return ratio(sl - sl_trace2, gl);
}

DelangeExponents delange_exponents(u64 p, const Rational& alpha) {
  require_odd_prime(p);
  return {Rational(1), Rational(alpha * static_cast<unsigned long>(p - 1))};
}

Rational predicted_log_exponent(u64 p) {
  require_odd_prime(p);
  return -ratio(p, p * p - 1);
}

Rational stated_beta(u64 p) {
  require_odd_prime(p);
  return ratio(p * p - p + 2, p * p * p - p * p - p + 1);
}

EmpiricalDensity empirical_density(const EllipticCurve& e, u64 p, u64 x, const SweepOptions& opts) {
  EmpiricalDensity out;
  if (x < 2) {
    out.density = 0;
    return out;
  }
  const auto classes = bulk_classify(e, p, x, opts);
  out.prime_count = classes.size() + (p <= x ? 1 : 0);
  for (const auto& c : classes) {
    if (c.in_script_q) ++out.stable_count;
    // Second route: l = 1 mod p, good, a_l != 2 mod p.
    const bool by_trace = c.prime % p == 1 && c.trace && reduce(*c.trace - 2, p) != 0;
    if (by_trace != c.in_script_q) out.routes_agree = false;
  }
  out.density = ratio(out.stable_count, out.prime_count);
  return out;
}

FitResult fit_log_exponent(const std::vector<GRow>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows)
    if (r.g > 0 && r.x >= 3)
      pts.emplace_back(std::log(std::log(static_cast<double>(r.x))),
                       std::log(static_cast<double>(r.g)) - std::log(static_cast<double>(r.x)));
  if (pts.size() < 4) throw Error(Errc::fit_unavailable, "fewer than 4 grid points with g > 0");
  double sx = 0, sy = 0;
  for (const auto& [t, y] : pts) {
    sx += t;
    sy += y;
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [t, y] : pts) {
    sxx += (t - mx) * (t - mx);
    sxy += (t - mx) * (y - my);
  }
  if (sxx == 0) throw Error(Errc::fit_unavailable, "grid has no spread in log log X");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = pts.size();
  return f;
}

DensityReport asymptotic_report(const EllipticCurve& e, u64 p, const std::vector<u64>& grid,
                                const SweepOptions& opts) {
  require_odd_prime(p);
  if (grid.size() < 4) throw Error(Errc::fit_unavailable, "grid needs at least 4 points");
  if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end() ||
      grid.front() < 1)
    throw Error(Errc::invalid_input, "grid must be strictly increasing and positive");
  const u64 xmax = grid.back();
  if (xmax > kDensityGridMax) throw Error(Errc::budget, "grid maximum exceeds " + std::to_string(kDensityGridMax));

  DensityReport r;
  r.p = p;
  r.alpha = alpha_closed_form(p);
  if (p <= kAlphaBruteForceMax) {
    r.alpha_brute = alpha_brute_force(p);
    r.alpha_brute_available = true;
  }
  r.delange = delange_exponents(p, r.alpha);
  r.empirical = empirical_density(e, p, xmax, opts);

  const auto q = script_q_primes(e, p, xmax, opts);
  const auto a = g_coefficients_dfs(q, p, xmax);
  const auto c = conductor_counts_dfs(p, xmax);
  u64 g_acc = 0, m_acc = 0;
  std::size_t gi = 0;
  for (u64 n = 0; n <= xmax && gi < grid.size(); ++n) {
    g_acc += a[n];
    m_acc += c[n];
    if (n == grid[gi]) {
      r.g_table.push_back({n, g_acc});
      r.M_table.push_back({n, pow(BigInt(static_cast<unsigned long>(n)), static_cast<unsigned long>(p - 1)), m_acc});
      if (g_acc > m_acc) r.g_bounded_by_M = false;
      ++gi;
    }
  }
  r.fit = fit_log_exponent(r.g_table);
  r.fitted_exponent = r.fit.slope;
  r.predicted_exponent = r.delange.log_exponent().get_d();
  r.stated_beta = stated_beta(p);
  r.proof_beta = -predicted_log_exponent(p);
  return r;
}

nlohmann::json to_json(const DensityReport& r) {
  nlohmann::json g = nlohmann::json::array(), m = nlohmann::json::array(), lower = nlohmann::json::array();
  for (const auto& row : r.g_table) g.push_back({{"X", row.x}, {"g", row.g}});
  for (std::size_t i = 0; i < r.M_table.size(); ++i) {
    const auto& row = r.M_table[i];
    m.push_back({{"X", row.x}, {"discriminant_bound", big_json(row.disc)}, {"M", row.M}});
    lower.push_back({{"discriminant_bound", big_json(row.disc)}, {"N_E_lower_bound", r.g_table[i].g}});
  }
  return {{"p", r.p},
          {"alpha", rational_json(r.alpha)},
          {"alpha_brute", r.alpha_brute_available ? rational_json(r.alpha_brute) : nlohmann::json()},
          {"delange_pair", {{"a", rational_json(r.delange.a)}, {"b", rational_json(r.delange.b)}}},
          {"empirical_density",
           {{"value", rational_json(r.empirical.density)},
            {"approx", r.empirical.density.get_d()},
            {"stable_primes", r.empirical.stable_count},
            {"primes", r.empirical.prime_count},
            {"routes_agree", r.empirical.routes_agree}}},
          {"g_table", g},
          {"M_table", m},
          {"N_E_lower_bound", lower},
          {"g_bounded_by_M", r.g_bounded_by_M},
          {"fitted_exponent", r.fitted_exponent},
          {"fit_points", r.fit.points},
          {"predicted_exponent", r.predicted_exponent},
          {"beta",
           {{"from_proof", rational_json(r.proof_beta)},
            {"as_stated", rational_json(r.stated_beta)},
            {"consistent", r.proof_beta == r.stated_beta}}}};
}

}  // namespace kida
