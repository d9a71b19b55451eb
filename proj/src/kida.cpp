#include "kida/kida.hpp"

#include <algorithm>
#include <set>

#include "kida/euler_char.hpp"
#include "kida/json_util.hpp"

namespace kida {

std::string_view to_string(AdditiveStability s) {
  switch (s) {
    case AdditiveStability::satisfied_by_p_ge_5: return "satisfied_by_p>=5";
    case AdditiveStability::satisfied_by_unramified: return "satisfied_by_unramified";
    case AdditiveStability::unresolved: return "unresolved";
  }
  return "?";
}

std::string_view to_string(Tristate t) {
  switch (t) {
    case Tristate::yes: return "true";
    case Tristate::no: return "false";
    case Tristate::unresolved: return "unresolved";
  }
  return "?";
}

bool HypothesisReport::blocking() const {
  return prime_to_p_defect != Tristate::yes || additive_stability == AdditiveStability::unresolved ||
         base_mu_zero != true;
}

namespace {

BigInt big(u64 v) { return BigInt(static_cast<unsigned long>(v)); }

std::vector<BigInt> twist_candidates(u64 p) {
  const BigInt d0 = (p % 4 == 1) ? big(p) : BigInt(-static_cast<long>(p));
  std::vector<BigInt> out{d0};
  for (long n = 1; n <= 163; ++n)
    for (long d : {-n, n})
      if (d != 1 && BigInt(d) != d0 && is_squarefree(BigInt(d))) out.emplace_back(d);
  return out;
}

std::optional<GoodTwist> search_good_twist(const EllipticCurve& e, u64 p) {
  for (const BigInt& d : twist_candidates(p)) {
    const EllipticCurve t(quadratic_twist(e.model(), d));
    if (t.has_good_reduction(p)) return GoodTwist{d, t.model()};
  }
  return std::nullopt;
}

std::set<u64> tame_union(const std::vector<CyclicExtension>& exts) {
  std::set<u64> s;
  for (const auto& x : exts) s.insert(x.tame_ramified.begin(), x.tame_ramified.end());
  return s;
}

void resolve_base(const EllipticCurve& e, u64 p, const BaseInputs& base, HypothesisReport& h) {
  if (base.mu) h.base_mu_zero = *base.mu == 0;
  if (base.mu_lambda_zero) {
    h.base_mu_lambda_zero = base.mu_lambda_zero;
    if (*base.mu_lambda_zero) h.base_mu_zero = true;
    h.base_source = "external";
    return;
  }
  try {
    const auto ef = euler_char_factors(e, p, base.sha_p_order, base.analytic_rank_zero);
    switch (mu_lambda_vanish(ef)) {
      case Vanishing::zero:
        h.base_mu_lambda_zero = true;
        h.base_mu_zero = true;
        h.base_source = "euler-characteristic";
        return;
      case Vanishing::nonzero:
        h.base_mu_lambda_zero = false;
        h.base_source = "euler-characteristic";
        return;
      case Vanishing::unresolved:
        h.notes.push_back("Euler characteristic criterion unresolved: sha or analytic rank not supplied");
        break;
    }
  } catch (const Error& err) {
    h.notes.push_back(std::string("Euler characteristic route unavailable: ") + err.what());
  }
  h.base_source = base.mu ? "external" : "unresolved";
}

void require_same_prime(u64 p, const std::vector<CyclicExtension>& exts) {
  if (exts.empty()) throw Error(Errc::invalid_input, "no extension given");
  for (const auto& x : exts)
    if (x.p != p) throw Error(Errc::invalid_input, "extension degree differs from p");
}

// Exponent matrix over the union of ramified places (tame primes, then p).
std::vector<std::vector<u64>> exponent_rows(const std::vector<CyclicExtension>& exts, const std::vector<u64>& places) {
  std::vector<std::vector<u64>> rows;
  for (const auto& x : exts) {
    std::vector<u64> row(places.size() + 1, 0);
    for (std::size_t i = 0; i < x.tame_ramified.size(); ++i) {
      const auto pos = std::lower_bound(places.begin(), places.end(), x.tame_ramified[i]) - places.begin();
      row[static_cast<std::size_t>(pos)] = x.exponents[i];
    }
    if (x.wild_at_p) row.back() = x.wild_exponent;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t rank_mod_p(std::vector<std::vector<u64>> rows, u64 p) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const u64 inv = invmod(rows[rank][c] % p, p);
    for (auto& v : rows[rank]) v = mulmod(v, inv, p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] % p == 0) continue;
      const u64 factor = rows[r][c] % p;
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] = submod(rows[r][k] % p, mulmod(factor, rows[rank][k], p), p);
    }
    ++rank;
  }
  return rank;
}

// chi(x) with the component at `skip` dropped.
u64 partial_value(const CyclicExtension& x, u64 arg, u64 skip) {
  CyclicExtension y = x;
  y.tame_ramified.clear();
  y.exponents.clear();
  for (std::size_t i = 0; i < x.tame_ramified.size(); ++i)
    if (x.tame_ramified[i] != skip) {
      y.tame_ramified.push_back(x.tame_ramified[i]);
      y.exponents.push_back(x.exponents[i]);
    }
  return y.character_value(arg);
}

// Residue degree in the compositum of a ramified l: p when some character
// unramified at l (a combination killing the l-component) is nontrivial
// on l, else 1.
unsigned ramified_residue_degree(const std::vector<CyclicExtension>& exts, u64 l, u64 p) {
  std::vector<u64> a, v;
  for (const auto& x : exts) {
    u64 ex = 0;
    for (std::size_t i = 0; i < x.tame_ramified.size(); ++i)
      if (x.tame_ramified[i] == l) ex = x.exponents[i];
    a.push_back(ex);
    v.push_back(partial_value(x, l, l));
  }
  const auto j0 = static_cast<std::size_t>(std::find_if(a.begin(), a.end(), [](u64 t) { return t != 0; }) - a.begin());
  const u64 inv = invmod(a[j0], p);
  for (std::size_t j = 0; j < exts.size(); ++j) {
    if (j == j0) continue;
    const u64 c0 = submod(0, mulmod(a[j], inv, p), p);
    if (addmod(v[j], mulmod(c0, v[j0], p), p) != 0) return static_cast<unsigned>(p);
  }
  return 1;
}

}  // namespace

HypothesisReport check_hypotheses(const EllipticCurve& e, u64 p, const std::vector<CyclicExtension>& exts,
                                  const BaseInputs& base) {
  require_same_prime(p, exts);
  HypothesisReport h;
  h.p = p;
  h.reduction_at_p = e.local_data(p).type;
  h.additive_at_p = h.reduction_at_p == ReductionType::additive;
  h.potentially_good_at_p = potentially_good(e.model(), p);

  if (!h.additive_at_p && h.reduction_at_p == ReductionType::good) {
    h.prime_to_p_defect = Tristate::yes;
    h.notes.push_back("good reduction at p: the semistable case, no twist needed");
  } else if (!h.potentially_good_at_p) {
    h.prime_to_p_defect = Tristate::no;
    h.notes.push_back("potentially multiplicative at p: no extension gives good reduction");
  } else {
    h.good_twist = search_good_twist(e, p);
    if (h.good_twist)
      h.prime_to_p_defect = Tristate::yes;
    else if (p >= 5) {
      h.prime_to_p_defect = Tristate::yes;
      h.notes.push_back("p >= 5: the semistability defect has order prime to p");
    } else {
      h.prime_to_p_defect = Tristate::unresolved;
      h.notes.push_back("no quadratic twist is good at p; higher-degree defect not analysed");
    }
  }

  for (const auto& l : e.bad_primes())
    if (l != p && e.local_data(l).type == ReductionType::additive) h.additive_primes.push_back(l);
  if (p >= 5) {
    h.additive_stability = AdditiveStability::satisfied_by_p_ge_5;
  } else {
    const auto ram = tame_union(exts);
    const bool hit = std::any_of(h.additive_primes.begin(), h.additive_primes.end(),
                                 [&](u64 l) { return ram.count(l) > 0; });
    h.additive_stability = hit ? AdditiveStability::unresolved : AdditiveStability::satisfied_by_unramified;
  }

  resolve_base(e, p, base, h);
  return h;
}

HypothesisReport check_hypotheses(const EllipticCurve& e, u64 p, const CyclicExtension& ext, const BaseInputs& base) {
  return check_hypotheses(e, p, std::vector<CyclicExtension>{ext}, base);
}

bool split_over_extension(const EllipticCurve& e, u64 l, unsigned f) {
  const auto t = e.local_data(l).type;
  if (t != ReductionType::split_multiplicative && t != ReductionType::nonsplit_multiplicative)
    throw Error(Errc::wrong_operation, "reduction at " + std::to_string(l) + " is not multiplicative");
  return f % 2 == 0 || t == ReductionType::split_multiplicative;
}

KidaResult lambda_transfer(const BigInt& lambda_K, const EllipticCurve& e, const std::vector<CyclicExtension>& exts,
                           const HypothesisReport& hyp, bool acknowledge_unresolved) {
  const u64 p = hyp.p;
  require_same_prime(p, exts);
  if (lambda_K < 0) throw Error(Errc::invalid_input, "lambda_K must be nonnegative");
  if (hyp.blocking() && !acknowledge_unresolved)
    throw Error(Errc::hypothesis_blocked, "transfer hypotheses not established; see the hypothesis report");

  const auto tame = tame_union(exts);
  std::vector<u64> places(tame.begin(), tame.end());
  const std::size_t k = exts.size();
  if (rank_mod_p(exponent_rows(exts, places), p) != k)
    throw Error(Errc::invalid_input, "characters are not independent");

  KidaResult kr;
  kr.p = p;
  kr.lambda_K = lambda_K;
  kr.degree = pow(big(p), static_cast<unsigned long>(k));
  kr.acknowledged_override = hyp.blocking();
  kr.p1_term = 0;
  kr.p2_term = 0;
  for (u64 l : places) {
    LocalWitness w;
    w.prime = l;
    w.e = p;
    w.cls = classify_prime(e, p, l).cls;
    w.reduction = e.has_good_reduction(l) ? ReductionType::good : e.local_data(l).type;
    const unsigned m = cyclotomic_split_count(l, p).m;
    w.w_count = pow(big(p), static_cast<unsigned long>(m + k - 1));
    const unsigned f = k == 1 ? 1 : ramified_residue_degree(exts, l, p);
    const BigInt per_prime = w.w_count * static_cast<unsigned long>(p - 1);
    w.p1_contribution = 0;
    w.p2_contribution = 0;
    if (w.reduction == ReductionType::split_multiplicative ||
        w.reduction == ReductionType::nonsplit_multiplicative) {
      w.in_p1 = split_over_extension(e, l, f);
      if (w.in_p1) w.p1_contribution = per_prime;
    } else if (w.reduction == ReductionType::good) {
      w.in_p2 = p2_membership(e, p, l, f);
      if (w.in_p2) w.p2_contribution = 2 * per_prime;
    }
    kr.p1_term += w.p1_contribution;
    kr.p2_term += w.p2_contribution;
    kr.witnesses.push_back(std::move(w));
  }
  kr.lambda_L = kr.degree * lambda_K + kr.p1_term + kr.p2_term;
  return kr;
}

KidaResult lambda_transfer(const BigInt& lambda_K, const EllipticCurve& e, const CyclicExtension& ext,
                           const HypothesisReport& hyp, bool acknowledge_unresolved) {
  return lambda_transfer(lambda_K, e, std::vector<CyclicExtension>{ext}, hyp, acknowledge_unresolved);
}

RankBound rank_bound(const KidaResult& kr) { return {kr.lambda_L, kr.lambda_L == 0}; }

bool stable_extension_test(const EllipticCurve& e, u64 p, const CyclicExtension& ext) {
  if (ext.p != p) throw Error(Errc::invalid_input, "extension degree differs from p");
  if (ext.wild_at_p) return false;
  return std::all_of(ext.tame_ramified.begin(), ext.tame_ramified.end(),
                     [&](u64 l) { return classify_prime(e, p, l).cls == PrimeClassKind::Q3; });
}

nlohmann::json to_json(const HypothesisReport& h) {
  auto opt = [](const std::optional<bool>& b) { return b ? nlohmann::json(*b) : nlohmann::json("unresolved"); };
  nlohmann::json twist = nullptr;
  if (h.good_twist) twist = {{"d", big_json(h.good_twist->d)}, {"model", h.good_twist->model.to_string()}};
  return {{"p", h.p},
          {"reduction_at_p", to_string(h.reduction_at_p)},
          {"additive_at_p", h.additive_at_p},
          {"potentially_good_at_p", h.potentially_good_at_p},
          {"good_twist", twist},
          {"prime_to_p_defect", to_string(h.prime_to_p_defect)},
          {"additive_stability", to_string(h.additive_stability)},
          {"additive_primes", h.additive_primes},
          {"base_mu_lambda_zero", opt(h.base_mu_lambda_zero)},
          {"base_mu_zero", opt(h.base_mu_zero)},
          {"base_source", h.base_source},
          {"blocking", h.blocking()},
          {"notes", h.notes}};
}

nlohmann::json to_json(const KidaResult& k) {
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& w : k.witnesses)
    ws.push_back({{"l", w.prime},
                  {"reduction", to_string(w.reduction)},
                  {"class", to_string(w.cls)},
                  {"e", w.e},
                  {"w_count", big_json(w.w_count)},
                  {"in_P1", w.in_p1},
                  {"in_P2", w.in_p2},
                  {"p1_contribution", big_json(w.p1_contribution)},
                  {"p2_contribution", big_json(w.p2_contribution)}});
  return {{"p", k.p},
          {"lambda_K", big_json(k.lambda_K)},
          {"lambda_L", big_json(k.lambda_L)},
          {"degree", big_json(k.degree)},
          {"p1_term", big_json(k.p1_term)},
          {"p2_term", big_json(k.p2_term)},
          {"witnesses", ws},
          {"acknowledged_override", k.acknowledged_override}};
}

}  // namespace kida
