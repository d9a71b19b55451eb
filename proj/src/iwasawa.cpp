#include "kida/iwasawa.hpp"

#include <algorithm>

namespace kida {

namespace {

BigInt modulus_for(u64 p, unsigned precision) { return pow(BigInt(static_cast<unsigned long>(p)), precision); }

}  // namespace

CharSeries::CharSeries(u64 p, std::vector<BigInt> coeffs, unsigned precision, bool exact)
    : p_(p), precision_(precision), exact_(exact), coeffs_(std::move(coeffs)) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::invalid_modulus, "series prime must be an odd prime");
  if (precision == 0) throw Error(Errc::invalid_input, "precision must be at least 1");
  if (!exact_) {
    const BigInt mod = modulus_for(p_, precision_);
    for (auto& c : coeffs_) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  }
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigInt CharSeries::coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigInt(0); }

std::optional<unsigned> CharSeries::valuation(std::size_t i) const {
  const BigInt c = coefficient(i);
  if (c == 0) return std::nullopt;
  return padic_valuation(c, p_);
}

CharSeries operator*(const CharSeries& f, const CharSeries& g) {
  if (f.p_ != g.p_) throw Error(Errc::invalid_input, "series over different primes");
  std::vector<BigInt> prod(f.coeffs_.empty() || g.coeffs_.empty() ? 0 : f.coeffs_.size() + g.coeffs_.size() - 1);
  for (std::size_t i = 0; i < f.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < g.coeffs_.size(); ++j) prod[i + j] += f.coeffs_[i] * g.coeffs_[j];
  return {f.p_, std::move(prod), std::min(f.precision_, g.precision_), f.exact_ && g.exact_};
}

CharSeries from_elementary(u64 p, const std::vector<unsigned>& p_powers,
                           const std::vector<DistinguishedFactor>& polys, unsigned precision) {
  const BigInt bp(static_cast<unsigned long>(p));
  unsigned total = 0;
  for (unsigned m : p_powers) total += m;
  CharSeries result(p, {pow(bp, total)}, precision, true);
  for (const auto& factor : polys) {
    const auto& c = factor.coeffs;
    if (c.size() < 2 || c.back() != 1)
      throw Error(Errc::invalid_input, "distinguished polynomial must be monic of degree >= 1");
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (!mpz_divisible_p(c[i].get_mpz_t(), bp.get_mpz_t()))
        throw Error(Errc::invalid_input, "non-leading coefficient not divisible by p");
    const CharSeries f(p, c, precision, true);
    for (unsigned k = 0; k < factor.multiplicity; ++k) result = result * f;
  }
  return result;
}

IwasawaInvariants iwasawa_invariants(const CharSeries& f) {
  IwasawaInvariants out;
  std::optional<unsigned> mu;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    const auto v = f.valuation(i);
    if (v && (!mu || *v < *mu)) {
      mu = v;
      out.lambda = static_cast<unsigned>(i);
    }
  }
  if (!mu) throw Error(Errc::indeterminate, "series vanishes at the tracked precision");
  out.mu = *mu;
  const auto v0 = f.valuation(0);
  if (v0) {
    out.euler_char_defined = true;
    out.euler_char_valuation = v0;
  } else if (f.exact()) {
    out.euler_char_defined = false;
  }
  return out;
}

bool euler_char_defined(const CharSeries& f) {
  if (f.coefficient(0) != 0) return true;
  if (f.exact()) return false;
  throw Error(Errc::indeterminate,
              "constant term is zero mod p^" + std::to_string(f.precision()) + " but not known to vanish");
}

BigInt euler_characteristic(const CharSeries& f) {
  if (!euler_char_defined(f)) throw Error(Errc::euler_char_undefined, "constant term vanishes");
  return pow(BigInt(static_cast<unsigned long>(f.p())), *f.valuation(0));
}

bool mu_lambda_zero(const CharSeries& f) {
  if (!euler_char_defined(f)) throw Error(Errc::euler_char_undefined, "constant term vanishes");
  return *f.valuation(0) == 0;
}

nlohmann::json to_json(const CharSeries& f) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : f.coeffs()) {
    if (c.fits_slong_p()) coeffs.push_back(c.get_si());
    else coeffs.push_back(c.get_str());
  }
  return {{"p", f.p()}, {"precision", f.precision()}, {"exact", f.exact()}, {"coeffs", coeffs}};
}

CharSeries series_from_json(const nlohmann::json& j) {
  try {
    const u64 p = j.at("p").get<u64>();
    const unsigned precision = j.contains("precision") ? j.at("precision").get<unsigned>() : kDefaultSeriesPrecision;
    const bool exact = j.contains("exact") && j.at("exact").get<bool>();
    std::vector<BigInt> coeffs;
    for (const auto& c : j.at("coeffs")) {
      if (c.is_string()) coeffs.emplace_back(c.get<std::string>(), 10);
      else coeffs.emplace_back(static_cast<long>(c.get<i64>()));
    }
    return {p, std::move(coeffs), precision, exact};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema, std::string("series JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(Errc::schema, std::string("series JSON coefficient: ") + e.what());
  }
}

}  // namespace kida
