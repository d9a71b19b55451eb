#include "kida/classify.hpp"

#include <ostream>

namespace kida {

std::string_view to_string(PrimeClassKind k) {
  switch (k) {
    case PrimeClassKind::Q1: return "Q1";
    case PrimeClassKind::Q2: return "Q2";
    case PrimeClassKind::Q3: return "Q3";
  }
  return "?";
}

namespace {

void require_odd_prime(u64 p) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::invalid_modulus, std::to_string(p) + " is not an odd prime");
}

PrimeClass classify_from_trace(u64 p, u64 l, std::optional<i64> trace) {
  PrimeClass pc;
  pc.prime = l;
  pc.trace = trace;
  if (!trace) {
    pc.cls = PrimeClassKind::Q1;
    return pc;
  }
  const i64 count = static_cast<i64>(l + 1) - *trace;
  pc.cls = count % static_cast<i64>(p) == 0 ? PrimeClassKind::Q2 : PrimeClassKind::Q3;
  pc.in_script_q = pc.cls == PrimeClassKind::Q3 && l % p == 1;
  return pc;
}

}  // namespace

PrimeClass classify_prime(const EllipticCurve& e, u64 p, u64 l, u64 crossover) {
  require_odd_prime(p);
  if (l == p) throw Error(Errc::excluded_prime, "l must differ from p");
  if (!is_prime(l)) throw Error(Errc::invalid_modulus, std::to_string(l) + " is not prime");
  if (!e.has_good_reduction(l)) return classify_from_trace(p, l, std::nullopt);
  return classify_from_trace(p, l, frobenius(e.model(), l, crossover).trace);
}

PrimeClass classify_prime(const WeierstrassModel& e, u64 p, u64 l) { return classify_prime(EllipticCurve(e), p, l); }

bool p2_membership(const EllipticCurve& e, u64 p, u64 l, unsigned f) {
  require_odd_prime(p);
  if (l == p) throw Error(Errc::excluded_prime, "l must differ from p");
  if (!e.has_good_reduction(l))
    throw Error(Errc::bad_reduction, "P2 membership needs good reduction at " + std::to_string(l));
  const BigInt n = order_over_extension(frobenius(e.model(), l), f);
  return mpz_divisible_ui_p(n.get_mpz_t(), p) != 0;
}

bool p2_membership(const WeierstrassModel& e, u64 p, u64 l, unsigned f) {
  return p2_membership(EllipticCurve(e), p, l, f);
}

CyclotomicSplitting cyclotomic_split_count(u64 l, u64 p) {
  require_odd_prime(p);
  if (l == p) throw Error(Errc::excluded_prime, "l must differ from p");
  const BigInt n = pow(BigInt(static_cast<unsigned long>(l)), static_cast<unsigned long>(p - 1)) - 1;
  return {l, padic_valuation(n, p) - 1};
}

std::vector<std::optional<i64>> traces(const EllipticCurve& e, const std::vector<u64>& primes,
                                       const SweepOptions& opts) {
  std::map<u64, i64> cached;
  if (opts.cache) cached = opts.cache->load(e.model());
  auto result = parallel_map(primes.size(), opts.parallelism, [&](std::size_t i) -> std::optional<i64> {
    const u64 l = primes[i];
    if (!e.has_good_reduction(l)) return std::nullopt;
    if (auto it = cached.find(l); it != cached.end()) return it->second;
    return frobenius(e.model(), l, opts.crossover).trace;
  });
  if (opts.cache) {
    std::map<u64, i64> fresh;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (result[i] && !cached.count(primes[i])) fresh.emplace(primes[i], *result[i]);
    if (!fresh.empty()) opts.cache->append(e.model(), fresh);
  }
  return result;
}

std::vector<PrimeClass> bulk_classify(const EllipticCurve& e, u64 p, u64 x, const SweepOptions& opts) {
  require_odd_prime(p);
  if (x < 2) return {};
  std::vector<u64> primes;
  for (u64 l : sieve_primes(x))
    if (l != p) primes.push_back(l);
  const auto tr = traces(e, primes, opts);
  std::vector<PrimeClass> out;
  out.reserve(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) out.push_back(classify_from_trace(p, primes[i], tr[i]));
  return out;
}

std::vector<u64> script_q_primes(const EllipticCurve& e, u64 p, u64 x, const SweepOptions& opts) {
  require_odd_prime(p);
  if (x < 2) return {};
  std::vector<u64> candidates;
  for (u64 l : sieve_primes(x))
    if (l % p == 1) candidates.push_back(l);
  const auto tr = traces(e, candidates, opts);
  std::vector<u64> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (classify_from_trace(p, candidates[i], tr[i]).in_script_q) out.push_back(candidates[i]);
  return out;
}

void write_classification_csv(std::ostream& os, const std::vector<PrimeClass>& classes) {
  os << "l,class,a_l,in_script_Q\n";
  for (const auto& c : classes) {
    os << c.prime << ',' << to_string(c.cls) << ',';
    if (c.trace) os << *c.trace;
    os << ',' << (c.in_script_q ? "true" : "false") << '\n';
  }
}

}  // namespace kida
