#include "kida/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kida/cache.hpp"
#include "kida/classify.hpp"
#include "kida/density.hpp"
#include "kida/euler_char.hpp"
#include "kida/fields.hpp"
#include "kida/json_util.hpp"
#include "kida/kida.hpp"
#include "kida/reference.hpp"

namespace kida {

using nlohmann::json;

WeierstrassModel parse_curve(std::string_view text) {
  WeierstrassModel w = WeierstrassModel::parse(text);
  (void)invariants(w);
  return w;
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::classify: return "classify";
    case Subcommand::kida: return "kida";
    case Subcommand::euler_char: return "euler-char";
    case Subcommand::enumerate_fields: return "enumerate-fields";
    case Subcommand::density: return "density";
    case Subcommand::report: return "report";
  }
  return "?";
}

// Everything a subcommand needs beyond the raw config.
struct Context {
  const RunConfig& cfg;
  std::optional<TraceCache> cache;
  SweepOptions sweep;
  std::optional<ReferenceDataset> reference;

  explicit Context(const RunConfig& c) : cfg(c) {
    if (!c.no_cache) {
      auto dir = c.cache_dir ? c.cache_dir : TraceCache::directory_from_env();
      if (dir) cache.emplace(*dir);
    }
    sweep.parallelism.workers = c.workers;
    sweep.cache = cache ? &*cache : nullptr;
    const auto path = c.reference_data.empty() ? bundled_reference_path() : c.reference_data;
    if (!c.reference_data.empty() || std::filesystem::exists(path)) reference = ingest_reference(path);
  }

  EllipticCurve curve() const {
    if (!cfg.curve) throw UsageError(std::string(subcommand_name(cfg.subcommand)) + " needs --curve");
    return EllipticCurve(*cfg.curve);
  }

  const ReferenceRecord* record(const EllipticCurve& e) const { return reference ? reference->find(e, cfg.p) : nullptr; }
};

std::optional<BigInt> parse_sha(const std::string& s) {
  if (s == "unknown") return std::nullopt;
  BigInt v;
  if (v.set_str(s, 10) != 0) throw UsageError("--sha expects an integer or \"unknown\"");
  return v;
}

// Flags win; otherwise the reference record; otherwise nothing.
struct ExternalInputs {
  BaseInputs base;
  std::optional<BigInt> lambda_base;
  json provenance = json::object();
};

ExternalInputs external_inputs(const Context& ctx, const EllipticCurve& e) {
  ExternalInputs ext;
  const auto* rec = ctx.record(e);
  const auto& c = ctx.cfg;
  auto note = [&](const char* key, const json& value, bool from_flag) {
    ext.provenance[key] = {{"value", value}, {"source", from_flag ? "command line" : rec->source_note}};
  };
  if (c.sha) {
    ext.base.sha_p_order = parse_sha(*c.sha);
    note("sha_p_order", *c.sha, true);
  } else if (rec) {
    ext.base.sha_p_order = rec->sha_p_order;
    note("sha_p_order", rec->sha_p_order ? big_json(*rec->sha_p_order) : json("unknown"), false);
  }
  if (c.analytic_rank) {
    ext.base.analytic_rank_zero = *c.analytic_rank == 0;
    note("analytic_rank", *c.analytic_rank, true);
  } else if (rec) {
    ext.base.analytic_rank_zero = rec->analytic_rank == 0;
    note("analytic_rank", rec->analytic_rank, false);
  }
  if (c.mu_base) {
    ext.base.mu = c.mu_base;
    note("mu_base", *c.mu_base, true);
  } else if (rec && rec->mu_base) {
    ext.base.mu = rec->mu_base;
    note("mu_base", *rec->mu_base, false);
  }
  if (c.lambda_base) {
    ext.lambda_base = c.lambda_base;
    note("lambda_base", big_json(*c.lambda_base), true);
  } else if (rec && rec->lambda_base) {
    ext.lambda_base = BigInt(static_cast<unsigned long>(*rec->lambda_base));
    note("lambda_base", *rec->lambda_base, false);
  }
  return ext;
}

json header(const RunConfig& c, const char* command) {
  json j = {{"schema", 1}, {"command", command}, {"p", c.p}};
  if (c.curve) j["curve"] = c.curve->to_string();
  return j;
}

json local_json(const LocalReductionData& d) {
  return {{"l", d.prime},
          {"reduction", to_string(d.type)},
          {"kodaira", d.kodaira.to_string()},
          {"tamagawa", d.tamagawa},
          {"conductor_exponent", d.conductor_exponent},
          {"v_disc", d.v_disc}};
}

std::vector<CyclicExtension> selected_fields(const RunConfig& c) {
  auto all = enumerate_extensions(c.p, c.ramified, c.wild);
  if (all.empty()) throw UsageError("kida needs at least one ramified place (--ramified or --wild)");
  if (c.exponents.empty()) return all;
  std::vector<CyclicExtension> out;
  for (const auto& x : all) {
    std::vector<u64> v = x.exponents;
    if (x.wild_at_p) v.push_back(x.wild_exponent);
    if (v == c.exponents) out.push_back(x);
  }
  if (out.empty()) throw UsageError("--exponents does not name a normalised character of these primes");
  return out;
}

BigInt resolve_lambda_K(const ExternalInputs& ext, const HypothesisReport& h) {
  if (ext.lambda_base) return *ext.lambda_base;
  if (h.base_mu_lambda_zero == true) return 0;
  throw Error(Errc::hypothesis_blocked, "lambda_p(E/Q) is unknown; pass --lambda-base");
}

json cmd_kida(const Context& ctx) {
  const auto& c = ctx.cfg;
  const EllipticCurve e = ctx.curve();
  const auto ext = external_inputs(ctx, e);
  const auto fields = selected_fields(c);
  json out = header(c, "kida");
  out["external_inputs"] = ext.provenance;
  json results = json::array();
  std::optional<json> hyp_json;
  for (const auto& field : fields) {
    const auto h = check_hypotheses(e, c.p, field, ext.base);
    if (!hyp_json) hyp_json = to_json(h);
    const BigInt lambda_K = resolve_lambda_K(ext, h);
    const auto kr = lambda_transfer(lambda_K, e, field, h, c.acknowledge_unresolved);
    const auto rb = rank_bound(kr);
    json r = {{"field", to_json(field)},
              {"hypotheses", to_json(h)},
              {"kida", to_json(kr)},
              {"lambda_L", big_json(kr.lambda_L)},
              {"stable", stable_extension_test(e, c.p, field)},
              {"rank_bound", {{"bound", big_json(rb.bound)}, {"rank_is_zero", rb.rank_is_zero}}}};
    results.push_back(std::move(r));
  }
  out["hypotheses"] = *hyp_json;
  out["results"] = results;
  return out;
}

json cmd_euler_char(const Context& ctx) {
  const auto& c = ctx.cfg;
  const EllipticCurve e = ctx.curve();
  const auto ext = external_inputs(ctx, e);
  const auto ef = euler_char_factors(e, c.p, ext.base.sha_p_order, ext.base.analytic_rank_zero);
  json out = header(c, "euler-char");
  out["external_inputs"] = ext.provenance;
  out["factors"] = to_json(ef);
  out["mu_lambda_vanish"] = to_string(mu_lambda_vanish(ef));
  const auto v = euler_char_valuation(ef);
  out["euler_char_valuation"] = v ? json(*v) : json("unresolved");
  return out;
}

std::vector<PrimeClass> run_classify(const Context& ctx, const EllipticCurve& e) {
  return bulk_classify(e, ctx.cfg.p, ctx.cfg.max_prime, ctx.sweep);
}

json classes_json(const std::vector<PrimeClass>& classes) {
  json arr = json::array();
  for (const auto& pc : classes)
    arr.push_back({{"l", pc.prime},
                   {"class", to_string(pc.cls)},
                   {"a_l", pc.trace ? json(*pc.trace) : json()},
                   {"in_script_Q", pc.in_script_q}});
  return arr;
}

json cmd_enumerate(const Context& ctx) {
  const auto& c = ctx.cfg;
  json out = header(c, "enumerate-fields");
  out["max_disc"] = big_json(c.max_disc);
  json arr = json::array();
  for (const auto& f : enumerate_fields(c.p, c.max_disc)) arr.push_back(to_json(f));
  out["count"] = arr.size();
  out["fields"] = arr;
  return out;
}

DensityReport run_density(const Context& ctx, const EllipticCurve& e) {
  return asymptotic_report(e, ctx.cfg.p, ctx.cfg.grid, ctx.sweep);
}

json cmd_report(const Context& ctx) {
  const auto& c = ctx.cfg;
  const EllipticCurve e = ctx.curve();
  const auto ext = external_inputs(ctx, e);
  json out = header(c, "report");
  const auto& inv = e.invariants();
  out["minimal_model"] = e.model().to_string();
  out["invariants"] = {{"c4", big_json(inv.c4)}, {"c6", big_json(inv.c6)}, {"discriminant", big_json(inv.disc)},
                       {"j", rational_json(inv.j)}};
  json local = json::array();
  for (u64 l : e.bad_primes()) local.push_back(local_json(e.local_data(l)));
  out["bad_primes"] = local;
  out["external_inputs"] = ext.provenance;
  try {
    const auto ef = euler_char_factors(e, c.p, ext.base.sha_p_order, ext.base.analytic_rank_zero);
    out["euler_char"] = {{"factors", to_json(ef)}, {"mu_lambda_vanish", to_string(mu_lambda_vanish(ef))}};
  } catch (const Error& err) {
    out["euler_char"] = {{"error", err.what()}};
  }
  const auto classes = run_classify(ctx, e);
  u64 n1 = 0, n2 = 0, n3 = 0;
  std::vector<u64> stable;
  for (const auto& pc : classes) {
    (pc.cls == PrimeClassKind::Q1 ? n1 : pc.cls == PrimeClassKind::Q2 ? n2 : n3)++;
    if (pc.in_script_q) stable.push_back(pc.prime);
  }
  out["classification"] = {{"bound", c.max_prime}, {"Q1", n1}, {"Q2", n2}, {"Q3", n3}, {"stable_primes", stable}};
  json transfers = json::array();
  for (std::size_t i = 0; i < stable.size() && i < 5; ++i) {
    const auto field = enumerate_extensions(c.p, {stable[i]}).front();
    const auto h = check_hypotheses(e, c.p, field, ext.base);
    json t = {{"field", to_json(field)}, {"hypotheses_blocking", h.blocking()}};
    if (!h.blocking()) {
      try {
        const auto kr = lambda_transfer(resolve_lambda_K(ext, h), e, field, h);
        t["lambda_L"] = big_json(kr.lambda_L);
        t["rank_is_zero"] = rank_bound(kr).rank_is_zero;
      } catch (const Error& err) {
        t["error"] = err.what();
      }
    }
    transfers.push_back(std::move(t));
  }
  out["transfers"] = transfers;
  const Rational alpha = alpha_closed_form(c.p);
  out["alpha"] = rational_json(alpha);
  if (c.p <= kAlphaBruteForceMax) out["alpha_brute"] = rational_json(alpha_brute_force(c.p));
  out["predicted_exponent"] = rational_json(predicted_log_exponent(c.p));
  out["beta"] = {{"from_proof", rational_json(-predicted_log_exponent(c.p))},
                 {"as_stated", rational_json(stated_beta(c.p))}};
  return out;
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (!c.output) {
    out << text;
    return;
  }
  std::ofstream file(*c.output);
  if (!file) throw Error(Errc::io, "cannot write " + c.output->string());
  file << text;
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

std::string density_csv(const DensityReport& r) {
  std::ostringstream os;
  os << "X,g,discriminant_bound,M\n";
  for (std::size_t i = 0; i < r.g_table.size(); ++i)
    os << r.g_table[i].x << ',' << r.g_table[i].g << ',' << r.M_table[i].disc.get_str() << ',' << r.M_table[i].M
       << '\n';
  return os.str();
}

std::string fields_csv(const RunConfig& c) {
  std::ostringstream os;
  os << "conductor,discriminant,tame_ramified,wild_at_p,exponents\n";
  for (const auto& f : enumerate_fields(c.p, c.max_disc)) {
    os << f.conductor().get_str() << ',' << discriminant(f).get_str() << ',';
    for (std::size_t i = 0; i < f.tame_ramified.size(); ++i) os << (i ? ";" : "") << f.tame_ramified[i];
    os << ',' << (f.wild_at_p ? "true" : "false") << ',';
    std::vector<u64> v = f.exponents;
    if (f.wild_at_p) v.push_back(f.wild_exponent);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
    os << '\n';
  }
  return os.str();
}

void dispatch(const RunConfig& c, std::ostream& out) {
  if (c.p < 3 || !is_prime(c.p)) throw UsageError("--p must be an odd prime");
  const Context ctx(c);
  const bool csv = c.format == OutputFormat::csv;
  switch (c.subcommand) {
    case Subcommand::classify: {
      const EllipticCurve e = ctx.curve();
      const auto classes = run_classify(ctx, e);
      if (csv) {
        std::ostringstream os;
        write_classification_csv(os, classes);
        emit(c, out, os.str());
      } else {
        json j = header(c, "classify");
        j["bound"] = c.max_prime;
        j["classes"] = classes_json(classes);
        emit(c, out, render(j));
      }
      return;
    }
    case Subcommand::density: {
      const EllipticCurve e = ctx.curve();
      const auto r = run_density(ctx, e);
      if (csv) {
        emit(c, out, density_csv(r));
      } else {
        json j = header(c, "density");
        j["report"] = to_json(r);
        emit(c, out, render(j));
      }
      return;
    }
    case Subcommand::enumerate_fields:
      emit(c, out, csv ? fields_csv(c) : render(cmd_enumerate(ctx)));
      return;
    case Subcommand::kida:
    case Subcommand::euler_char:
    case Subcommand::report:
      if (csv) throw UsageError(std::string(subcommand_name(c.subcommand)) + " has no CSV output");
      if (c.subcommand == Subcommand::kida) emit(c, out, render(cmd_kida(ctx)));
      if (c.subcommand == Subcommand::euler_char) emit(c, out, render(cmd_euler_char(ctx)));
      if (c.subcommand == Subcommand::report) emit(c, out, render(cmd_report(ctx)));
      return;
  }
}

u64 parse_grid_value(const std::string& s) {
  std::size_t used = 0;
  long double v = 0;
  try {
    v = std::stold(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad grid value '" + s + "'");
  }
  if (used != s.size() || v < 1 || v > 1e18L || std::floor(v) != v) throw UsageError("bad grid value '" + s + "'");
  return static_cast<u64>(v);
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string ctx = std::string(subcommand_name(config.subcommand));
  try {
    dispatch(config, out);
    return exit_code::ok;
  } catch (const UsageError& ex) {
    err << "iwkida " << ctx << ": usage: " << ex.what() << '\n';
    return exit_code::usage;
  } catch (const Error& ex) {
    err << "iwkida " << ctx << ": " << ex.what() << '\n';
    if (ex.is_hypothesis()) return exit_code::hypothesis_blocked;
    if (ex.code() == Errc::parse) return exit_code::usage;
    return exit_code::computational;
  } catch (const std::exception& ex) {
    err << "iwkida " << ctx << ": internal error: " << ex.what() << '\n';
    return exit_code::computational;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iwasawa invariants of elliptic curves in cyclic degree-p extensions of Q"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string curve_text, format = "json", max_disc = "10000", grid_text, sha_text, cache_dir, reference, output;
  std::string exponents_text;
  std::optional<std::string> lambda_text;

  auto common = [&](CLI::App* sub, bool needs_curve) {
    if (needs_curve) sub->add_option("--curve", curve_text, "a1,a2,a3,a4,a6")->required();
    sub->add_option("--p", cfg.p, "odd prime")->capture_default_str();
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", output, "write to this file instead of stdout");
    sub->add_option("--cache-dir", cache_dir, "trace cache directory (default: $KIDA_CACHE_DIR)");
    sub->add_flag("--no-cache", cfg.no_cache, "ignore the trace cache");
    sub->add_option("--reference", reference, "reference dataset (default: bundled)");
    sub->add_option("--workers", cfg.workers, "worker threads, 0 for all cores");
  };
  auto externals = [&](CLI::App* sub) {
    sub->add_option("--sha", sha_text, "order of Sha[p^inf], or unknown");
    sub->add_option("--analytic-rank", cfg.analytic_rank, "analytic rank of E over Q");
  };

  auto* classify = app.add_subcommand("classify", "classify primes up to a bound");
  common(classify, true);
  classify->add_option("--max", cfg.max_prime, "largest prime")->capture_default_str();

  auto* kida_cmd = app.add_subcommand("kida", "lambda transfer to a cyclic degree-p field");
  common(kida_cmd, true);
  externals(kida_cmd);
  kida_cmd->add_option("--ramified", cfg.ramified, "tame ramified primes")->delimiter(',');
  kida_cmd->add_flag("--wild", cfg.wild, "also ramified at p");
  kida_cmd->add_option("--exponents", exponents_text, "normalised character exponents, comma separated");
  kida_cmd->add_option("--lambda-base", lambda_text, "lambda_p(E/Q)");
  kida_cmd->add_option("--mu-base", cfg.mu_base, "mu_p(E/Q)");
  kida_cmd->add_flag("--acknowledge-unresolved", cfg.acknowledge_unresolved, "evaluate despite open hypotheses");

  auto* euler = app.add_subcommand("euler-char", "Euler characteristic factors and mu = lambda = 0 test");
  common(euler, true);
  externals(euler);

  auto* fields = app.add_subcommand("enumerate-fields", "cyclic degree-p fields by discriminant");
  common(fields, false);
  fields->add_option("--max-disc", max_disc, "discriminant bound")->capture_default_str();

  auto* density = app.add_subcommand("density", "g/M tables, empirical density and exponent fit");
  common(density, true);
  density->add_option("--grid", grid_text, "increasing X values, e.g. 1e3,1e4,1e5,1e6");

  auto* report = app.add_subcommand("report", "summary of everything known about (E, p)");
  common(report, true);
  externals(report);
  report->add_option("--max", cfg.max_prime, "classification bound")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_code::ok : exit_code::usage;
  }

  try {
    if (classify->parsed()) cfg.subcommand = Subcommand::classify;
    if (kida_cmd->parsed()) cfg.subcommand = Subcommand::kida;
    if (euler->parsed()) cfg.subcommand = Subcommand::euler_char;
    if (fields->parsed()) cfg.subcommand = Subcommand::enumerate_fields;
    if (density->parsed()) cfg.subcommand = Subcommand::density;
    if (report->parsed()) cfg.subcommand = Subcommand::report;
    if (!curve_text.empty()) cfg.curve = parse_curve(curve_text);
    cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (cfg.max_disc.set_str(max_disc, 10) != 0 || cfg.max_disc < 1) throw UsageError("--max-disc expects a positive integer");
    if (!grid_text.empty()) {
      cfg.grid.clear();
      std::stringstream ss(grid_text);
      for (std::string item; std::getline(ss, item, ',');) cfg.grid.push_back(parse_grid_value(item));
    }
    if (!exponents_text.empty()) {
      std::stringstream ss(exponents_text);
      for (std::string item; std::getline(ss, item, ',');) cfg.exponents.push_back(parse_grid_value(item));
    }
    if (!sha_text.empty()) cfg.sha = sha_text;
    if (lambda_text) {
      BigInt v;
      if (v.set_str(*lambda_text, 10) != 0 || v < 0) throw UsageError("--lambda-base expects a natural number");
      cfg.lambda_base = v;
    }
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    if (!reference.empty()) cfg.reference_data = reference;
    if (!output.empty()) cfg.output = output;
  } catch (const UsageError& ex) {
    err << "iwkida: usage: " << ex.what() << '\n';
    return exit_code::usage;
  } catch (const Error& ex) {
    err << "iwkida: " << ex.what() << '\n';
    return ex.code() == Errc::singular_curve || ex.code() == Errc::parse ? exit_code::usage
                                                                          : exit_code::computational;
  }
  return run(cfg, out, err);
}

}  // namespace kida
