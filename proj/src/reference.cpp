#include "kida/reference.hpp"

#include <fstream>

#include "kida/json_util.hpp"

namespace kida {

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw Error(Errc::schema, field + ": " + what);
}

const nlohmann::json& field(const nlohmann::json& rec, const std::string& where, const char* name) {
  if (!rec.contains(name)) schema_error(where + "." + name, "missing");
  return rec.at(name);
}

unsigned natural(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) schema_error(where, "expected a nonnegative integer");
  return v.get<unsigned>();
}

}  // namespace

const ReferenceRecord* ReferenceDataset::find(const EllipticCurve& e, u64 p) const {
  for (const auto& r : records)
    if (r.p == p && EllipticCurve(r.curve).model() == e.model()) return &r;
  return nullptr;
}

std::filesystem::path bundled_reference_path() { return std::filesystem::path(KIDA_DATA_DIR) / "reference.json"; }

ReferenceDataset parse_reference(const nlohmann::json& j) {
  if (!j.is_object()) schema_error("<root>", "expected an object");
  if (!j.contains("schema") || j.at("schema") != 1) schema_error("schema", "expected 1");
  const auto& recs = field(j, "<root>", "records");
  if (!recs.is_array()) schema_error("records", "expected an array");
  ReferenceDataset ds;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const std::string where = "records[" + std::to_string(i) + "]";
    const auto& rec = recs[i];
    if (!rec.is_object()) schema_error(where, "expected an object");
    ReferenceRecord r;
    const auto& curve = field(rec, where, "curve");
    if (!curve.is_string()) schema_error(where + ".curve", "expected a string");
    try {
      r.curve = WeierstrassModel::parse(curve.get<std::string>());
      (void)invariants(r.curve);
    } catch (const Error& err) {
      schema_error(where + ".curve", err.what());
    }
    const unsigned p = natural(field(rec, where, "p"), where + ".p");
    if (p < 3 || !is_prime(static_cast<u64>(p))) schema_error(where + ".p", "expected an odd prime");
    r.p = p;
    r.analytic_rank = natural(field(rec, where, "analytic_rank"), where + ".analytic_rank");
    const auto& sha = field(rec, where, "sha_p_order");
    if (sha.is_string() && sha.get<std::string>() == "unknown") {
      r.sha_p_order = std::nullopt;
    } else {
      BigInt s;
      if (sha.is_number_integer())
        s = BigInt(sha.get<long>());
      else if (sha.is_string() && s.set_str(sha.get<std::string>(), 10) == 0)
        ;
      else
        schema_error(where + ".sha_p_order", "expected an integer or \"unknown\"");
      if (s <= 0) schema_error(where + ".sha_p_order", "must be positive");
      BigInt t = s;
      while (mpz_divisible_ui_p(t.get_mpz_t(), p)) t /= p;
      if (t != 1) schema_error(where + ".sha_p_order", s.get_str() + " is not a power of " + std::to_string(p));
      r.sha_p_order = s;
    }
    if (rec.contains("lambda_base") && !rec.at("lambda_base").is_null())
      r.lambda_base = natural(rec.at("lambda_base"), where + ".lambda_base");
    if (rec.contains("mu_base") && !rec.at("mu_base").is_null())
      r.mu_base = natural(rec.at("mu_base"), where + ".mu_base");
    const auto& note = field(rec, where, "source_note");
    if (!note.is_string()) schema_error(where + ".source_note", "expected a string");
    r.source_note = note.get<std::string>();
    ds.records.push_back(std::move(r));
  }
  return ds;
}

ReferenceDataset ingest_reference(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::schema, path.string() + ": " + ex.what());
  }
  return parse_reference(j);
}

nlohmann::json to_json(const ReferenceRecord& r) {
  return {{"curve", r.curve.to_string()},
          {"p", r.p},
          {"analytic_rank", r.analytic_rank},
          {"sha_p_order", r.sha_p_order ? big_json(*r.sha_p_order) : nlohmann::json("unknown")},
          {"lambda_base", r.lambda_base ? nlohmann::json(*r.lambda_base) : nlohmann::json()},
          {"mu_base", r.mu_base ? nlohmann::json(*r.mu_base) : nlohmann::json()},
          {"source_note", r.source_note}};
}

}  // namespace kida
