#pragma once

// Externally sourced facts (analytic rank, Sha, base invariants) that the
// library consumes but never computes.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kida/curve.hpp"

namespace kida {

struct ReferenceRecord {
  WeierstrassModel curve;
  u64 p = 3;
  unsigned analytic_rank = 0;
  std::optional<BigInt> sha_p_order;  // nothing for "unknown"
  std::optional<unsigned> lambda_base;
  std::optional<unsigned> mu_base;
  std::string source_note;
};

struct ReferenceDataset {
  std::vector<ReferenceRecord> records;

  /// Record for a curve isomorphic to e (same minimal model) at p.
  const ReferenceRecord* find(const EllipticCurve& e, u64 p) const;
};

/// Path of the bundled dataset.
std::filesystem::path bundled_reference_path();

/// Parses and validates. Throws io when the file cannot be read and schema
/// with the offending field named otherwise.
ReferenceDataset ingest_reference(const std::filesystem::path& path);
ReferenceDataset parse_reference(const nlohmann::json& j);

nlohmann::json to_json(const ReferenceRecord& r);

}  // namespace kida
