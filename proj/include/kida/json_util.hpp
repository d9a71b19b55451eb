#pragma once

#include <string>

#include <json.hpp>

#include "kida/arith.hpp"

namespace kida {

/// JSON integer when the value fits a signed long, decimal string otherwise.
inline nlohmann::json big_json(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

inline nlohmann::json rational_json(const Rational& q) { return q.get_str(); }

}  // namespace kida
