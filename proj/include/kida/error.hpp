#pragma once

#include <stdexcept>
#include <string>

namespace kida {

enum class Errc {
  empty_range,
  invalid_modulus,
  infinite_valuation,
  non_unit,
  singular_curve,
  not_minimal,
  bad_reduction,
  invalid_twist,
  invalid_input,
  indeterminate,
  euler_char_undefined,
  excluded_prime,
  class_field_obstruction,
  wrong_operation,
  hypothesis_blocked,
  assumption_not_satisfied,
  supersingular,
  budget,
  fit_unavailable,
  parse,
  schema,
  io,
  out_of_range,
};

const char* errc_name(Errc e);

/// Every failure in the library is reported through this type; the code
/// identifies the condition, the message carries context.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// True for failures caused by unmet mathematical hypotheses rather than
  /// by bad input or internal trouble.
  bool is_hypothesis() const noexcept {
    return code_ == Errc::hypothesis_blocked || code_ == Errc::assumption_not_satisfied ||
           code_ == Errc::supersingular;
  }

 private:
  Errc code_;
};

}  // namespace kida
