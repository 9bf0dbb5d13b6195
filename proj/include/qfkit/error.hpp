#pragma once

#include <stdexcept>
#include <string>

namespace qfkit {

enum class errc {
  not_symmetric,
  not_positive_definite,
  not_integral,
  not_integral_after_scaling,
  rank_too_large,
  bound_too_large,
  unsupported_modulus,
  cap_exceeded,
  isotropic_input,
  precondition_violation,
  search_exhausted,
  not_normalized,
  hypothesis_unmet,
  precision_unstable,
  bad_input,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_symmetric: return "NotSymmetric";
    case errc::not_positive_definite: return "NotPositiveDefinite";
    case errc::not_integral: return "NotIntegral";
    case errc::not_integral_after_scaling: return "NotIntegralAfterScaling";
    case errc::rank_too_large: return "RankTooLarge";
    case errc::bound_too_large: return "BoundTooLarge";
    case errc::unsupported_modulus: return "UnsupportedModulus";
    case errc::cap_exceeded: return "CapExceeded";
    case errc::isotropic_input: return "IsotropicInput";
    case errc::precondition_violation: return "PreconditionViolation";
    case errc::search_exhausted: return "SearchExhausted";
    case errc::not_normalized: return "NotNormalized";
    case errc::hypothesis_unmet: return "HypothesisUnmet";
    case errc::precision_unstable: return "PrecisionUnstable";
    case errc::bad_input: return "BadInput";
  }
  return "Unknown";
}

/// Domain error carrying a stable code; the CLI maps codes to exit status.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& detail) { throw error(code, detail); }

inline void require(bool ok, errc code, const std::string& detail) {
  if (!ok) fail(code, detail);
}

}  // namespace qfkit
