#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace limprob {

enum class ErrorCode {
  negative_mass,
  total_exceeds_one,
  domain_error,
  n_too_large,
  index_out_of_range,
  k_range,
  bad_epsilon,
  inconclusive,
  no_weak_limit,
  no_set_limit,
  bad_sequence_spec,
  parse_error,
  evaluation_error,
  n_range,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::negative_mass: return "NegativeMass";
    case ErrorCode::total_exceeds_one: return "TotalExceedsOne";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::n_too_large: return "NTooLarge";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::k_range: return "KRange";
    case ErrorCode::bad_epsilon: return "BadEpsilon";
    case ErrorCode::inconclusive: return "Inconclusive";
    case ErrorCode::no_weak_limit: return "NoWeakLimit";
    case ErrorCode::no_set_limit: return "NoSetLimit";
    case ErrorCode::bad_sequence_spec: return "BadSequenceSpec";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::evaluation_error: return "EvaluationError";
    case ErrorCode::n_range: return "NRange";
  }
  return "Unknown";
}

// Base of every domain error raised by the library. The CLI maps these to
// exit status 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace limprob
