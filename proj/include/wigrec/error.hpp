// error.hpp
// Error type shared by all wigrec modules.

#pragma once

#include <stdexcept>
#include <string>

namespace wigrec {

/// Failure category, kept machine-readable for the CLI error records.
enum class ErrorKind {
    invalid_dimension,
    dimension_mismatch,
    degenerate_state,
    unphysical_state,
    insufficient_truncation,
    truncation_unsafe,
    nyquist,
    invalid_argument,
    config,
    io,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::invalid_dimension: return "invalid-dimension";
        case ErrorKind::dimension_mismatch: return "dimension-mismatch";
        case ErrorKind::degenerate_state: return "degenerate-state";
        case ErrorKind::unphysical_state: return "unphysical-state";
        case ErrorKind::insufficient_truncation: return "insufficient-truncation";
        case ErrorKind::truncation_unsafe: return "truncation-unsafe";
        case ErrorKind::nyquist: return "nyquist";
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::config: return "config";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace wigrec
