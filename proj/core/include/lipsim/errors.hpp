#pragma once

#include <stdexcept>
#include <string>

namespace lipsim {

// Error classes map 1:1 onto CLI exit codes (see tools/).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation outside a curve's tabulated range, grid mismatch, etc.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// NaN during propagation, eigensolver breakdown, ...
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// More bound states requested than the potential supports.
struct UnboundRequestError : NumericalError {
    UnboundRequestError(std::size_t requested, std::size_t available)
        : NumericalError("unbound request: " + std::to_string(requested) +
                         " states requested but only " + std::to_string(available) +
                         " bound states exist below the potential edge values"),
          requested(requested), available(available) {}
    std::size_t requested;
    std::size_t available;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lipsim
