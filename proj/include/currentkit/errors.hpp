#pragma once
#include <stdexcept>
#include <string>

namespace ck {

// Raised when an operation is asked for a case it does not support
// (e.g. closed-form comass for a grade with no closed form).
struct capability_error : std::runtime_error {
  explicit capability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an optimizer fails to reach its certificate (infeasible LP,
// unbounded pivot, duality gap not closed).
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an iterative training loop produces a non-finite loss.
struct divergence_error : std::runtime_error {
  explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised on malformed input documents (JSON schema violations and the like).
struct schema_error : std::runtime_error {
  explicit schema_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ck
