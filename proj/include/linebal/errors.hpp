// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace linebal {

// Bad input data: dimension mismatches, broken invariants, unknown ids.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message) : std::runtime_error(message) {}
};

// Malformed input file: CSV/JSON syntax or schema problems. Messages carry
// file, line and field where applicable.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& message) : std::runtime_error(message) {}
};

// The solver cannot certify a result (unbounded relaxation, iteration cap).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace linebal
