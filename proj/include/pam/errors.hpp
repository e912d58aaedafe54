// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PAM_ERRORS_HPP
#define PAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pam {

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A queried site or scale is not covered by the stored box.
struct CoverageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller broke an operation contract (empty input, invalid path, ...).
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File could not be opened, read, or parsed.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integrator / quadrature / eigensolver failed to reach tolerance.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A probabilistic coverage certificate could not be established.
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Monte Carlo variance budget was exceeded; the estimate would be garbage.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pam

#endif
