// Copyright 2026 The tgauss Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace tgauss {

/// Violated contract on inputs (bad parameters, out-of-range letters,
/// mismatched contexts, moment order too small, ...).
class precondition_error : public std::invalid_argument {
 public:
  explicit precondition_error(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A computation whose result would be silently corrupted by the level-L
/// truncation. Raised instead of approximating.
class truncation_error : public precondition_error {
 public:
  explicit truncation_error(const std::string& what)
      : precondition_error(what) {}
};

/// An iterative scheme exhausted its budget without reaching tolerance.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace tgauss
