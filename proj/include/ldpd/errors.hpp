// Copyright 2026 The ldpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ldpd {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested distribution collapses to a point mass (e.g. rho == 0 for
/// the Vasicek law). Callers that can handle the degenerate case catch this
/// separately from DomainError.
class DegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical procedure (quadrature, bracketing, root refinement) failed to
/// reach its tolerance. The message carries the diagnostics.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. line() is 1-based; 0 means "whole file".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ldpd
