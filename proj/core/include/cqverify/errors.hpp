// SPDX-License-Identifier: MIT
// Error hierarchy shared by every cqverify module. Each class corresponds to
// one failure kind surfaced through the public API; kind() gives a stable
// machine-readable tag for CLI/JSON reporting.
#pragma once

#include <stdexcept>
#include <string>

namespace cqverify {

class CqError : public std::runtime_error {
public:
  CqError(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define CQVERIFY_DEFINE_ERROR(NAME)                                           \
  class NAME : public CqError {                                               \
  public:                                                                     \
    explicit NAME(const std::string& msg) : CqError(#NAME, msg) {}            \
  }

// operator algebra
CQVERIFY_DEFINE_ERROR(NotHermitian);
CQVERIFY_DEFINE_ERROR(NotPSD);
CQVERIFY_DEFINE_ERROR(NotProjection);
CQVERIFY_DEFINE_ERROR(EigenFailure);
CQVERIFY_DEFINE_ERROR(DimMismatch);

// states and language
CQVERIFY_DEFINE_ERROR(UnboundVariable);
CQVERIFY_DEFINE_ERROR(DomainOverflow);
CQVERIFY_DEFINE_ERROR(DomainTooLarge);
CQVERIFY_DEFINE_ERROR(DuplicateDecl);
CQVERIFY_DEFINE_ERROR(TypeError);

// transport
CQVERIFY_DEFINE_ERROR(MassMismatch);
CQVERIFY_DEFINE_ERROR(CapExceeded);
CQVERIFY_DEFINE_ERROR(SolverDiverged);

// prover
CQVERIFY_DEFINE_ERROR(RuleMismatch);
CQVERIFY_DEFINE_ERROR(MissingWitness);
CQVERIFY_DEFINE_ERROR(NotACoupling);
CQVERIFY_DEFINE_ERROR(InequalityFailed);

#undef CQVERIFY_DEFINE_ERROR

// Parse errors carry a source position.
class SyntaxError : public CqError {
public:
  SyntaxError(const std::string& msg, int line, int column)
      : CqError("SyntaxError", msg + " (line " + std::to_string(line) +
                                   ", column " + std::to_string(column) + ")"),
        line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

}  // namespace cqverify
