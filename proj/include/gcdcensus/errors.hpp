#pragma once

#include <stdexcept>
#include <string>

namespace gcdcensus {

/// Input outside an operation's domain (bad index, non-prime, wrong tuple length).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Prime cutoff too small for the certified tail bound.
class PrimeBoundError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A computation would exceed a configured size guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant. Indicates a bug, never bad user input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gcdcensus
