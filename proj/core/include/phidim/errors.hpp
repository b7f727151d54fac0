#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace phidim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a function (x outside (0,1), a pole, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A tabulated dimension function was queried outside its grid hull.
class ExtrapolationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A distribution spec or level draw violates one of its invariants.
/// `invariant()` names the violated rule.
class InvalidSpec : public Error {
 public:
  InvalidSpec(std::string invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// The depth scan ran out of environment levels (or hit its cap) before the
/// scale condition was met.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double partial_sum, std::size_t levels_scanned)
      : Error(what), partial_sum_(partial_sum), levels_scanned_(levels_scanned) {}
  /// Sum of -log r over the scanned levels, in nats.
  double partial_sum() const noexcept { return partial_sum_; }
  std::size_t levels_scanned() const noexcept { return levels_scanned_; }

 private:
  double partial_sum_;
  std::size_t levels_scanned_;
};

/// Children cannot be laid out inside the parent under the chosen policy.
class PlacementError : public Error {
 public:
  using Error::Error;
};

/// A point is not covered by the Moran intervals of the requested level.
class GapError : public Error {
 public:
  GapError(const std::string& what, int covered_level)
      : Error(what), covered_level_(covered_level) {}
  /// Deepest level at which the point is still inside a Moran interval.
  int covered_level() const noexcept { return covered_level_; }

 private:
  int covered_level_;
};

/// A ball query falls outside the admissible scale range.
class QueryError : public Error {
 public:
  using Error::Error;
};

/// An estimator window is infeasible for the given environment.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or serialized spec.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// One replicate of a batch failed; carries what is needed to rerun it alone.
class ReplicateError : public Error {
 public:
  ReplicateError(const std::string& what, std::size_t replicate, std::uint64_t seed)
      : Error(what), replicate_(replicate), seed_(seed) {}
  std::size_t replicate() const noexcept { return replicate_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t replicate_;
  std::uint64_t seed_;
};

}  // namespace phidim
