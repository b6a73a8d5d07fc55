#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohwit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-square, non-finite or non-Hermitian operator.
class InvalidOperator : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

// Operands of incompatible dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class UncertifiedWitness : public Error {
 public:
  using Error::Error;
};

/// A projector set or POVM that violates one of its structural invariants.
/// `invariant()` names the violated property ("idempotent", "orthogonal",
/// "complete", "positive", "nonzero", "hermitian", ...), `index()` the
/// offending operator when the violation is local to one element.
class InvalidMeasurement : public Error {
 public:
  InvalidMeasurement(std::string invariant, std::optional<std::size_t> index,
                     const std::string& detail)
      : Error(format(invariant, index, detail)),
        invariant_(std::move(invariant)),
        index_(index) {}

  const std::string& invariant() const noexcept { return invariant_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  static std::string format(const std::string& invariant,
                            std::optional<std::size_t> index,
                            const std::string& detail) {
    std::string msg = "measurement violates invariant '" + invariant + "'";
    if (index) msg += " at operator " + std::to_string(*index);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
  }

  std::string invariant_;
  std::optional<std::size_t> index_;
};

/// Eigenvalue clustering produced a chain whose spread exceeds the grouping
/// tolerance, so the degenerate subspaces are not well defined.
class DegeneracyAmbiguous : public Error {
 public:
  DegeneracyAmbiguous(const std::string& what, std::vector<double> gaps)
      : Error(what), gaps_(std::move(gaps)) {}

  const std::vector<double>& gaps() const noexcept { return gaps_; }

 private:
  std::vector<double> gaps_;
};

// Malformed matrix, vector or measurement document.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace cohwit
