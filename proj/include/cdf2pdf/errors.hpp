#pragma once

#include <stdexcept>
#include <string>

namespace cdf2pdf {

/// Bad or inconsistent input data: file parse failures, invariant
/// violations, dimension mismatches. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values encountered during computation (diverged training,
/// degenerate likelihoods). Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Model (de)serialization failures, with the failure class preserved so
/// callers can distinguish a syntax error from a semantic one.
class ModelFormatError : public DataError {
public:
  enum class Kind { Parse, Version, Dimension };

  ModelFormatError(Kind kind, const std::string& msg)
    : DataError(msg), kind_(kind) {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

} // namespace cdf2pdf
