#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a contract (non-finite cell, bad row, dimension mismatch).
/// Row and column are zero-based when present.
class DataQualityError : public Error {
 public:
  explicit DataQualityError(const std::string& what,
                            std::optional<std::size_t> row = std::nullopt,
                            std::optional<std::size_t> column = std::nullopt)
      : Error(what), row_(row), column_(column) {}

  std::optional<std::size_t> row() const { return row_; }
  std::optional<std::size_t> column() const { return column_; }

 private:
  std::optional<std::size_t> row_;
  std::optional<std::size_t> column_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (EM never produced a finite likelihood, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gad
