#pragma once

#include <stdexcept>
#include <string>

namespace dsmooth {

/// Raised for bad observational data (non-finite values, too few rows,
/// nonpositive values where a log is required, malformed files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV / text parse failure carrying the offending position. Row and column
/// are 1-based; 0 means "not applicable".
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : InputError(format(what, row, column)), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t row, std::size_t column) {
    std::string msg = what;
    if (row > 0) {
      msg += " (row " + std::to_string(row);
      if (column > 0) msg += ", column " + std::to_string(column);
      msg += ")";
    }
    return msg;
  }

  std::size_t row_;
  std::size_t column_;
};

/// The empirical component covariance of order `order` is not numerically
/// positive definite.
class SingularCovariance : public InputError {
 public:
  explicit SingularCovariance(int order)
      : InputError("component covariance is singular at order " + std::to_string(order)),
        order_(order) {}

  int order() const noexcept { return order_; }

 private:
  int order_;
};

}  // namespace dsmooth
