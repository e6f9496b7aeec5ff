#pragma once

#include <stdexcept>
#include <string>

namespace periodlab {

/// Root of every error thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (sqrt of a
/// negative ball, division by a ball containing zero, singular curve, ...).
class domain_error : public error {
  public:
    using error::error;
};

/// Malformed textual input. `position` is a 0-based character offset.
class parse_error : public error {
  public:
    parse_error(const std::string& what, std::size_t position)
        : error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

/// A configured cap (table size, precision, grid size) would be exceeded.
class resource_error : public error {
  public:
    using error::error;
};

class divergent_series_error : public domain_error {
  public:
    using domain_error::domain_error;
};

class non_admissible_error : public domain_error {
  public:
    using domain_error::domain_error;
};

class unsupported_error : public domain_error {
  public:
    using domain_error::domain_error;
};

class precondition_error : public domain_error {
  public:
    using domain_error::domain_error;
};

/// Step-halving or step-doubling error estimates failed to contract.
class convergence_error : public error {
  public:
    using error::error;
};

/// The requested precision is too low to reach a verdict; the caller should
/// retry with more digits.
class retry_precision : public error {
  public:
    retry_precision(const std::string& what, int suggested_digits)
        : error(what), suggested_digits_(suggested_digits) {}

    int suggested_digits() const noexcept { return suggested_digits_; }

  private:
    int suggested_digits_;
};

} // namespace periodlab
