#ifndef MIXNORM_ERROR_HPP
#define MIXNORM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mixnorm {

enum class ErrorCode {
  length_mismatch,
  negative_weight,
  zero_mass,
  non_finite,
  empty_axis,
  too_many_axes,
  duplicate_axis_name,
  shape_mismatch,
  invalid_axis,
  exponent_out_of_range,
  exponent_count_mismatch,
  invalid_permutation,
  invalid_partition,
  invalid_model,
  invalid_argument,
  grid_mismatch,
  empty_table,
  insufficient_data,
  io_error,
};

const char* to_string(ErrorCode code) noexcept;

/// Raised for every precondition violation detected by the library.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(ErrorCode code, const std::string& what)
      : std::invalid_argument(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when reading or writing an external file fails.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mixnorm

#endif  // MIXNORM_ERROR_HPP
