#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anormal {

enum class ErrorCode {
  invalid_input,
  dimension_mismatch,
  not_hermitian,
  negative_eigenvalue,
  spectrum_negative,
  no_principal_sqrt,
  metric_violation,
  not_in_b_upper_a,
  not_in_b_a,
  index_out_of_range,
  infeasible_spec,
  unknown_check,
  unknown_target,
  parse_error,
  file_not_found,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace anormal
