#pragma once

#include <stdexcept>
#include <string>

namespace sohkit {

// Domain error codes. The CLI maps these to exit code 1 with a single
// machine-parseable line: `error code=<name> msg="<text>"`.
enum class Errc {
  missing_column,
  empty_source,
  mixed_serial,
  too_many_bad_rows,
  all_dropped,
  insufficient_samples,
  nonpositive_c0,
  nonpositive_nominal,
  too_short,
  zero_variance,
  singular_regression,
  all_zero_differences,
  length_mismatch,
  invalid_order,
  non_invertible,
  degenerate_series,
  missing_history,
  empty_data,
  width_mismatch,
  too_few_rows,
  empty_grid,
  zero_variance_target,
  no_months,
  no_eligible_batteries,
  invalid_config,
  bad_config,
  unknown_subcommand,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace sohkit
