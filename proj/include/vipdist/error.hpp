#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vipdist {

enum class ErrorCode {
  domain,           // argument outside the operation's domain
  degenerate,       // zero-height box, empty disc/ring, ...
  empty_input,
  no_pixels,
  singular_fit,
  not_ready,        // recalibration requested before enough data buffered
  behind_camera,
  bad_magic,        // NEOD magic mismatch
  truncated,        // NEOD payload shorter than declared
  format,           // malformed JSON / JSONL / CSV input
  missing_data,     // referenced file or field absent
};

std::string_view to_string(ErrorCode code) noexcept;

/// Process exit status for a failure of this kind:
/// 2 input-format, 3 calibration-fit, 4 missing-data, 1 anything else.
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

/// A distance estimate together with its domain status. Linear estimators can
/// extrapolate to non-positive distances; those results are kept but flagged.
struct Estimate {
  double distance_m = 0.0;
  bool out_of_domain = false;
};

}  // namespace vipdist
