#pragma once

#include <stdexcept>
#include <string>

namespace tubal {

enum class Errc {
  invalid_argument = 1,
  shape_mismatch,
  rank_out_of_range,
  index_out_of_range,
  numeric_failure,
  residual_imaginary,
  tolerance_not_met,
  io_error,
  bad_format,
  truncated_payload,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by TATCU when the refinement loop runs out; carries the best
/// relative error reached so callers can report it.
class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(const std::string& what, double best_error)
      : Error(Errc::tolerance_not_met, what), best_error_(best_error) {}
  double best_error() const noexcept { return best_error_; }

 private:
  double best_error_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace tubal
