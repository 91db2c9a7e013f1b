#pragma once

#include <stdexcept>
#include <string>

namespace qot {

// Failure taxonomy. The CLI maps these onto its exit-code contract
// (1 = input/validation, 3 = solver failure); exit 2 is reserved for
// a falsified identity and is decided from reports, not exceptions.
enum class errc {
  dimension_mismatch,
  dimension_limit,
  not_hermitian,
  not_psd,
  not_normalized,
  not_trace_preserving,
  not_a_channel,
  not_a_coupling,
  reconstruction,
  numeric,
  parameter,
  domain,
  solver_failure,
  degenerate_output,
  io,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace qot
