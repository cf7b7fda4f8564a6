#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symdyn {

// Every failure raised by the library carries one of these codes; the CLI maps
// them to exit statuses and prints "<module>: <message>".
enum class ErrorCode {
  malformed_subshift,
  empty_language,
  no_transition,
  length,
  short_stream,
  depth,
  invalid_measure,
  empty_set,
  parameter,
  resolution,
  typicality_failure,
  entropy_infeasible,
  target_geometry,
  no_marker,
  range,
  degenerate_observable,
  parse,
  io,
  internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

[[noreturn]] void fail(ErrorCode code, std::string module, const std::string& message);

}  // namespace symdyn
