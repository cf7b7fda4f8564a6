#include "symdyn/error.hpp"

namespace symdyn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_subshift: return "malformed-subshift";
    case ErrorCode::empty_language: return "empty-language";
    case ErrorCode::no_transition: return "no-transition";
    case ErrorCode::length: return "length";
    case ErrorCode::short_stream: return "short-stream";
    case ErrorCode::depth: return "depth";
    case ErrorCode::invalid_measure: return "invalid-measure";
    case ErrorCode::empty_set: return "empty-set";
    case ErrorCode::parameter: return "parameter";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::typicality_failure: return "typicality-failure";
    case ErrorCode::entropy_infeasible: return "entropy-infeasible";
    case ErrorCode::target_geometry: return "target-geometry";
    case ErrorCode::no_marker: return "no-marker";
    case ErrorCode::range: return "range";
    case ErrorCode::degenerate_observable: return "degenerate-observable";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

Error::Error(ErrorCode code, std::string module, const std::string& message)
    : std::runtime_error(module + ": " + message), code_(code), module_(std::move(module)) {}

void fail(ErrorCode code, std::string module, const std::string& message) {
  throw Error(code, std::move(module), message);
}

}  // namespace symdyn
