#include "vipdist/error.hpp"

namespace vipdist {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::no_pixels: return "no_pixels";
    case ErrorCode::singular_fit: return "singular_fit";
    case ErrorCode::not_ready: return "not_ready";
    case ErrorCode::behind_camera: return "behind_camera";
    case ErrorCode::bad_magic: return "bad_magic";
    case ErrorCode::truncated: return "truncated";
    case ErrorCode::format: return "format";
    case ErrorCode::missing_data: return "missing_data";
  }
  return "unknown";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::bad_magic:
    case ErrorCode::truncated:
    case ErrorCode::format:
      return 2;
    case ErrorCode::singular_fit:
    case ErrorCode::degenerate:
    case ErrorCode::empty_input:
    case ErrorCode::not_ready:
      return 3;
    case ErrorCode::missing_data:
      return 4;
    default:
      return 1;
  }
}

}  // namespace vipdist
