#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace websuite {

enum class ErrorCode {
  kUnknownInteraction,
  kMalformedRef,
  kMalformedLine,
  kUnknownSession,
  kUnknownTask,
  kNotFound,
  kUnknownElement,
  kIncompatibleVerb,
  kBusy,
  kMalformedCart,
  kUnknownCheckpoint,
  kAgentError,
  kSuiteMismatch,
  kMalformedArchive,
  kMalformedReport,
};

std::string_view error_code_name(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so
// callers (the HTTP service, the runner) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace websuite
