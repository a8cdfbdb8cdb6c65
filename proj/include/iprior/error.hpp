#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iprior {

enum class ErrorCode {
  kAllDocumentsEmpty,
  kConfigMismatch,
  kDimensionMismatch,
  kMissingResource,
  kInvalidArgument,
  kParse,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception type; the CLI maps
// the code to its "error: <code>: <message>" line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iprior
