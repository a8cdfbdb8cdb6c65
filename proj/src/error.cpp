#include "iprior/error.hpp"

namespace iprior {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAllDocumentsEmpty: return "AllDocumentsEmpty";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingResource: return "MissingResource";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace iprior
