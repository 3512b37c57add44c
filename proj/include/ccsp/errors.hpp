#pragma once

#include <stdexcept>
#include <string>

namespace ccsp {

// Values mirror the ccsp_status codes of the C API.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kMissingConstraint = 2,
  kParse = 3,
  kSize = 4,
  kUnsupportedConditioning = 5,
  kBudget = 6,
  kDecode = 7,
  kInfeasible = 8,
  kIterationLimit = 9,
  kIncomplete = 10,
  kContract = 11,
  kIo = 12,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace ccsp
