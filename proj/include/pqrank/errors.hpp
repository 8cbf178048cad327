#pragma once

#include <stdexcept>
#include <string>

namespace pqrank {

enum class ErrorCode {
  invalid_argument,  // caller supplied a bad parameter
  io,                // file missing or unreadable
  format,            // input data malformed
  mismatch,          // model and data do not fit together
  numeric,           // training diverged or a value became non-finite
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pqrank
