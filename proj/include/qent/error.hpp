#pragma once

#include <stdexcept>
#include <string>

namespace qent {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  not_hermitian,
  truncation,
  memory_cap,
  numerical,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qent
