#pragma once

#include <stdexcept>
#include <string>

namespace f2f {

enum class ErrorKind {
  malformed_input,
  invalid_parameter,
  undefined_ratio,
  resource_limit,
  corrupt_artifact,
};

const char* to_string(ErrorKind kind) noexcept;

// All library failures surface as f2f::Error; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace f2f
