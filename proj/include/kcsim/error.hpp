#pragma once

#include <stdexcept>
#include <string>

namespace kcsim {

enum class ErrorKind {
  kMalformedInput,
  kDivisionDegenerate,
  kLogDomain,
  kMissingN,
  kNotFound,
  kOutOfRange,
  kIo,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kcsim
