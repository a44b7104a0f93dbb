#pragma once

#include <stdexcept>
#include <string>

namespace textable {

enum class ErrorKind {
  invalid_input,  // malformed files, validation failures, bad requests
  not_found,      // unknown session / attribute / document
  conflict,       // stale candidate, session already complete
  precondition,   // operation not yet permitted (e.g. table before any attribute is done)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

[[noreturn]] inline void invalid(const std::string& message) { throw Error(ErrorKind::invalid_input, message); }

}  // namespace textable
