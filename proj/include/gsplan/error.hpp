#pragma once

#include <stdexcept>
#include <string>

namespace gsplan {

enum class ErrorKind {
  invalid_argument,
  invalid_state,
  invalid_spec,
  invalid_edge,
  invalid_merge,
  infeasible,
  extraction,
  numerical,
  io,
  resource,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so the CLI can map
/// it onto an exit code (infeasible -> 2, everything else -> 1).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace gsplan
