#pragma once

#include <stdexcept>
#include <string>

namespace pansched {

enum class Errc {
  invalid_argument,
  parse_error,
  io_error,
  infeasible,
  budget_exceeded,
};

// Exception carrying a machine-readable code alongside the human message.
// The C API maps codes onto its status enum; C++ callers can catch Error
// directly and inspect code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pansched
