#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmnoma {

enum class Errc {
  invalid_argument,
  length_mismatch,
  infeasible_constraint,
  invalid_ordering,
  infeasible_gain,
  instance_too_large,
  parse_error,
  validation_error,
  io_error,
};

std::string_view to_string(Errc code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mmnoma
