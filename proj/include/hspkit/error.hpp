#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hspkit {

enum class ErrorKind {
  unknown_variable,
  arity_mismatch,
  signature_mismatch,
  size_limit_exceeded,
  not_a_congruence,
  not_stable,
  negative_epsilon,
  malformed_proof,
  malformed_input,
  invalid_argument,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// front ends can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hspkit
