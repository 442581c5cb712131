#pragma once

#include <stdexcept>
#include <string>

namespace fgsi {

enum class ErrorKind {
  Input,             // malformed or non-finite input
  Domain,            // point outside the model's domain
  Singularity,       // flow passes through a coordinate singularity
  Overflow,          // non-finite result
  InfeasibleEnergy,  // no real momentum closes the energy equation
  Parameter,         // invalid algorithm parameters
  Convergence,       // iterative procedure failed
  Config,            // configuration / CLI validation
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures that come from the numerics rather than bad input.
  bool numerical() const noexcept {
    return kind_ == ErrorKind::Singularity || kind_ == ErrorKind::Overflow ||
           kind_ == ErrorKind::Domain || kind_ == ErrorKind::Convergence;
  }

 private:
  ErrorKind kind_;
};

}  // namespace fgsi
