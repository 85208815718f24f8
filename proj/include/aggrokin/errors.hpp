#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aggrokin {

enum class ErrorKind {
  invalid_potential,
  domain,
  resolution,
  integration_failure,
  contraction_failure,
  configuration,
  capacity,
  consistency,
  regime,
  certificate_domain,
  insufficient_data,
  io,
};

std::string_view to_string(ErrorKind kind);

/// All library failures surface as this exception. `module()` names the
/// subsystem that raised it so the CLI can report context.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace aggrokin
