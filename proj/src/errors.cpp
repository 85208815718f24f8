#include "aggrokin/errors.hpp"

namespace aggrokin {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_potential: return "invalid-potential";
    case ErrorKind::domain: return "domain";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::integration_failure: return "integration-failure";
    case ErrorKind::contraction_failure: return "contraction-failure";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::regime: return "regime";
    case ErrorKind::certificate_domain: return "certificate-domain";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " error [" + module + "]: " + what),
      kind_(kind),
      module_(std::move(module)) {}

}  // namespace aggrokin
