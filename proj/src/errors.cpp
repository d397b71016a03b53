#include "wscat/errors.hpp"

#include <utility>

namespace wscat {

Error::Error(std::string kind, std::string operation, const std::string& message)
    : std::runtime_error(operation + ": " + kind + ": " + message),
      kind_(std::move(kind)),
      operation_(std::move(operation)) {}

}  // namespace wscat
