#include "fractime/errors.hpp"

namespace fractime::detail {

void throw_domain(const std::string& where, const std::string& what) {
  throw DomainError(where + ": " + what);
}

void throw_numerical(const std::string& where, const std::string& what) {
  throw NumericalError(where + ": " + what);
}

}  // namespace fractime::detail
