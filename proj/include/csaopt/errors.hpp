#ifndef CSAOPT_ERRORS_HPP
#define CSAOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csaopt {

// Point outside the domain of the distance generating function / feasible set.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed numeric input (non-finite vectors, size mismatches).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration: missing constants, bad modes, unparsable files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace csaopt

#endif
