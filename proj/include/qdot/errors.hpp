#ifndef QDOT_ERRORS_HPP_
#define QDOT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qdot {

// Raised when an internal consistency check trips (for example an imaginary
// residue above tolerance on a quantity that must be real). Distinct from
// precondition violations so the CLI can map it to its own exit code.
class internal_error : public std::runtime_error {
public:
  explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qdot

#endif  // QDOT_ERRORS_HPP_
