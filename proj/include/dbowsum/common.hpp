#pragma once

#include <stdexcept>
#include <string>

namespace dbowsum {

// User-facing input problems: bad paths, malformed files, empty inputs.
// Internal invariant violations are plain logic errors, not Error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dbowsum
