#pragma once

#include <stdexcept>
#include <string>

namespace metaopa {

// A configured size cap was hit; the answer is unknown, never approximated.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The input lies outside the class an operation is defined for.
class UnsupportedClass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace metaopa
