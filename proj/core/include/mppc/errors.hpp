#pragma once

#include <stdexcept>
#include <string>

namespace mppc {

/// File system or stream failure (missing input, unwritable output).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mppc
