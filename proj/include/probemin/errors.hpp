#pragma once

#include <stdexcept>
#include <string>

namespace probemin {

// Base for all recoverable library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed instance documents, bad specs, invalid arguments.
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Enumeration or DP state space exceeds the configured cap.
struct CapExceeded : Error {
  explicit CapExceeded(const std::string& msg) : Error(msg) {}
};

}  // namespace probemin
