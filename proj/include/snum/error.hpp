#pragma once

#include <stdexcept>
#include <string>

namespace snum {

// Base of every error raised by the library. The CLI maps the concrete
// type onto an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside an operation's documented preconditions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A scan or enumeration exceeded its configured cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Missing or inconsistent configuration (e.g. kappa_p not configured).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed structured-text input; the message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A mathematical precondition (not a shape/range check) failed.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace snum
