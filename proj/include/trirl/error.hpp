#ifndef TRIRL_ERROR_HPP
#define TRIRL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace trirl {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
public:
  using Error::Error;
};

/// Invalid arguments or configuration (ranges, empty inputs, bad spec strings).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

class DegenerateDirection : public Error {
public:
  using Error::Error;
};

class DegenerateTriangle : public Error {
public:
  using Error::Error;
};

/// Raised by a budgeted oracle when max_queries calls have been made.
/// The attack loop catches it and terminates with its current best.
class BudgetExhausted : public Error {
public:
  BudgetExhausted() : Error("query budget exhausted") {}
};

/// The remote model could not be reached or the connection broke.
class TransportError : public Error {
public:
  using Error::Error;
};

/// The remote peer replied with something outside the wire protocol.
class ProtocolError : public Error {
public:
  using Error::Error;
};

/// The remote peer replied with an explicit {"op":"error"} message.
class RemoteError : public Error {
public:
  using Error::Error;
};

} // namespace trirl

#endif // TRIRL_ERROR_HPP
