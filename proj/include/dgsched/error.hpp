#ifndef DGSCHED_ERROR_HPP
#define DGSCHED_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dgsched {

/// Malformed or incomplete configuration input.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A run-time invariant of the simulation was breached (e.g. a backlog above q_max).
class InvariantViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition; always a programming error.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Instance exceeds the size an exact/enumerative routine accepts.
class SizeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Linear program has no feasible point.
class InfeasibleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace dgsched

#endif // DGSCHED_ERROR_HPP
