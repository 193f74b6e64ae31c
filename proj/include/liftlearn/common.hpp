#ifndef LIFTLEARN_COMMON_HPP
#define LIFTLEARN_COMMON_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace liftlearn {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Thrown when a caller breaks a documented precondition (mostly dimension
// mismatches).
class ContractViolation : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure that is a property of the data, not of the caller.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DegenerateData : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

class UndefinedRelativeError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

// Malformed input files. The message carries the offending line or field.
class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string &message)
{
  if (!condition)
  {
    throw ContractViolation(message);
  }
}

inline std::string dims(Index rows, Index cols)
{
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace liftlearn

#endif  // LIFTLEARN_COMMON_HPP
