// errors.hpp - exception types thrown by the pathamp library.
#pragma once

#include <stdexcept>
#include <string>

namespace pathamp {

// Base of every library error. Input-validation failures derive from
// std::invalid_argument instead (see ValidationError).
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An input violated a documented invariant. field() names the offending field.
class ValidationError : public std::invalid_argument {
  public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

class SingularAction : public Error { using Error::Error; };
class DimensionTooLarge : public Error { using Error::Error; };
class NonConvergent : public Error { using Error::Error; };
class PoleAtEvaluation : public Error { using Error::Error; };
class UnstableMode : public Error { using Error::Error; };
class ResonantCoupling : public Error { using Error::Error; };
class EquidistanceViolated : public Error { using Error::Error; };
class ZeroMomentum : public Error { using Error::Error; };

}  // namespace pathamp
