#pragma once

#include <stdexcept>
#include <string>

namespace dlindblad {

// Base of every error raised by the library. The CLI maps PhysicsError
// subclasses to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input violates a physical or mathematical admissibility condition.
class PhysicsError : public Error {
public:
    using Error::Error;
};

// q-phase bracket [n] <= 0 (or a negative Taylor radicand) below the truncation.
class NegativeBracket : public PhysicsError {
public:
    NegativeBracket(int n, double value)
        : PhysicsError("deformation bracket [" + std::to_string(n) +
                       "] = " + std::to_string(value) +
                       " is not positive; reduce tau or the Fock dimension"),
          level(n) {}
    int level;
};

class InvalidTable : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

// Which of the three diffusion constraints failed.
enum class Constraint { DppPositive = 1, DqqPositive = 2, Uncertainty = 3 };

class ConstraintViolation : public PhysicsError {
public:
    ConstraintViolation(Constraint which, const std::string& what)
        : PhysicsError(what), constraint(which) {}
    Constraint constraint;
};

class NonContractive : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class NonDissipative : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class DimensionTooLarge : public Error {
public:
    using Error::Error;
};

class StepUnstable : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dlindblad
