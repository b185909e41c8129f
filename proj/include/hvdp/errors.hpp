#pragma once

#include <stdexcept>
#include <string>

namespace hvdp {

// Base for every failure raised by the library. Numerical failures map to
// CLI exit code 2, InvalidArgument to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A quantity that needs 1/sqrt(alpha) or a phase was asked for at alpha <= 0.
class DomainError : public Error {
public:
    using Error::Error;
};

class StepUnderflowError : public Error {
public:
    using Error::Error;
};

class NonFiniteStateError : public Error {
public:
    using Error::Error;
};

// Iterative procedure (settling, quadrature, root bracketing) did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class AdiabaticityError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hvdp
