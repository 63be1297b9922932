#pragma once

#include <stdexcept>
#include <string>

namespace kschemo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model parameter or configuration value violates its invariant.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Evaluation point lies outside the closed domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Field or grid does not match the domain it is used with.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// f'(ubar) * phi(ubar, vbar) vanishes, so bifurcation values are undefined.
class DegenerateModelError : public Error {
public:
    using Error::Error;
};

/// The second-order moment system is singular or too badly conditioned.
class IllConditionedError : public Error {
public:
    using Error::Error;
};

/// Second-order branch analytics requested where the first-order slope is nonzero.
class BranchTypeError : public Error {
public:
    using Error::Error;
};

/// Model violates an assumption of the branch analytics (for example f'' != 0).
class BranchAssumptionError : public Error {
public:
    using Error::Error;
};

/// Requested time step exceeds the transport stability bound.
class StepSizeError : public Error {
public:
    StepSizeError(double dt, double bound)
        : Error("time step " + std::to_string(dt) + " exceeds transport bound " +
                std::to_string(bound)),
          dt_(dt), bound_(bound) {}

    double dt() const { return dt_; }
    double bound() const { return bound_; }

private:
    double dt_;
    double bound_;
};

/// Growth measurement left the linear regime before enough samples were taken.
class InsufficientWindowError : public Error {
public:
    using Error::Error;
};

/// Configuration text could not be parsed; carries the 1-based line number (0 if global).
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& message)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

}  // namespace kschemo
