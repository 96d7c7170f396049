#ifndef GENSUB_ERRORS_HPP
#define GENSUB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gensub {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes that do not fit together (non-square input, size mismatch).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An input violates a stated invariant (Hermiticity, positivity, normalization, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An embedding does not invert the pull-back on the given reduced state.
class ConsistencyError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A nonlinear solver stopped without reaching its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The solver Jacobian lost rank; `what()` names the unreachable direction.
class RankDeficiencyError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

/// A time integration produced non-finite values.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& msg, double time) : Error(msg), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace gensub

#endif // GENSUB_ERRORS_HPP
