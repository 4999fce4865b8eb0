#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace bcinv {

namespace detail {

/// Six significant digits, for messages.
inline std::string short_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace detail

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong sample counts, off-grid times, out-of-range indices.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The grid has too few steps for a stencil to be applied.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

/// A Goursat cell whose corner system (I + c V) could not be solved.
class IllPosedStep : public Error {
public:
    IllPosedStep(const std::string& what, int p, int q)
        : Error(what), p_(p), q_(q) {}

    /// Characteristic indices (a = p h, b = q h) of the lower-left cell corner.
    int p() const noexcept { return p_; }
    int q() const noexcept { return q_; }

private:
    int p_;
    int q_;
};

/// A shortened connecting operator is numerically singular.
class SingularOperator : public Error {
public:
    SingularOperator(const std::string& what, double xi, int xi_steps, double rcond)
        : Error(what), xi_(xi), xi_steps_(xi_steps), rcond_(rcond) {}

    double xi() const noexcept { return xi_; }
    int xi_steps() const noexcept { return xi_steps_; }
    double rcond() const noexcept { return rcond_; }

private:
    double xi_;
    int xi_steps_;
    double rcond_;
};

/// The response function fails the characterization condition: some C^xi
/// is not an isomorphism, so no potential reproduces it.
class CharacterizationFailure : public SingularOperator {
public:
    using SingularOperator::SingularOperator;
};

}  // namespace bcinv
