#pragma once

#include <stdexcept>
#include <string>

namespace shocklab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

/// Argument lies outside the domain an operation is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

class NonFiniteValue : public Error {
public:
    using Error::Error;
};

/// Inversion target outside the tracked range; the shock left the window.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// u_B < u_T (or a monotone profile) was required and does not hold.
class OrderingViolation : public Error {
public:
    using Error::Error;
};

class CflViolation : public Error {
public:
    using Error::Error;
};

/// A time step failed (NaN, positivity or monotonicity loss, gap underflow).
class StepAborted : public Error {
public:
    StepAborted(const std::string& what, double time)
        : Error(what + " (t=" + std::to_string(time) + ")"), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class NotAShock : public Error {
public:
    using Error::Error;
};

class DegenerateEnsemble : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace shocklab
