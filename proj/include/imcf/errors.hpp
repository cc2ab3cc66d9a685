#pragma once

#include <stdexcept>
#include <string>

namespace imcf {

/// Base of every error raised by the solver library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters outside n >= 2, lambda > 0, mu < 0 (or a formula's own domain).
class DomainError : public Error {
public:
    using Error::Error;
};

/// w = r*fr - f <= 0: the profile left the regime where the equation is defined.
class SingularDenominator : public Error {
public:
    SingularDenominator(double r, double w)
        : Error("singular denominator: r*fr - f = " + std::to_string(w) + " at r = " + std::to_string(r)),
          r_(r), w_(w) {}
    double radius() const noexcept { return r_; }
    double w() const noexcept { return w_; }

private:
    double r_;
    double w_;
};

class SingularRadius : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Picard iterate with s*h(s) - g(s) <= 0 at some node.
class DenominatorCollapse : public Error {
public:
    using Error::Error;
};

/// Picard image left the trust ball around the initial constant state.
class BallEscape : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, double last_width, double last_ratio)
        : Error(what), last_width_(last_width), last_ratio_(last_ratio) {}
    double last_width() const noexcept { return last_width_; }
    double last_ratio() const noexcept { return last_ratio_; }

private:
    double last_width_;
    double last_ratio_;
};

class StepUnderflow : public Error {
public:
    StepUnderflow(double r, double step)
        : Error("step size underflow: h = " + std::to_string(step) + " at r = " + std::to_string(r)),
          r_(r) {}
    double radius() const noexcept { return r_; }

private:
    double r_;
};

class InsufficientRange : public Error {
public:
    using Error::Error;
};

class ZeroHeight : public Error {
public:
    using Error::Error;
};

class SeriesDivergence : public Error {
public:
    using Error::Error;
};

class VanishingMeanCurvature : public Error {
public:
    using Error::Error;
};

/// Malformed profile / manifest input file.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace imcf
