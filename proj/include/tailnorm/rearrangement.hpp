#pragma once

// Decreasing rearrangement f* and its running average f**.

#include <memory>

#include "tailnorm/function_model.hpp"

namespace tailnorm {

/// s -> f*(s) on (0, mass), extended by 0 beyond the mass.
class Rearrangement {
public:
    explicit Rearrangement(const FunctionSpec& f);

    double operator()(double s) const;
    /// log f*(mass * e^{-y}); accurate far below double range of s.
    double log_at_neglog(double y) const;

    double mass() const { return mass_; }
    /// Discontinuity locations in s.
    std::span<const double> breaks() const { return breaks_; }
    const FunctionSpec& source() const { return *source_; }
    /// Measure of {f* > 0}.
    double support_measure() const;

private:
    std::shared_ptr<const FunctionSpec> source_;
    double mass_;
    RealFn eval_;
    RealFn log_neglog_;
    std::vector<double> breaks_;
};

TailFunction tail_of(const FunctionSpec& f);
Rearrangement rearrange(const FunctionSpec& f);

/// s -> integral of g over (0, s], for g given as y -> log g(anchor e^{-y}) on (0, upper].
/// Precomputes the head integral and a log-spaced knot table; each query adds one
/// Gauss-Kronrod segment.
class CumulativeIntegral {
public:
    CumulativeIntegral(RealFn log_neglog, double anchor, double upper, std::vector<double> breaks,
                       const QuadratureOptions& opts = {});

    /// Finite, or Diverges when g is not integrable at 0.
    const NormResult& status() const { return head_; }
    bool finite() const { return head_.is_finite(); }
    double upper() const { return upper_; }
    /// Integral over (0, s]; s is clamped to upper.
    double operator()(double s) const;

private:
    double integrand(double s) const;

    RealFn log_neglog_;
    double anchor_;
    double upper_;
    QuadratureOptions opts_;
    NormResult head_;
    std::vector<double> knots_;
    std::vector<double> values_;
};

/// f** as a reusable evaluator; beyond the mass f* is extended by 0.
class AveragedRearrangement {
public:
    explicit AveragedRearrangement(const Rearrangement& r, const QuadratureOptions& opts = {});

    const NormResult& status() const { return integral_.status(); }
    /// f**(t); +inf when f* is not integrable at 0.
    double operator()(double t) const;

private:
    std::shared_ptr<const Rearrangement> rearrangement_;
    CumulativeIntegral integral_;
    double mass_;
};

/// f**(t) = t^{-1} times the integral of f* over (0, t].
NormResult double_star(const FunctionSpec& f, double t);

/// Greedy top-weight average over atoms, the boundary atom taken fractionally.
double double_star_oracle(const FunctionSpec& f, double t);

}  // namespace tailnorm
