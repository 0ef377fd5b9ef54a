#pragma once

// Weights w (continuous, increasing, w(0+) = 0), slowly varying corrections,
// the gamma functional and fundamental functions.

#include "tailnorm/function_model.hpp"

namespace tailnorm {

/// Positive slowly varying correction l.
///   constant:          l = c
///   log_power:         l(s) = |log s|^kappa, slowly varying as s -> 0+
///   log_power_infinity l(z) = (1 + log(1 + z))^kappa, slowly varying as z -> infinity
///   tabulated:         log-log interpolation through user nodes, flat outside
class SlowlyVarying {
public:
    enum class Kind { constant, log_power, log_power_infinity, tabulated };

    static SlowlyVarying constant(double c = 1.0);
    static SlowlyVarying log_power(double kappa);
    static SlowlyVarying log_power_infinity(double kappa);
    static SlowlyVarying tabulated(std::vector<double> args, std::vector<double> values);

    double operator()(double arg) const;
    double log_value(double arg) const;
    /// log l(e^x); exact for the closed-form kinds.
    double log_at_log(double x) const;

    Kind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    std::string describe() const;

    /// l(lambda a)/l(a) at a = 10^-8 (zero side) or 10^8 (infinity side).
    double variation_ratio(double lambda) const;
    bool slowly_varying_at_zero() const { return kind_ != Kind::log_power_infinity; }

private:
    SlowlyVarying() = default;

    Kind kind_ = Kind::constant;
    double c_ = 1.0;
    double kappa_ = 0.0;
    std::vector<double> log_args_;
    std::vector<double> log_values_;
};

class Weight {
public:
    /// `log_at_log` maps x to log w(e^x); `inverse` may be empty (numeric inversion).
    /// `direct` evaluates w itself when it can leave (0, inf), as unvalidated weights may.
    Weight(std::string family, Params params, double mass, RealFn log_at_log, RealFn inverse = {},
           RealFn direct = {});

    /// w(s); s beyond the mass evaluates at the mass.
    double operator()(double s) const;
    double log_at_log(double x) const;
    /// w^{-1}(v) = inf{s : w(s) >= v}, clamped to [0, mass].
    double inverse(double v) const;

    double mass() const { return mass_; }
    const std::string& family() const { return family_; }
    const Params& params() const { return params_; }
    std::string describe() const;

    Weight scaled(double c) const;

private:
    std::string family_;
    Params params_;
    double mass_;
    RealFn log_at_log_;
    RealFn inverse_;
    RealFn direct_;
};

/// w_p(s) = s^{1/p}.
Weight power_weight(double p, double mass = 1.0);
/// w_{p,l}(s) = s^{1/p} l(s).
Weight log_weight(double p, const SlowlyVarying& l, double mass = 1.0);
/// Arbitrary evaluator; validate_weight decides admissibility.
Weight custom_weight(std::string label, RealFn w, double mass = 1.0);

/// Monotonicity, continuity, endpoint limits, and that t -> w^{-1}(1/t) is a tail function.
ValidationReport validate_weight(const Weight& w, const GridConfig& cfg = {});

/// sup over t in (0, mass) of (w(t)/t) times the integral of 1/w over (0, t].
NormResult gamma(const Weight& w, const GridConfig& cfg = {});

/// w(s) = 1/g*(s) on the support of g*. Rejects g = 0 and g not integrable.
Weight natural_weight(const FunctionSpec& g);

/// Fundamental function of the weighted space: w(delta).
double fundamental_function(const Weight& w, double delta);
/// Fundamental function of the associate space: delta / w(delta).
double associate_fundamental(const Weight& w, double delta);

}  // namespace tailnorm
