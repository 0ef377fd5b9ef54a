#pragma once

// Young functions, exponential Young functions N = e^nu - 1, the power-log family
// Phi_{p0,Delta,S}, and psi-functions generating Grand Lebesgue norms.

#include "tailnorm/function_model.hpp"
#include "tailnorm/weights.hpp"

namespace tailnorm {

/// Even, Phi(0) = 0, nondecreasing on [0, inf). Evaluated through log Phi(e^x) so that
/// modulars of heavy functions stay representable.
class YoungFunction {
public:
    YoungFunction(std::string family, Params params, RealFn log_eval_log);

    double operator()(double u) const;
    double log_eval(double u) const;
    double log_eval_log(double log_u) const { return log_eval_log_(log_u); }

    const std::string& family() const { return family_; }
    const Params& params() const { return params_; }
    std::string describe() const;

private:
    std::string family_;
    Params params_;
    RealFn log_eval_log_;
};

/// Phi(u) = |u|^q.
YoungFunction power_young(double q);

/// N(u) = e^{nu(u)} - 1 from an even exponent nu and its derivative.
struct ExponentialYoung {
    std::string family;
    Params params;
    RealFn nu;
    RealFn nu_prime;
    // log nu(e^x); keeps nu itself representable far out.
    RealFn log_nu_log;

    YoungFunction as_young() const;
};

/// nu(u) = |u|^q.
ExponentialYoung eof_power(double q);
/// nu(u) = u^2 log(1 + u^2).
ExponentialYoung eof_square_log();
ExponentialYoung eof_custom(std::string label, RealFn nu, RealFn nu_prime);

/// nu(0) = 0 only at 0, nu'(0) = 0, convexity, and nu' unbounded, on a sample grid.
ValidationReport validate_eof(const ExponentialYoung& n);

/// Grid checks for a Young function: Phi(0) = 0, monotone; convexity failures are advisories.
ValidationReport validate_young(const YoungFunction& phi);

/// C u^2 for |u| <= e, |u|^{p0} (log|u|)^{-Delta} S(log|u|) beyond; C = e^{p0-2} S(1).
YoungFunction phi_p0_delta_s(double p0, double delta, const SlowlyVarying& s);

/// p -> psi(p), finite and positive on (a, b), +inf outside; `closed_lower` admits p = a.
class PsiFunction {
public:
    PsiFunction(std::string family, Params params, double a, double b, RealFn log_eval,
                bool closed_lower = false);

    double operator()(double p) const;
    double log_eval(double p) const;
    double lower() const { return a_; }
    double upper() const { return b_; }
    const std::string& family() const { return family_; }
    const Params& params() const { return params_; }
    /// Degenerate psi_r: 1 at r, +inf elsewhere.
    bool degenerate() const { return family_ == "degenerate"; }
    double degenerate_point() const;
    std::string describe() const;

private:
    std::string family_;
    Params params_;
    double a_;
    double b_;
    RealFn log_eval_;
    bool closed_lower_ = false;
};

/// Families:
///   power_blowup  B, beta [, A]          psi = (B - p)^{-beta} on (A, B)
///   p0_delta_s    p0, delta [, s_kappa]  psi = (p0 - p)^{-(1+delta)/p0} S^{1/p0}(p0/(p0 - p)) on (1, p0)
///   degenerate    r                      psi = 1 at r
PsiFunction make_psi(const std::string& family, const Params& params);

/// psi(p) = |f|_p on [a, b), evaluated exactly; the table on equispaced nodes is kept for
/// reporting, and nodes where the moment diverges are recorded and cut from the support.
struct NaturalPsi {
    PsiFunction psi;
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> divergent;
};
NaturalPsi natural_psi(const FunctionSpec& f, double a, double b, int nodes = 129);

}  // namespace tailnorm
