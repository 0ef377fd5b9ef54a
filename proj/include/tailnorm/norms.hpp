#pragma once

// Rearrangement-invariant norm functionals.

#include "tailnorm/function_model.hpp"
#include "tailnorm/rearrangement.hpp"
#include "tailnorm/weights.hpp"
#include "tailnorm/young.hpp"

namespace tailnorm {

struct WeakNormOptions {
    // Restrict the supremum to s >= min_s. Empirical maxima near s = 0 are driven by the
    // largest order statistics; a floor of ceil(sqrt(n))/n makes the estimator consistent.
    double min_s = 0.0;
};

/// sup over t of w(t) f*(t). cross_check holds the dual form sup t w(T_f(t)).
NormResult weak_norm(const FunctionSpec& f, const Weight& w, const GridConfig& cfg = {},
                     const WeakNormOptions& opts = {});
/// sup over t of t w(T_f(t)) alone.
NormResult weak_norm_dual(const FunctionSpec& f, const Weight& w, const GridConfig& cfg = {});
/// Tail bound implied by a weak norm value: T_f(t) <= w^{-1}(value/t).
double weak_tail_bound(const Weight& w, double norm_value, double t);
/// The floor ceil(sqrt(n))/n scaled by the mass, for an empirical spec; 0 otherwise.
double empirical_weak_floor(const FunctionSpec& f);

/// sup over t of w(t) f**(t).
NormResult marcinkiewicz_norm(const FunctionSpec& f, const Weight& w, const GridConfig& cfg = {});

/// |f|_p from p times the integral of t^{p-1} T_f(t); cross_check from the integral of (f*)^p.
NormResult lp_norm(const FunctionSpec& f, double p);

/// sup over t of Phi(t) T_f(t).
NormResult weak_orlicz_rho(const FunctionSpec& f, const YoungFunction& phi, const GridConfig& cfg = {});
/// sup over t of Phi(t/c) T_f(t), the feasibility map of the weak-Orlicz norm.
NormResult weak_orlicz_feasibility(const FunctionSpec& f, const YoungFunction& phi, double c,
                                   const GridConfig& cfg = {});
/// inf{c > 0 : sup_t Phi(t/c) T_f(t) <= 1}.
NormResult weak_orlicz_norm(const FunctionSpec& f, const YoungFunction& phi, const GridConfig& cfg = {});

struct MembershipResult {
    Verdict verdict = Verdict::indeterminate;  // finite means the ladder was conclusive
    bool member = false;
    double failing_c = kNaN;
    std::vector<double> ladder;
    std::vector<NormResult> sups;
    std::string reason;
};
/// Whether sup_t Phi(t/c) T_f(t) is finite for c = 2^{-k}, k = 0..k_max.
MembershipResult in_wM(const FunctionSpec& f, const YoungFunction& phi, const GridConfig& cfg = {},
                       int k_max = 10);

/// Integral of Phi(f*(s)/c) over (0, mass).
NormResult orlicz_modular(const FunctionSpec& f, const YoungFunction& phi, double c);
/// inf{c > 0 : modular(c) <= 1}.
NormResult luxemburg_norm(const FunctionSpec& f, const YoungFunction& phi);

/// sup over p in the support of psi of |f|_p / psi(p).
NormResult gls_norm(const FunctionSpec& f, const PsiFunction& psi, const GridConfig& cfg = {});

/// [integral of (f*)^p w over (0, mass)]^{1/p}.
NormResult lorentz_integral_norm(const FunctionSpec& f, const Weight& w, double p);

}  // namespace tailnorm
