#include "tailnorm/young.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tailnorm/norms.hpp"

namespace tailnorm {

namespace {

std::string describe_params(const std::string& family, const Params& params)
{
    std::ostringstream os;
    os << family;
    for (const auto& [k, v] : params)
        os << ' ' << k << '=' << v;
    return os.str();
}

// log(e^nu - 1) for nu = e^{log_nu}.
double log_expm1_of_exp(double log_nu)
{
    if (log_nu == -kInf)
        return -kInf;
    double nu = std::exp(log_nu);
    if (nu < 30.0)
        return std::log(std::expm1(nu));
    return nu + std::log1p(-std::exp(-nu));
}

double require(const Params& params, const std::string& family, const std::string& key)
{
    auto it = params.find(key);
    if (it == params.end())
        throw Error("psi family '" + family + "' requires parameter '" + key + "'");
    return it->second;
}

double param_or(const Params& params, const std::string& key, double fallback)
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void check_known(const Params& params, const std::string& family, std::initializer_list<const char*> known)
{
    for (const auto& [key, value] : params) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
            throw Error("psi family '" + family + "' has no parameter '" + key + "'");
        if (!std::isfinite(value))
            throw Error("psi parameter '" + key + "' must be finite");
    }
}

}  // namespace

// ---------------------------------------------------------------------------

YoungFunction::YoungFunction(std::string family, Params params, RealFn log_eval_log)
    : family_(std::move(family)), params_(std::move(params)), log_eval_log_(std::move(log_eval_log))
{
    if (!log_eval_log_)
        throw Error("Young function needs an evaluator");
}

double YoungFunction::log_eval(double u) const
{
    u = std::abs(u);
    if (u == 0.0)
        return -kInf;
    return log_eval_log_(std::log(u));
}

double YoungFunction::operator()(double u) const
{
    return std::exp(log_eval(u));
}

std::string YoungFunction::describe() const
{
    return describe_params(family_, params_);
}

YoungFunction power_young(double q)
{
    if (!(q >= 1.0) || !std::isfinite(q))
        throw Error("power Young function needs q >= 1");
    return YoungFunction("power", {{"q", q}}, [q](double lu) { return q * lu; });
}

YoungFunction ExponentialYoung::as_young() const
{
    auto log_nu = log_nu_log;
    return YoungFunction("exp_" + family, params, [log_nu](double lu) { return log_expm1_of_exp(log_nu(lu)); });
}

ExponentialYoung eof_power(double q)
{
    if (!(q > 0.0) || !std::isfinite(q))
        throw Error("exponent power must be positive");
    ExponentialYoung n;
    n.family = "power";
    n.params = {{"q", q}};
    n.nu = [q](double u) { return std::pow(std::abs(u), q); };
    n.nu_prime = [q](double u) {
        if (u == 0.0)
            return q > 1.0 ? 0.0 : (q == 1.0 ? 1.0 : kInf);
        return q * std::pow(std::abs(u), q - 1.0) * (u < 0.0 ? -1.0 : 1.0);
    };
    n.log_nu_log = [q](double x) { return q * x; };
    return n;
}

ExponentialYoung eof_square_log()
{
    ExponentialYoung n;
    n.family = "square_log";
    n.nu = [](double u) { return u * u * std::log1p(u * u); };
    n.nu_prime = [](double u) { return 2.0 * u * std::log1p(u * u) + 2.0 * u * u * u / (1.0 + u * u); };
    n.log_nu_log = [](double x) {
        double l = x > 20.0 ? 2.0 * x + std::log1p(std::exp(-2.0 * x)) : std::log1p(std::exp(2.0 * x));
        return 2.0 * x + std::log(l);
    };
    return n;
}

ExponentialYoung eof_custom(std::string label, RealFn nu, RealFn nu_prime)
{
    if (!nu || !nu_prime)
        throw Error("custom exponent needs nu and its derivative");
    ExponentialYoung n;
    n.family = std::move(label);
    n.nu = nu;
    n.nu_prime = std::move(nu_prime);
    n.log_nu_log = [nu](double x) {
        double v = nu(std::exp(x));
        return v > 0.0 ? std::log(v) : -kInf;
    };
    return n;
}

ValidationReport validate_eof(const ExponentialYoung& n)
{
    ValidationReport report;
    if (std::abs(n.nu(0.0)) > 1e-300)
        report.fail("nu(0) is not 0");
    for (int k = -12; k <= 6; ++k) {
        double u = std::pow(10.0, k);
        if (!(n.nu(u) > 0.0) || !(n.nu(-u) > 0.0)) {
            report.fail("nu vanishes away from 0 near u=" + std::to_string(u));
            break;
        }
        if (std::abs(n.nu(u) - n.nu(-u)) > 1e-12 * n.nu(u)) {
            report.fail("nu is not even");
            break;
        }
    }
    if (!(std::abs(n.nu_prime(0.0)) <= 1e-12))
        report.fail("nu'(0) is not 0");
    // nu(h)/h must tend to 0: its log-log slope against h is positive.
    {
        double h1 = 1e-12, h2 = 1e-2;
        double r1 = n.nu(h1) / h1, r2 = n.nu(h2) / h2;
        double slope = (std::log(r2) - std::log(r1)) / (std::log(h2) - std::log(h1));
        if (!(slope > 1e-3))
            report.fail("nu(h)/h does not tend to 0 as h -> 0 (nu is not differentiable with nu'(0) = 0)");
    }
    // Midpoint convexity on [0, 100].
    for (int i = 0; i < 200; ++i) {
        double a = 0.5 * i;
        double b = a + 0.5 + 0.01 * i;
        double mid = n.nu(0.5 * (a + b));
        double chord = 0.5 * (n.nu(a) + n.nu(b));
        if (mid > chord * (1.0 + 1e-12) + 1e-300) {
            report.fail("nu is not convex near u=" + std::to_string(0.5 * (a + b)));
            break;
        }
    }
    // nu' increases without bound.
    {
        double prev = -kInf;
        bool increasing = true;
        for (int k = 1; k <= 6; ++k) {
            double d = n.nu_prime(std::pow(10.0, k));
            if (!(d > prev))
                increasing = false;
            prev = d;
        }
        double slope = (std::log(n.nu_prime(1e6)) - std::log(n.nu_prime(1e2))) / std::log(1e4);
        if (!increasing || !(slope > 1e-3))
            report.fail("nu' does not grow without bound");
    }
    return report;
}

ValidationReport validate_young(const YoungFunction& phi)
{
    ValidationReport report;
    if (phi(0.0) != 0.0)
        report.fail("Phi(0) is not 0");
    double prev = 0.0;
    for (int i = 1; i <= 4000; ++i) {
        double u = 1e-3 * i * i;
        double v = phi(u);
        if (!(v >= prev * (1.0 - 1e-12))) {
            report.fail("Phi decreases near u=" + std::to_string(u));
            break;
        }
        prev = v;
    }
    for (int i = 0; i < 400; ++i) {
        double a = 0.05 * i;
        double b = a + 0.1;
        if (phi(0.5 * (a + b)) > 0.5 * (phi(a) + phi(b)) * (1.0 + 1e-12)) {
            report.advise("Phi is not convex near u=" + std::to_string(0.5 * (a + b)));
            break;
        }
    }
    return report;
}

YoungFunction phi_p0_delta_s(double p0, double delta, const SlowlyVarying& s)
{
    if (!(p0 > 1.0) || !(delta >= 0.0) || !std::isfinite(p0) || !std::isfinite(delta))
        throw Error("Phi_{p0,Delta,S} needs p0 > 1 and Delta >= 0");
    if (s.slowly_varying_at_zero() && s.kind() != SlowlyVarying::Kind::constant &&
        s.kind() != SlowlyVarying::Kind::tabulated)
        throw Error("S must be slowly varying at infinity");
    const double log_c = (p0 - 2.0) + s.log_value(1.0);
    Params params{{"p0", p0}, {"delta", delta}};
    if (s.kind() == SlowlyVarying::Kind::log_power_infinity)
        params["s_kappa"] = s.kappa();
    return YoungFunction("p0_delta_s", params, [=](double lu) {
        if (lu <= 1.0)
            return log_c + 2.0 * lu;
        return p0 * lu - delta * std::log(lu) + s.log_value(lu);
    });
}

// ---------------------------------------------------------------------------

PsiFunction::PsiFunction(std::string family, Params params, double a, double b, RealFn log_eval,
                         bool closed_lower)
    : family_(std::move(family)), params_(std::move(params)), a_(a), b_(b), log_eval_(std::move(log_eval)),
      closed_lower_(closed_lower)
{
    if (!(a_ >= 1.0) || !(b_ >= a_))
        throw Error("psi support must satisfy 1 <= A < B");
}

double PsiFunction::log_eval(double p) const
{
    if (degenerate())
        return p == a_ ? 0.0 : kInf;
    if (!((p > a_ || (closed_lower_ && p == a_)) && p < b_))
        return kInf;
    return log_eval_(p);
}

double PsiFunction::operator()(double p) const
{
    return std::exp(log_eval(p));
}

double PsiFunction::degenerate_point() const
{
    if (!degenerate())
        throw Error("psi is not degenerate");
    return a_;
}

std::string PsiFunction::describe() const
{
    return describe_params(family_, params_);
}

PsiFunction make_psi(const std::string& family, const Params& params)
{
    if (family == "power_blowup") {
        check_known(params, family, {"B", "beta", "A"});
        double B = require(params, family, "B");
        double beta = require(params, family, "beta");
        double A = param_or(params, "A", 1.0);
        if (!(B > 1.0) || !(beta >= 0.0) || !(A >= 1.0) || !(A < B))
            throw Error("power_blowup psi needs B > 1, beta >= 0, 1 <= A < B");
        return PsiFunction(family, params, A, B, [B, beta](double p) { return -beta * std::log(B - p); });
    }
    if (family == "p0_delta_s") {
        check_known(params, family, {"p0", "delta", "s_kappa"});
        double p0 = require(params, family, "p0");
        double delta = param_or(params, "delta", 0.0);
        double s_kappa = param_or(params, "s_kappa", 0.0);
        if (!(p0 > 1.0) || !(delta > -1.0))
            throw Error("p0_delta_s psi needs p0 > 1 and Delta > -1");
        SlowlyVarying s = SlowlyVarying::log_power_infinity(s_kappa);
        return PsiFunction(family, params, 1.0, p0, [=](double p) {
            double gap = p0 - p;
            return -(1.0 + delta) / p0 * std::log(gap) + s.log_value(p0 / gap) / p0;
        });
    }
    if (family == "degenerate") {
        check_known(params, family, {"r"});
        double r = require(params, family, "r");
        if (!(r >= 1.0))
            throw Error("degenerate psi needs r >= 1");
        return PsiFunction(family, params, r, r, [](double) { return 0.0; });
    }
    throw Error("unknown psi family '" + family + "'");
}

NaturalPsi natural_psi(const FunctionSpec& f, double a, double b, int nodes)
{
    if (!(a >= 1.0) || !(b > a) || !std::isfinite(b))
        throw Error("natural psi needs a finite range 1 <= a < b");
    if (nodes < 3)
        throw Error("natural psi needs at least three nodes");
    NaturalPsi out{PsiFunction("natural", {{"a", a}, {"b", b}}, a, b, [](double) { return 0.0; }), {}, {}, {}};
    std::vector<double> logs;
    for (int i = 0; i < nodes; ++i) {
        double p = a + (b - a) * i / (nodes - 1);
        NormResult r = lp_norm(f, p);
        if (r.is_finite() && r.value > 0.0) {
            out.nodes.push_back(p);
            out.values.push_back(r.value);
            logs.push_back(r.log_value);
        } else if (r.is_diverges()) {
            out.divergent.push_back(p);
        } else {
            throw IndeterminateError("moment of order " + std::to_string(p) + " is indeterminate: " + r.reason);
        }
    }
    if (out.nodes.size() < 2)
        throw Error("natural psi needs a function with at least two finite moments in range");
    double hi = out.nodes.back();
    if (!out.divergent.empty())
        hi = std::min(hi, out.divergent.front());

    // Evaluated exactly rather than interpolated from the table: a moment costs well under a
    // millisecond, and exact values make gls_norm(f, natural psi of f) = 1 hold to rounding.
    auto eval = [f](double p) {
        NormResult r = lp_norm(f, p);
        if (r.is_diverges())
            return kInf;
        return r.is_finite() ? r.log_value : kNaN;
    };
    out.psi = PsiFunction("natural", {{"a", a}, {"b", hi}}, a, hi, eval, true);
    return out;
}

}  // namespace tailnorm
