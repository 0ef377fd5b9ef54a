#include "tailnorm/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tailnorm/rearrangement.hpp"
#include "numeric_util.hpp"

namespace tailnorm {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

SlowlyVarying SlowlyVarying::constant(double c)
{
    if (!(c > 0.0) || !std::isfinite(c))
        throw Error("constant slowly varying function must be positive");
    SlowlyVarying l;
    l.kind_ = Kind::constant;
    l.c_ = c;
    return l;
}

SlowlyVarying SlowlyVarying::log_power(double kappa)
{
    if (!std::isfinite(kappa))
        throw Error("log-power exponent must be finite");
    SlowlyVarying l;
    l.kind_ = Kind::log_power;
    l.kappa_ = kappa;
    return l;
}

SlowlyVarying SlowlyVarying::log_power_infinity(double kappa)
{
    if (!std::isfinite(kappa))
        throw Error("log-power exponent must be finite");
    SlowlyVarying l;
    l.kind_ = Kind::log_power_infinity;
    l.kappa_ = kappa;
    return l;
}

SlowlyVarying SlowlyVarying::tabulated(std::vector<double> args, std::vector<double> values)
{
    if (args.size() != values.size() || args.size() < 2)
        throw Error("tabulated slowly varying function needs at least two nodes");
    SlowlyVarying l;
    l.kind_ = Kind::tabulated;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!(args[i] > 0.0) || !(values[i] > 0.0))
            throw Error("tabulated slowly varying nodes must be positive");
        if (i > 0 && !(args[i] > args[i - 1]))
            throw Error("tabulated slowly varying arguments must increase");
        l.log_args_.push_back(std::log(args[i]));
        l.log_values_.push_back(std::log(values[i]));
    }
    return l;
}

double SlowlyVarying::log_at_log(double x) const
{
    switch (kind_) {
    case Kind::constant:
        return std::log(c_);
    case Kind::log_power:
        return kappa_ == 0.0 ? 0.0 : kappa_ * std::log(std::abs(x));
    case Kind::log_power_infinity: {
        if (kappa_ == 0.0)
            return 0.0;
        double log1p_z = x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
        return kappa_ * std::log1p(log1p_z);
    }
    case Kind::tabulated: {
        if (x <= log_args_.front())
            return log_values_.front();
        if (x >= log_args_.back())
            return log_values_.back();
        auto it = std::upper_bound(log_args_.begin(), log_args_.end(), x);
        auto i = static_cast<std::size_t>(it - log_args_.begin());
        double w = (x - log_args_[i - 1]) / (log_args_[i] - log_args_[i - 1]);
        return log_values_[i - 1] + w * (log_values_[i] - log_values_[i - 1]);
    }
    }
    return kNaN;
}

double SlowlyVarying::log_value(double arg) const
{
    if (kind_ == Kind::log_power_infinity)
        return kappa_ == 0.0 ? 0.0 : kappa_ * std::log1p(std::log1p(std::max(arg, 0.0)));
    if (!(arg > 0.0))
        return kind_ == Kind::constant ? std::log(c_) : kNaN;
    return log_at_log(std::log(arg));
}

double SlowlyVarying::operator()(double arg) const
{
    return std::exp(log_value(arg));
}

double SlowlyVarying::variation_ratio(double lambda) const
{
    double a = slowly_varying_at_zero() ? 1e-8 : 1e8;
    return std::exp(log_value(lambda * a) - log_value(a));
}

std::string SlowlyVarying::describe() const
{
    switch (kind_) {
    case Kind::constant:
        return "constant c=" + fmt(c_);
    case Kind::log_power:
        return "log_power kappa=" + fmt(kappa_);
    case Kind::log_power_infinity:
        return "log_power_infinity kappa=" + fmt(kappa_);
    case Kind::tabulated:
        return "tabulated nodes=" + std::to_string(log_args_.size());
    }
    return "?";
}

// ---------------------------------------------------------------------------

Weight::Weight(std::string family, Params params, double mass, RealFn log_at_log, RealFn inverse,
               RealFn direct)
    : family_(std::move(family)), params_(std::move(params)), mass_(mass),
      log_at_log_(std::move(log_at_log)), inverse_(std::move(inverse)), direct_(std::move(direct))
{
    if (!(mass_ > 0.0) || !std::isfinite(mass_))
        throw Error("weights live on a space of finite positive mass");
    if (!log_at_log_)
        throw Error("weight needs an evaluator");
}

double Weight::operator()(double s) const
{
    if (s <= 0.0)
        return 0.0;
    s = std::min(s, mass_);
    if (direct_)
        return direct_(s);
    return std::exp(log_at_log_(std::log(s)));
}

double Weight::log_at_log(double x) const
{
    return log_at_log_(std::min(x, std::log(mass_)));
}

double Weight::inverse(double v) const
{
    if (!(v > 0.0))
        return 0.0;
    const double x_top = std::log(mass_);
    const double log_v = std::log(v);
    if (log_at_log(x_top) < log_v)
        return mass_;
    if (inverse_)
        return std::min(mass_, inverse_(v));
    double lo = -745.0;
    double hi = x_top;
    if (log_at_log(lo) >= log_v)
        return 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
        double mid = 0.5 * (lo + hi);
        (log_at_log(mid) >= log_v ? hi : lo) = mid;
    }
    return std::exp(hi);
}

std::string Weight::describe() const
{
    std::ostringstream os;
    os << family_;
    for (const auto& [k, v] : params_)
        os << ' ' << k << '=' << v;
    os << " mass=" << mass_;
    return os.str();
}

Weight Weight::scaled(double c) const
{
    if (!(c > 0.0) || !std::isfinite(c))
        throw Error("weight scale must be positive");
    const double log_c = std::log(c);
    auto base = log_at_log_;
    RealFn inv;
    if (inverse_) {
        auto bi = inverse_;
        inv = [bi, c](double v) { return bi(v / c); };
    }
    RealFn direct;
    if (direct_) {
        auto bd = direct_;
        direct = [bd, c](double s) { return c * bd(s); };
    }
    Params params = params_;
    params["scale"] = params_.count("scale") ? params_.at("scale") * c : c;
    return Weight(family_, params, mass_, [base, log_c](double x) { return base(x) + log_c; }, inv,
                  direct);
}

Weight power_weight(double p, double mass)
{
    if (!(p > 0.0) || !std::isfinite(p))
        throw Error("power weight needs p > 0");
    return Weight("power", {{"p", p}}, mass, [p](double x) { return x / p; },
                  [p](double v) { return std::pow(v, p); });
}

Weight log_weight(double p, const SlowlyVarying& l, double mass)
{
    if (!(p > 0.0) || !std::isfinite(p))
        throw Error("log weight needs p > 0");
    Params params{{"p", p}};
    if (l.kind() == SlowlyVarying::Kind::log_power || l.kind() == SlowlyVarying::Kind::log_power_infinity)
        params["kappa"] = l.kappa();
    return Weight("log", params, mass, [p, l](double x) { return x / p + l.log_at_log(x); });
}

Weight custom_weight(std::string label, RealFn w, double mass)
{
    if (!w)
        throw Error("custom weight needs an evaluator");
    auto log_w = [w](double x) {
        double v = w(std::exp(x));
        return v > 0.0 ? std::log(v) : (v == 0.0 ? -kInf : kNaN);
    };
    return Weight(std::move(label), {}, mass, log_w, {}, w);
}

// ---------------------------------------------------------------------------

ValidationReport validate_weight(const Weight& w, const GridConfig& cfg)
{
    ValidationReport report;
    const double mass = w.mass();
    std::vector<double> grid = scan_points({0.0, mass}, cfg);
    std::vector<double> values;
    values.reserve(grid.size());
    for (double s : grid)
        values.push_back(w(s));

    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            report.fail("w is not finite and positive at s=" + fmt(grid[i]) + " (w=" + fmt(values[i]) + ")");
            break;
        }
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (values[i] < values[i - 1] * (1.0 - 1e-12) || std::isnan(values[i])) {
            report.fail("w decreases between s=" + fmt(grid[i - 1]) + " and s=" + fmt(grid[i]));
            break;
        }
    }
    if (report.valid && !(values.back() > values.front()))
        report.fail("w is not strictly increasing over the scanned range");
    if (!report.valid)
        return report;

    // A jump keeps its log-increment under bisection; a continuous w loses it.
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double a = grid[i - 1], b = grid[i];
        double la = std::log(values[i - 1]), lb = std::log(values[i]);
        const double initial = lb - la;
        if (!(initial > 1e-6))
            continue;
        for (int k = 0; k < 40 && b - a > 1e-15 * b; ++k) {
            double m = 0.5 * (a + b);
            double lm = std::log(w(m));
            if (lm - la >= lb - lm) {
                b = m;
                lb = lm;
            } else {
                a = m;
                la = lm;
            }
        }
        if (lb - la > 1e-6 && lb - la > 0.25 * initial) {
            report.fail("w jumps near s=" + fmt(b));
            break;
        }
    }

    // w(0+) = 0: small at the left end and still decreasing there.
    std::size_t mid = grid.size() / 2;
    if (!(values.front() <= 1e-2 * values[mid]) || !(values[1] > values[0]))
        report.fail("w does not tend to 0 at 0+ (w(" + fmt(grid.front()) + ")=" + fmt(values.front()) + ")");

    double at_mass = w(mass);
    if (std::isfinite(at_mass))
        report.advise("w stays bounded at the end of the space (w(mass)=" + fmt(at_mass) +
                      "); the blow-up clause is advisory on finite-mass spaces");

    // t -> w^{-1}(1/t) must be a tail function.
    std::vector<double> ts = scan_points({0.0, kInf}, cfg);
    double prev = kInf;
    for (double t : ts) {
        double T = w.inverse(1.0 / t);
        if (!(T >= 0.0 && T <= mass)) {
            report.fail("w^{-1}(1/t) leaves [0, mass] at t=" + fmt(t));
            break;
        }
        if (T > prev * (1.0 + 1e-9)) {
            report.fail("w^{-1}(1/t) increases near t=" + fmt(t));
            break;
        }
        prev = T;
    }
    return report;
}

NormResult gamma(const Weight& w, const GridConfig& cfg)
{
    const double mass = w.mass();
    const double log_mass = std::log(mass);
    CumulativeIntegral inv_integral([&w, log_mass](double y) { return -w.log_at_log(log_mass - y); }, mass,
                                    mass, {});
    if (!inv_integral.finite()) {
        NormResult r = inv_integral.status();
        r.reason = "1/w is not integrable at 0: " + r.reason;
        return r;
    }
    auto log_ratio = [&](double t) {
        double lt = std::log(t);
        double integral = inv_integral(t);
        if (!(integral > 0.0))
            return kNaN;
        return w.log_at_log(lt) - lt + std::log(integral);
    };
    return supremum_scan_log(log_ratio, {0.0, mass}, cfg);
}

Weight natural_weight(const FunctionSpec& g)
{
    Rearrangement r(g);
    const double support = r.support_measure();
    if (!(support > 0.0))
        throw Error("natural weight needs a nonzero function");
    NormResult integral = double_star(g, support);
    if (!integral.is_finite())
        throw Error("natural weight needs an integrable function");
    const double log_mass = std::log(r.mass());
    auto log_w = [r, log_mass](double x) { return -r.log_at_neglog(log_mass - x); };
    return Weight("natural", {}, support, log_w);
}

double fundamental_function(const Weight& w, double delta)
{
    if (!(delta > 0.0) || delta > w.mass())
        throw Error("fundamental function needs delta in (0, mass]");
    return w(delta);
}

double associate_fundamental(const Weight& w, double delta)
{
    if (!(delta > 0.0) || delta > w.mass())
        throw Error("associate fundamental function needs delta in (0, mass]");
    return delta / w(delta);
}

}  // namespace tailnorm
