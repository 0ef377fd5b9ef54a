#include "tailnorm/rearrangement.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "numeric_util.hpp"

namespace tailnorm {

namespace {

RealFn neglog_from_map(RealFn map, double mass)
{
    auto direct = [map = std::move(map), mass](double y) {
        double v = map(mass * std::exp(-y));
        return v > 0.0 ? std::log(v) : -kInf;
    };
    // Points below the smallest normal double are not resolvable through the map; there log f*
    // continues linearly in y from the last resolvable unit step (a power-law continuation).
    const double y_lim = std::log(mass / std::numeric_limits<double>::min());
    const double g_lim = direct(y_lim);
    const double slope = g_lim - direct(y_lim - 1.0);
    return [direct, y_lim, g_lim, slope](double y) {
        if (y <= y_lim || !std::isfinite(g_lim) || !std::isfinite(slope))
            return direct(std::min(y, y_lim));
        return g_lim + std::max(slope, 0.0) * (y - y_lim);
    };
}

// T(t) = mass * e^{-y*}, y* = inf{y : log m(mass e^{-y}) >= log t}; the map is nonincreasing in x.
TailFunction pointwise_tail(const PointwiseMonotone& pm, double mass)
{
    RealFn g = pm.log_map_neglog ? pm.log_map_neglog : neglog_from_map(pm.map, mass);
    const double log_mass = std::log(mass);
    auto log_tail = [g, log_mass](double x) {
        const double target = x;  // log t
        constexpr double kTiny = 1e-300;
        if (g(kTiny) >= target)
            return log_mass;
        double lo = kTiny;
        constexpr double kHuge = 1e300;
        double hi = 1.0;
        while (!(g(hi) >= target)) {
            if (hi >= kHuge)
                return -kInf;
            lo = hi;
            hi = hi < 16.0 ? 2.0 * hi : std::min(hi * hi, kHuge);
        }
        // Bracketed root of g(y) = log t; the upper end of the final bracket has g >= log t.
        // g is -inf where f vanishes; clamp so the solver's interpolation stays finite.
        auto h = [&](double y) { return std::max(g(y) - target, -1e10); };
        std::uintmax_t iters = 200;
        auto [a, b] = boost::math::tools::toms748_solve(h, lo, hi, boost::math::tools::eps_tolerance<double>(50),
                                                        iters);
        return log_mass - (h(a) >= 0.0 ? a : b);
    };
    auto eval = [log_tail, mass](double t) {
        if (t <= 0.0)
            return mass;
        return std::exp(log_tail(std::log(t)));
    };
    return TailFunction(eval, mass, {}, log_tail);
}

}  // namespace

TailFunction tail_of(const FunctionSpec& f)
{
    const double mass = f.measure().total_mass;
    return std::visit(
        [&](const auto& v) -> TailFunction {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, AnalyticTail>) {
                return v.tail;
            } else if constexpr (std::is_same_v<V, PointwiseMonotone>) {
                if (!std::isfinite(mass))
                    throw Error("pointwise functions need a finite mass");
                return pointwise_tail(v, mass);
            } else {
                return empirical_tail(f);
            }
        },
        f.variant());
}

// ---------------------------------------------------------------------------

Rearrangement::Rearrangement(const FunctionSpec& f)
    : source_(std::make_shared<const FunctionSpec>(f)), mass_(f.measure().total_mass)
{
    if (!std::isfinite(mass_))
        throw Error("rearrangement needs a finite mass");
    const double mass = mass_;
    const FunctionSpec& src = *source_;
    if (const auto* a = std::get_if<AnalyticTail>(&src.variant())) {
        if (a->rearrangement) {
            eval_ = a->rearrangement;
        } else {
            TailFunction tail = a->tail;
            eval_ = [tail, mass](double s) { return s >= mass ? 0.0 : left_inverse(tail, s); };
        }
        log_neglog_ = a->log_rearrangement_neglog ? a->log_rearrangement_neglog : neglog_from_map(eval_, mass);
        breaks_ = a->rearrangement_breaks;
    } else if (const auto* pm = std::get_if<PointwiseMonotone>(&src.variant())) {
        auto map = pm->map;
        eval_ = [map, mass](double s) { return s >= mass ? 0.0 : map(s); };
        log_neglog_ = pm->log_map_neglog ? pm->log_map_neglog : neglog_from_map(eval_, mass);
        breaks_ = pm->breaks;
    } else {
        const Empirical* e = src.empirical_data();
        eval_ = [e, mass](double s) {
            if (s >= mass || s < 0.0)
                return 0.0;
            auto it = std::upper_bound(e->cumulative.begin(), e->cumulative.end(), s);
            if (it == e->cumulative.end())
                return 0.0;
            return e->magnitudes[static_cast<std::size_t>(it - e->cumulative.begin())];
        };
        log_neglog_ = neglog_from_map(eval_, mass);
        breaks_.assign(e->cumulative.begin(), e->cumulative.end() - 1);
    }
    std::sort(breaks_.begin(), breaks_.end());
}

double Rearrangement::operator()(double s) const
{
    if (!(s > 0.0))
        throw Error("rearrangement is defined for s > 0");
    if (s >= mass_)
        return 0.0;
    return eval_(s);
}

double Rearrangement::log_at_neglog(double y) const
{
    if (y <= 0.0)
        return -kInf;
    return log_neglog_(y);
}

double Rearrangement::support_measure() const
{
    if (const Empirical* e = source_->empirical_data()) {
        for (std::size_t i = e->magnitudes.size(); i-- > 0;)
            if (e->magnitudes[i] > 0.0)
                return e->cumulative[i];
        return 0.0;
    }
    return std::min(mass_, tail_of(*source_)(1e-300));
}

Rearrangement rearrange(const FunctionSpec& f)
{
    return Rearrangement(f);
}

// ---------------------------------------------------------------------------

CumulativeIntegral::CumulativeIntegral(RealFn log_neglog, double anchor, double upper,
                                       std::vector<double> breaks, const QuadratureOptions& opts)
    : log_neglog_(std::move(log_neglog)), anchor_(anchor), upper_(upper), opts_(opts)
{
    if (!(upper_ > 0.0) || !std::isfinite(upper_) || !(anchor_ > 0.0))
        throw Error("cumulative integral needs finite positive anchor and upper limit");
    constexpr double kDeepest = 232.0;
    constexpr double kStep = 0.5;
    for (double z = kDeepest; z > 0.0; z -= kStep)
        knots_.push_back(upper_ * std::exp(-z));
    for (double b : breaks)
        if (b > knots_.front() && b < upper_)
            knots_.push_back(b);
    knots_.push_back(upper_);
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());

    std::vector<double> head_breaks;
    for (double b : breaks)
        if (b > 0.0 && b < knots_.front())
            head_breaks.push_back(b);
    head_ = integrate_lower_singular_neglog(log_neglog_, anchor_, knots_.front(), head_breaks, opts_);
    if (!head_.is_finite())
        return;

    values_.resize(knots_.size());
    values_[0] = head_.value;
    double err = head_.error;
    auto g = [this](double s) { return integrand(s); };
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        auto piece = integrate_interval(g, knots_[k - 1], knots_[k], opts_.rel_tol, opts_.max_depth,
                                        0.1 * opts_.rel_tol * values_[k - 1]);
        values_[k] = values_[k - 1] + piece.value;
        err += piece.error;
    }
    head_.error = err;
}

double CumulativeIntegral::integrand(double s) const
{
    double lg = log_neglog_(std::log(anchor_ / s));
    return lg == -kInf ? 0.0 : std::exp(lg);
}

double CumulativeIntegral::operator()(double s) const
{
    if (!head_.is_finite())
        return kInf;
    if (!(s > 0.0))
        return 0.0;
    if (s >= upper_)
        return values_.back();
    if (s <= knots_.front()) {
        NormResult r = integrate_lower_singular_neglog(log_neglog_, anchor_, s, {}, opts_);
        return r.is_finite() ? r.value : kInf;
    }
    auto it = std::lower_bound(knots_.begin(), knots_.end(), s);
    auto k = static_cast<std::size_t>(it - knots_.begin());
    if (knots_[k] == s)
        return values_[k];
    auto g = [this](double u) { return integrand(u); };
    return values_[k - 1] +
           integrate_interval(g, knots_[k - 1], s, opts_.rel_tol, opts_.max_depth, 0.1 * opts_.rel_tol * values_[k - 1])
               .value;
}

// ---------------------------------------------------------------------------

AveragedRearrangement::AveragedRearrangement(const Rearrangement& r, const QuadratureOptions& opts)
    : rearrangement_(std::make_shared<const Rearrangement>(r)),
      integral_([rr = rearrangement_](double y) { return rr->log_at_neglog(y); }, r.mass(), r.mass(),
                std::vector<double>(r.breaks().begin(), r.breaks().end()), opts),
      mass_(r.mass())
{
}

double AveragedRearrangement::operator()(double t) const
{
    if (!(t > 0.0))
        throw Error("f** is defined for t > 0");
    return integral_(std::min(t, mass_)) / t;
}

NormResult double_star(const FunctionSpec& f, double t)
{
    if (!(t > 0.0))
        throw Error("double_star needs t > 0");
    Rearrangement r(f);
    const double upper = std::min(t, r.mass());
    std::vector<double> breaks(r.breaks().begin(), r.breaks().end());
    NormResult integral = integrate_lower_singular_neglog(
        [&r](double y) { return r.log_at_neglog(y); }, r.mass(), upper, breaks);
    if (!integral.is_finite())
        return integral;
    NormResult out = NormResult::finite(integral.value / t, integral.error / t);
    out.growth = std::move(integral.growth);
    return out;
}

double double_star_oracle(const FunctionSpec& f, double t)
{
    const Empirical* e = f.empirical_data();
    if (!e)
        throw Error("double_star_oracle needs an empirical function spec");
    if (!(t > 0.0) || t > f.measure().total_mass * (1.0 + 1e-12))
        throw Error("double_star_oracle needs t in (0, total mass]");
    double budget = t;
    double sum = 0.0;
    for (std::size_t i = 0; i < e->magnitudes.size() && budget > 0.0; ++i) {
        double take = std::min(budget, e->weights[i]);
        sum += take * e->magnitudes[i];
        budget -= take;
    }
    return sum / t;
}

}  // namespace tailnorm
