#include "tailnorm/norms.hpp"

#include <algorithm>
#include <cmath>

#include "numeric_util.hpp"

namespace tailnorm {

namespace {

constexpr double kLogSlack = 1e-12;

std::vector<double> left_limits(std::span<const double> breaks, double lo, double hi)
{
    std::vector<double> out;
    for (double b : breaks)
        if (b > lo && b <= hi)
            out.push_back(std::nextafter(b, 0.0));
    return out;
}

double relative_error(const NormResult& r)
{
    if (!(r.value > 0.0) || !std::isfinite(r.value) || !std::isfinite(r.error))
        return 1e-12;
    return r.error / r.value;
}

bool is_zero_function(const FunctionSpec& f)
{
    return !(tail_of(f)(1e-300) > 0.0);
}

void check_weight_covers(const Rearrangement& r, const Weight& w)
{
    if (w.mass() < r.mass() && r(w.mass()) > 0.0)
        throw Error("weight is defined on a shorter interval than the support of f");
}

// log f*(s) at half the support: the bracket for the infimal dilation is centred here.
double log_typical_scale(const FunctionSpec& f)
{
    if (!f.measure().finite())
        return 0.0;
    const double support = std::min(f.measure().total_mass, tail_of(f)(1e-300));
    double v = Rearrangement(f)(0.5 * support);
    return v > 0.0 && std::isfinite(v) ? std::log(v) : 0.0;
}

// Bisection in log c for the smallest c with feasible(c); feasibility is monotone in c.
// feasible returns 1 (yes), 0 (no) or -1 (indeterminate). The bracket grows by doubling
// steps in log c out to 2^20 around the typical scale: beyond that the quadratures and
// scans, whose reach is fixed, stop resolving growth of Phi that sets in only past c.
template <class Feasible>
NormResult infimal_dilation(Feasible&& feasible, double log_scale, const char* what)
{
    const double log_limit = 20.0 * std::log(2.0);
    double lo, hi;
    int f0 = feasible(log_scale);
    if (f0 < 0)
        return NormResult::indeterminate(std::string(what) + ": feasibility indeterminate at the typical scale");
    double step = std::log(2.0);
    if (f0 == 1) {
        hi = log_scale;
        for (;;) {
            lo = std::max(hi - step, log_scale - log_limit);
            int fl = feasible(lo);
            if (fl < 0)
                return NormResult::indeterminate(std::string(what) + ": feasibility indeterminate while bracketing");
            if (fl == 0)
                break;
            if (lo <= log_scale - log_limit)
                return NormResult::indeterminate(std::string(what) + ": feasible below 2^-20 times the typical scale");
            hi = lo;
            step *= 2.0;
        }
    } else {
        lo = log_scale;
        for (;;) {
            hi = std::min(lo + step, log_scale + log_limit);
            int fh = feasible(hi);
            if (fh < 0)
                return NormResult::indeterminate(std::string(what) + ": feasibility indeterminate while bracketing");
            if (fh == 1)
                break;
            if (hi >= log_scale + log_limit)
                return NormResult::diverges({}, kNaN, std::string(what) + ": no finite dilation is feasible");
            lo = hi;
            step *= 2.0;
        }
    }
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        double mid = 0.5 * (lo + hi);
        int fm = feasible(mid);
        if (fm < 0)
            return NormResult::indeterminate(std::string(what) + ": feasibility indeterminate during bisection");
        (fm == 1 ? hi : lo) = mid;
    }
    return NormResult::finite(std::exp(hi), std::exp(hi) - std::exp(lo));
}

}  // namespace

// ---------------------------------------------------------------------------

double empirical_weak_floor(const FunctionSpec& f)
{
    const Empirical* e = f.empirical_data();
    if (!e)
        return 0.0;
    double n = static_cast<double>(e->magnitudes.size());
    return std::ceil(std::sqrt(n)) / n * f.measure().total_mass;
}

NormResult weak_norm(const FunctionSpec& f, const Weight& w, const GridConfig& cfg, const WeakNormOptions& opts)
{
    Rearrangement r(f);
    check_weight_covers(r, w);
    const double hi = std::min(r.mass(), w.mass());
    const double lo = std::max(0.0, opts.min_s);
    if (!(hi > lo))
        throw Error("weak norm floor exceeds the mass");

    if (const Empirical* e = f.empirical_data()) {
        // On [c_{i-1}, c_i) the product is w(t) x_i; its sup is the left limit at c_i.
        double best = 0.0;
        double arg = kNaN;
        for (std::size_t i = 0; i < e->magnitudes.size(); ++i) {
            double c = e->cumulative[i];
            if (c <= lo)
                continue;
            double v = w(std::min(c, hi)) * e->magnitudes[i];
            if (v > best) {
                best = v;
                arg = c;
            }
        }
        NormResult res = NormResult::finite(best, 0.0);
        res.argmax = arg;
        // Dual form through the empirical tail: x w(T(x)) at each atom.
        TailFunction tail = empirical_tail(f);
        double dual = 0.0;
        for (double x : e->magnitudes) {
            double T = tail(x);
            if (x > 0.0 && T > lo)
                dual = std::max(dual, x * w(T));
        }
        res.cross_check = dual;
        return res;
    }

    const double log_mass = std::log(r.mass());
    auto log_map = [&](double t) {
        double lf = r.log_at_neglog(log_mass - std::log(t));
        if (lf == -kInf)
            return -kInf;
        return w.log_at_log(std::log(t)) + lf;
    };
    auto extras = left_limits(r.breaks(), lo, hi);
    NormResult res = supremum_scan_log(log_map, {lo, hi}, cfg, extras);
    if (res.is_finite() && lo == 0.0) {
        NormResult dual = weak_norm_dual(f, w, cfg);
        if (dual.is_finite())
            res.cross_check = dual.value;
    }
    return res;
}

NormResult weak_norm_dual(const FunctionSpec& f, const Weight& w, const GridConfig& cfg)
{
    TailFunction tail = tail_of(f);
    if (const Empirical* e = f.empirical_data()) {
        double best = 0.0;
        double arg = kNaN;
        for (double x : e->magnitudes) {
            double v = x > 0.0 ? x * w(tail(x)) : 0.0;
            if (v > best) {
                best = v;
                arg = x;
            }
        }
        NormResult res = NormResult::finite(best, 0.0);
        res.argmax = arg;
        return res;
    }
    auto log_map = [&](double t) {
        double lt = std::log(t);
        double lT = tail.log_at_log(lt);
        if (lT == -kInf)
            return -kInf;
        return lt + w.log_at_log(lT);
    };
    return supremum_scan_log(log_map, {0.0, kInf}, cfg, tail.jumps());
}

double weak_tail_bound(const Weight& w, double norm_value, double t)
{
    if (!(t > 0.0))
        throw Error("tail bound needs t > 0");
    return w.inverse(norm_value / t);
}

NormResult marcinkiewicz_norm(const FunctionSpec& f, const Weight& w, const GridConfig& cfg)
{
    Rearrangement r(f);
    check_weight_covers(r, w);
    AveragedRearrangement fss(r);
    if (!fss.status().is_finite()) {
        const NormResult& s = fss.status();
        if (s.is_diverges())
            return NormResult::diverges(s.growth, s.threshold, "f* is not integrable at 0, so f** is infinite");
        return NormResult::indeterminate("integral of f* is indeterminate: " + s.reason);
    }
    auto log_map = [&](double t) {
        double v = fss(t);
        if (!(v > 0.0))
            return v == 0.0 ? -kInf : kNaN;
        return w.log_at_log(std::log(t)) + std::log(v);
    };
    return supremum_scan_log(log_map, {0.0, w.mass()}, cfg);
}

NormResult lp_norm(const FunctionSpec& f, double p)
{
    if (!(p >= 1.0) || !std::isfinite(p))
        throw Error("lp_norm needs finite p >= 1");

    if (const Empirical* e = f.empirical_data()) {
        // Abel summation of p * int t^{p-1} T(t) dt over the step tail.
        const auto& x = e->magnitudes;
        double tail_sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double next = i + 1 < x.size() ? std::pow(x[i + 1], p) : 0.0;
            tail_sum += (std::pow(x[i], p) - next) * e->cumulative[i];
        }
        double rearr_sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            rearr_sum += e->weights[i] * std::pow(x[i], p);
        NormResult res = NormResult::finite(std::pow(tail_sum, 1.0 / p), 0.0);
        res.cross_check = std::pow(rearr_sum, 1.0 / p);
        return res;
    }

    TailFunction tail = tail_of(f);
    const double log_p = std::log(p);
    std::vector<double> below, above;
    auto add_break = [&](double t) {
        if (!(t > 0.0) || !std::isfinite(t))
            return;
        double x = std::log(t);
        if (x < 0.0)
            below.push_back(-x);
        else if (x > 0.0)
            above.push_back(x);
    };
    for (double j : tail.jumps())
        add_break(j);
    add_break(tail.support().full_below);
    add_break(tail.support().zero_above);

    auto lower = [&](double y) {
        double lT = tail.log_at_log(-y);
        return lT == -kInf ? -kInf : log_p - p * y + lT;
    };
    auto upper = [&](double y) {
        double lT = tail.log_at_log(y);
        return lT == -kInf ? -kInf : log_p + p * y + lT;
    };
    NormResult r1 = integrate_exp_halfline(lower, kInf, below);
    NormResult r2 = integrate_exp_halfline(upper, kInf, above);
    for (const NormResult* r : {&r2, &r1}) {
        if (r->is_diverges()) {
            NormResult d = *r;
            d.reason = "moment of order p diverges: " + d.reason;
            return d;
        }
        if (!r->is_finite())
            return NormResult::indeterminate("moment integral: " + r->reason);
    }
    double log_moment = detail::log_add_exp(r1.log_value, r2.log_value);
    double rel = relative_error(r1) + relative_error(r2);
    NormResult res = NormResult::finite_log(log_moment / p, rel / p);

    Rearrangement rr(f);
    std::vector<double> breaks(rr.breaks().begin(), rr.breaks().end());
    NormResult direct = integrate_lower_singular_neglog(
        [&](double y) {
            double g = rr.log_at_neglog(y);
            return g == -kInf ? -kInf : p * g;
        },
        rr.mass(), rr.mass(), breaks);
    if (direct.is_finite())
        res.cross_check = std::exp(direct.log_value / p);
    return res;
}

// ---------------------------------------------------------------------------

NormResult weak_orlicz_feasibility(const FunctionSpec& f, const YoungFunction& phi, double c,
                                   const GridConfig& cfg)
{
    if (!(c > 0.0))
        throw Error("dilation must be positive");
    const double log_c = std::log(c);
    if (const Empirical* e = f.empirical_data()) {
        // Phi increasing and T constant on (x_{i+1}, x_i]: the sup sits at an atom.
        double best = -kInf;
        double arg = kNaN;
        for (std::size_t i = 0; i < e->magnitudes.size(); ++i) {
            double x = e->magnitudes[i];
            if (!(x > 0.0))
                continue;
            double v = phi.log_eval_log(std::log(x) - log_c) + std::log(e->cumulative[i]);
            if (v > best) {
                best = v;
                arg = x;
            }
        }
        NormResult res = NormResult::finite_log(best, 0.0);
        res.argmax = arg;
        return res;
    }
    TailFunction tail = tail_of(f);
    auto log_map = [&](double t) {
        double lt = std::log(t);
        double lT = tail.log_at_log(lt);
        double lphi = phi.log_eval_log(lt - log_c);
        if (lT == -kInf)
            return lphi == kInf ? kNaN : -kInf;  // both logs out of range: no information
        return lphi + lT;
    };
    return supremum_scan_log(log_map, {0.0, kInf}, cfg, tail.jumps());
}

NormResult weak_orlicz_rho(const FunctionSpec& f, const YoungFunction& phi, const GridConfig& cfg)
{
    return weak_orlicz_feasibility(f, phi, 1.0, cfg);
}

NormResult weak_orlicz_norm(const FunctionSpec& f, const YoungFunction& phi, const GridConfig& cfg)
{
    if (is_zero_function(f))
        return NormResult::finite(0.0, 0.0);
    return infimal_dilation(
        [&](double log_c) {
            NormResult r = weak_orlicz_feasibility(f, phi, std::exp(log_c), cfg);
            if (r.is_finite())
                return r.log_value <= kLogSlack ? 1 : 0;
            return r.is_diverges() ? 0 : -1;
        },
        log_typical_scale(f), "weak-Orlicz norm");
}

MembershipResult in_wM(const FunctionSpec& f, const YoungFunction& phi, const GridConfig& cfg, int k_max)
{
    MembershipResult out;
    for (int k = 0; k <= k_max; ++k) {
        double c = std::ldexp(1.0, -k);
        NormResult r = weak_orlicz_feasibility(f, phi, c, cfg);
        out.ladder.push_back(c);
        out.sups.push_back(r);
        if (r.is_diverges()) {
            out.verdict = Verdict::finite;
            out.member = false;
            out.failing_c = c;
            out.reason = "sup of Phi(t/c) T(t) diverges at c = 2^-" + std::to_string(k);
            return out;
        }
        if (!r.is_finite()) {
            out.verdict = Verdict::indeterminate;
            out.reason = "scan inconclusive at c = 2^-" + std::to_string(k) + ": " + r.reason;
            return out;
        }
    }
    out.verdict = Verdict::finite;
    out.member = true;
    out.reason = "sup finite at every rung of the ladder";
    return out;
}

NormResult orlicz_modular(const FunctionSpec& f, const YoungFunction& phi, double c)
{
    if (!(c > 0.0))
        throw Error("dilation must be positive");
    const double log_c = std::log(c);
    if (const Empirical* e = f.empirical_data()) {
        double acc = -kInf;
        for (std::size_t i = 0; i < e->magnitudes.size(); ++i) {
            double x = e->magnitudes[i];
            if (x > 0.0)
                acc = detail::log_add_exp(acc, std::log(e->weights[i]) + phi.log_eval_log(std::log(x) - log_c));
        }
        return NormResult::finite_log(acc, 1e-15);
    }
    Rearrangement r(f);
    std::vector<double> breaks(r.breaks().begin(), r.breaks().end());
    return integrate_lower_singular_neglog(
        [&](double y) {
            double g = r.log_at_neglog(y);
            return g == -kInf ? -kInf : phi.log_eval_log(g - log_c);
        },
        r.mass(), r.mass(), breaks);
}

NormResult luxemburg_norm(const FunctionSpec& f, const YoungFunction& phi)
{
    if (!f.measure().finite())
        throw Error("Luxemburg norm needs a finite-mass space");
    if (is_zero_function(f))
        return NormResult::finite(0.0, 0.0);
    return infimal_dilation(
        [&](double log_c) {
            NormResult m = orlicz_modular(f, phi, std::exp(log_c));
            if (m.is_finite())
                return m.log_value <= kLogSlack ? 1 : 0;
            return m.is_diverges() ? 0 : -1;
        },
        log_typical_scale(f), "Luxemburg norm");
}

NormResult gls_norm(const FunctionSpec& f, const PsiFunction& psi, const GridConfig& cfg)
{
    if (psi.degenerate()) {
        NormResult r = lp_norm(f, psi.degenerate_point());
        r.argmax = psi.degenerate_point();
        return r;
    }
    if (!std::isfinite(psi.upper()))
        throw Error("Grand Lebesgue scan needs a finite upper support end");
    auto log_map = [&](double p) {
        NormResult r = lp_norm(f, p);
        if (r.is_diverges())
            return kInf;
        if (!r.is_finite())
            return kNaN;
        return r.log_value - psi.log_eval(p);
    };
    return supremum_scan_log(log_map, {psi.lower(), psi.upper()}, cfg);
}

NormResult lorentz_integral_norm(const FunctionSpec& f, const Weight& w, double p)
{
    if (!(p >= 1.0) || !std::isfinite(p))
        throw Error("Lorentz functional needs finite p >= 1");
    Rearrangement r(f);
    check_weight_covers(r, w);
    const double upper = std::min(r.mass(), w.mass());
    const double log_mass = std::log(r.mass());
    std::vector<double> breaks(r.breaks().begin(), r.breaks().end());
    NormResult integral = integrate_lower_singular_neglog(
        [&](double y) {
            double g = r.log_at_neglog(y);
            return g == -kInf ? -kInf : p * g + w.log_at_log(log_mass - y);
        },
        r.mass(), upper, breaks);
    if (!integral.is_finite())
        return integral;
    return NormResult::finite_log(integral.log_value / p, relative_error(integral) / p);
}

}  // namespace tailnorm
