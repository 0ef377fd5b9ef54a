#pragma once

#include <cmath>
#include <limits>

namespace tailnorm::detail {

struct Extremum {
    double x;
    double f;
};

/// Golden-section minimisation on [a, b]; f may return +inf.
template <class F>
Extremum golden_minimize(F&& f, double a, double b, double rel_tol, int max_iter = 200)
{
    constexpr double kInvPhi = 0.6180339887498949;
    if (!(b > a))
        return {a, f(a)};
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > rel_tol * (std::abs(a) + std::abs(b) + 1e-300); ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? Extremum{c, fc} : Extremum{d, fd};
}

/// log(e^a + e^b) with -inf as the zero element.
inline double log_add_exp(double a, double b)
{
    if (a == -std::numeric_limits<double>::infinity())
        return b;
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    double hi = a > b ? a : b;
    double lo = a > b ? b : a;
    if (hi == std::numeric_limits<double>::infinity())
        return hi;
    return hi + std::log1p(std::exp(lo - hi));
}

/// log(e^a - e^b) for a >= b.
inline double log_sub_exp(double a, double b)
{
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    if (!(a > b))
        return -std::numeric_limits<double>::infinity();
    return a + std::log1p(-std::exp(b - a));
}

}  // namespace tailnorm::detail
