#include "tailnorm/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <cstdlib>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "numeric_util.hpp"

namespace tailnorm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double param_or(const Params& params, const std::string& key, double fallback)
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

double require_param(const Params& params, const std::string& family, const std::string& key)
{
    auto it = params.find(key);
    if (it == params.end())
        throw Error("family '" + family + "' requires parameter '" + key + "'");
    return it->second;
}

void check_known(const Params& params, const std::string& family,
                 std::initializer_list<const char*> known)
{
    for (const auto& [key, value] : params) {
        bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
        if (!ok)
            throw Error("family '" + family + "' has no parameter '" + key + "'");
        if (!std::isfinite(value))
            throw Error("parameter '" + key + "' of family '" + family + "' must be finite");
    }
}

std::string describe(const std::string& family, const Params& params)
{
    std::ostringstream os;
    os << family;
    for (const auto& [k, v] : params)
        os << ' ' << k << '=' << v;
    return os.str();
}

// (1 + log(1 + z))^kappa: positive, slowly varying as z -> infinity.
double log_slow(double z, double kappa)
{
    if (kappa == 0.0)
        return 0.0;
    return kappa * std::log1p(std::log1p(std::max(z, 0.0)));
}

FunctionSpec make_constant(double c, double mass, const std::string& family, const Params& params)
{
    if (!(c >= 0.0))
        throw Error("constant value must be nonnegative");
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw Error("constant function needs a finite positive mass");
    AnalyticTail a;
    a.family = family;
    a.params = params;
    auto tail = [c, mass](double t) { return t <= 0.0 ? mass : (t <= c ? mass : 0.0); };
    auto log_tail = [c, mass](double x) { return std::exp(x) <= c ? std::log(mass) : -kInf; };
    std::vector<double> jumps;
    if (c > 0.0)
        jumps.push_back(c);
    a.tail = TailFunction(tail, mass, SupportHint{c, c}, log_tail, jumps);
    a.rearrangement = [c, mass](double s) { return s < mass ? c : 0.0; };
    a.log_rearrangement_neglog = [c](double) { return c > 0.0 ? std::log(c) : -kInf; };
    return FunctionSpec(std::move(a), MeasureSpace{mass, true}, describe(family, params));
}

FunctionSpec make_weibull(double k, double sigma, const std::string& family, const Params& params)
{
    if (!(k > 0.0) || !(sigma > 0.0))
        throw Error("family '" + family + "' needs positive shape and scale");
    AnalyticTail a;
    a.family = family;
    a.params = params;
    double log_sigma = std::log(sigma);
    auto tail = [k, sigma](double t) { return t <= 0.0 ? 1.0 : std::exp(-std::pow(t / sigma, k)); };
    auto log_tail = [k, log_sigma](double x) { return -std::exp(k * (x - log_sigma)); };
    a.tail = TailFunction(tail, 1.0, {}, log_tail);
    a.rearrangement = [k, sigma](double s) {
        if (s >= 1.0)
            return 0.0;
        return sigma * std::pow(-std::log(s), 1.0 / k);
    };
    a.log_rearrangement_neglog = [k, log_sigma](double y) {
        return y > 0.0 ? log_sigma + std::log(y) / k : -kInf;
    };
    return FunctionSpec(std::move(a), MeasureSpace::probability(), describe(family, params));
}

// Tail exactly t^{-p0} log^delta(t) S(log t) beyond the point where that expression
// starts decreasing, capped at 1, constant before it.
FunctionSpec make_power_log_tail(const Params& params)
{
    const std::string family = "power_log_tail";
    check_known(params, family, {"p0", "delta", "s_kappa"});
    double p0 = require_param(params, family, "p0");
    double delta = param_or(params, "delta", 0.0);
    double s_kappa = param_or(params, "s_kappa", 0.0);
    if (!(p0 > 0.0) || !std::isfinite(delta) || !(s_kappa >= 0.0))
        throw Error("power_log_tail needs p0 > 0, finite delta, s_kappa >= 0");

    // log g(e^x) for x >= 0, S argument clamped to [1, inf). A negative delta gives the
    // decaying log correction of heavy tails t^-p0 log^-|delta|(t).
    auto log_g = [=](double x) {
        double lx = delta != 0.0 ? delta * std::log(x) : 0.0;
        return -p0 * x + lx + log_slow(std::max(x, 1.0), s_kappa);
    };
    double knot = 0.0;
    if (delta > 0.0 || s_kappa > 0.0) {
        auto neg = [&](double x) { return -log_g(x); };
        knot = detail::golden_minimize(neg, 1e-12, std::max(1.0, 4.0 * delta / p0) + 20.0, 1e-13).x;
    }
    double log_peak = std::min(0.0, log_g(knot));
    auto log_tail = [=](double x) {
        if (x <= knot)
            return log_peak;
        return std::min(0.0, log_g(x));
    };
    auto tail = [=](double t) {
        if (t <= 0.0)
            return 1.0;
        return std::exp(log_tail(std::log(t)));
    };

    // f*(e^{-y}) solves log_tail(x) = -y on the decreasing branch.
    auto log_rearr = [=](double y) {
        if (!(y > -log_peak))
            return y >= -log_peak ? knot : -kInf;
        double lo = std::max(knot, 0.0);
        double hi = std::max(lo, 1.0);
        while (log_tail(hi) > -y && hi < 1e300)
            hi *= 2.0;
        for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
            double mid = 0.5 * (lo + hi);
            (log_tail(mid) > -y ? lo : hi) = mid;
        }
        return hi;
    };

    AnalyticTail a;
    a.family = family;
    a.params = params;
    a.tail = TailFunction(tail, 1.0, SupportHint{std::exp(knot) * (log_peak < 0.0 ? 0.0 : 1.0), kInf},
                          log_tail);
    a.log_rearrangement_neglog = log_rearr;
    // f* drops to 0 where T stops at its plateau below the mass.
    if (log_peak < 0.0)
        a.rearrangement_breaks = {std::exp(log_peak)};
    a.rearrangement = [log_rearr](double s) {
        if (s >= 1.0)
            return 0.0;
        return std::exp(log_rearr(-std::log(s)));
    };
    return FunctionSpec(std::move(a), MeasureSpace::probability(), describe(family, params));
}

}  // namespace

// ---------------------------------------------------------------------------

void MeasureSpace::validate() const
{
    if (!(total_mass > 0.0))
        throw Error("measure space total mass must be positive");
}

int GridConfig::base_points() const
{
    return std::max(16, static_cast<int>(std::lround(points * grid_scale)));
}

int GridConfig::level_points() const
{
    return std::max(8, base_points() / 8);
}

GridConfig GridConfig::from_environment()
{
    GridConfig cfg;
    if (const char* env = std::getenv("TAILNORM_GRID_SCALE")) {
        char* end = nullptr;
        double scale = std::strtod(env, &end);
        if (end != env && scale > 0.0 && std::isfinite(scale))
            cfg.grid_scale = scale;
    }
    return cfg;
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::finite:
        return "finite";
    case Verdict::diverges:
        return "diverges";
    case Verdict::indeterminate:
        return "indeterminate";
    }
    return "?";
}

NormResult NormResult::finite(double value, double error)
{
    NormResult r;
    r.verdict = Verdict::finite;
    r.value = value;
    r.error = error;
    r.log_value = value > 0.0 ? std::log(value) : -kInf;
    return r;
}

NormResult NormResult::finite_log(double log_value, double rel_error)
{
    NormResult r;
    r.verdict = Verdict::finite;
    r.log_value = log_value;
    r.value = std::exp(log_value);
    r.error = r.value * rel_error;
    return r;
}

NormResult NormResult::diverges(std::vector<double> growth, double threshold, std::string reason)
{
    NormResult r;
    r.verdict = Verdict::diverges;
    r.value = kInf;
    r.log_value = kInf;
    r.growth = std::move(growth);
    r.threshold = threshold;
    r.reason = std::move(reason);
    return r;
}

NormResult NormResult::indeterminate(std::string reason)
{
    NormResult r;
    r.verdict = Verdict::indeterminate;
    r.reason = std::move(reason);
    return r;
}

// ---------------------------------------------------------------------------

TailFunction::TailFunction(RealFn eval, double total_mass, SupportHint hint, RealFn log_at_log,
                           std::vector<double> jumps)
    : eval_(std::move(eval)), log_at_log_(std::move(log_at_log)), total_mass_(total_mass),
      hint_(hint), jumps_(std::move(jumps))
{
    if (!eval_)
        throw Error("tail function needs an evaluator");
    if (!(total_mass_ > 0.0))
        throw Error("tail function needs positive total mass");
    std::sort(jumps_.begin(), jumps_.end());
}

double TailFunction::operator()(double t) const
{
    if (t <= 0.0)
        return total_mass_;
    return eval_(t);
}

double TailFunction::log_at_log(double x) const
{
    if (log_at_log_)
        return log_at_log_(x);
    double v = (*this)(std::exp(x));
    return v > 0.0 ? std::log(v) : -kInf;
}

// ---------------------------------------------------------------------------

MonotoneCurve::MonotoneCurve(std::vector<double> abscissa, std::vector<double> values,
                             Direction direction, EndpointBehavior left, EndpointBehavior right)
    : x_(std::move(abscissa)), y_(std::move(values)), direction_(direction), left_(left),
      right_(right)
{
    if (x_.size() != y_.size() || x_.size() < 2)
        throw Error("monotone curve needs at least two (abscissa, value) pairs");
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1]))
            throw Error("monotone curve abscissas must be strictly increasing");
        bool ok = direction_ == Direction::increasing ? y_[i] >= y_[i - 1] : y_[i] <= y_[i - 1];
        if (!ok)
            throw Error("monotone curve values violate the declared direction");
    }
}

double MonotoneCurve::operator()(double x) const
{
    if (x <= x_.front())
        return y_.front();
    if (x >= x_.back())
        return y_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    double w = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
    return y_[i - 1] + w * (y_[i] - y_[i - 1]);
}

// ---------------------------------------------------------------------------

FunctionSpec::FunctionSpec(Variant v, MeasureSpace measure, std::string description)
    : variant_(std::move(v)), measure_(measure), description_(std::move(description))
{
    measure_.validate();
}

const std::vector<FamilyInfo>& analytic_families()
{
    static const std::vector<FamilyInfo> families = {
        {"pareto", {"p", "K"}, "T(t) = min(1, (t/K)^-p), f*(s) = K s^(-1/p)"},
        {"exponential", {"scale"}, "T(t) = exp(-t/scale)"},
        {"weibull", {"k", "sigma"}, "T(t) = exp(-(t/sigma)^k)"},
        {"gaussian", {"sigma"}, "T(t) = exp(-t^2/sigma^2)"},
        {"constant", {"c", "mass"}, "f = c on a space of the given mass"},
        {"indicator", {"delta", "height", "mass"}, "height times the indicator of a set of measure delta"},
        {"zero", {"mass"}, "f = 0"},
        {"log_power", {"m", "kappa"}, "|log x|^m (1 + log(1 + |log x|))^kappa on (0,1)"},
        {"truncated_pareto", {"p", "b"}, "x^(-1/p) on (0,b), 0 on [b,1)"},
        {"heavy_log", {"p", "kappa", "K"}, "K s^(-1/p) (a + |log s|)^-kappa, a = max(1, kappa p)"},
        {"power_log_tail", {"p0", "delta", "s_kappa"}, "T(t) = min(1, t^-p0 log^delta(t) S(log t))"},
    };
    return families;
}

FunctionSpec FunctionSpec::analytic(const std::string& family, const Params& params)
{
    if (family == "pareto") {
        check_known(params, family, {"p", "K"});
        double p = require_param(params, family, "p");
        double K = param_or(params, "K", 1.0);
        if (!(p > 0.0) || !(K > 0.0))
            throw Error("pareto needs p > 0 and K > 0");
        AnalyticTail a;
        a.family = family;
        a.params = params;
        double logK = std::log(K);
        auto tail = [p, K](double t) { return t <= K ? 1.0 : std::pow(t / K, -p); };
        auto log_tail = [p, logK](double x) { return std::min(0.0, -p * (x - logK)); };
        a.tail = TailFunction(tail, 1.0, SupportHint{K, kInf}, log_tail);
        a.rearrangement = [p, K](double s) { return s >= 1.0 ? 0.0 : K * std::pow(s, -1.0 / p); };
        a.log_rearrangement_neglog = [p, logK](double y) { return y >= 0.0 ? logK + y / p : -kInf; };
        return FunctionSpec(std::move(a), MeasureSpace::probability(), describe(family, params));
    }
    if (family == "exponential") {
        check_known(params, family, {"scale"});
        return make_weibull(1.0, param_or(params, "scale", 1.0), family, params);
    }
    if (family == "weibull") {
        check_known(params, family, {"k", "sigma"});
        return make_weibull(require_param(params, family, "k"), param_or(params, "sigma", 1.0), family,
                            params);
    }
    if (family == "gaussian") {
        check_known(params, family, {"sigma"});
        return make_weibull(2.0, param_or(params, "sigma", 1.0), family, params);
    }
    if (family == "constant") {
        check_known(params, family, {"c", "mass"});
        return make_constant(require_param(params, family, "c"), param_or(params, "mass", 1.0), family,
                             params);
    }
    if (family == "zero") {
        check_known(params, family, {"mass"});
        return make_constant(0.0, param_or(params, "mass", 1.0), family, params);
    }
    if (family == "indicator") {
        check_known(params, family, {"delta", "height", "mass"});
        double delta = require_param(params, family, "delta");
        double height = param_or(params, "height", 1.0);
        double mass = param_or(params, "mass", 1.0);
        if (!(mass > 0.0) || !std::isfinite(mass) || !(delta > 0.0) || !(delta <= mass) ||
            !(height > 0.0))
            throw Error("indicator needs 0 < delta <= mass and height > 0");
        AnalyticTail a;
        a.family = family;
        a.params = params;
        auto tail = [=](double t) { return t <= 0.0 ? mass : (t <= height ? delta : 0.0); };
        double log_delta = std::log(delta);
        auto log_tail = [=](double x) { return std::exp(x) <= height ? log_delta : -kInf; };
        a.tail = TailFunction(tail, mass, SupportHint{0.0, height}, log_tail, {height});
        a.rearrangement = [=](double s) { return s < delta ? height : 0.0; };
        double y_delta = std::log(mass / delta);
        double log_height = std::log(height);
        a.log_rearrangement_neglog = [=](double y) { return y > y_delta ? log_height : -kInf; };
        if (delta < mass)
            a.rearrangement_breaks.push_back(delta);
        return FunctionSpec(std::move(a), MeasureSpace{mass, true}, describe(family, params));
    }
    if (family == "log_power") {
        check_known(params, family, {"m", "kappa"});
        double m = require_param(params, family, "m");
        double kappa = param_or(params, "kappa", 0.0);
        if (!(m > 0.0) || !(kappa >= 0.0))
            throw Error("log_power needs m > 0 and kappa >= 0");
        auto log_map = [m, kappa](double y) {
            if (!(y > 0.0))
                return -kInf;
            return m * std::log(y) + log_slow(y, kappa);
        };
        auto map = [log_map](double x) { return x >= 1.0 ? 0.0 : std::exp(log_map(-std::log(x))); };
        FunctionSpec spec = pointwise("log_power", map, 1.0, log_map);
        spec.description_ = describe(family, params);
        return spec;
    }
    if (family == "truncated_pareto") {
        check_known(params, family, {"p", "b"});
        double p = require_param(params, family, "p");
        double b = require_param(params, family, "b");
        if (!(p > 0.0) || !(b > 0.0) || !(b <= 1.0))
            throw Error("truncated_pareto needs p > 0 and 0 < b <= 1");
        double yb = -std::log(b);
        auto log_map = [p, yb](double y) { return y > yb ? y / p : -kInf; };
        auto map = [p, b](double x) { return x < b ? std::pow(x, -1.0 / p) : 0.0; };
        std::vector<double> breaks;
        if (b < 1.0)
            breaks.push_back(b);
        FunctionSpec spec = pointwise("truncated_pareto", map, 1.0, log_map, breaks);
        spec.description_ = describe(family, params);
        return spec;
    }
    if (family == "heavy_log") {
        check_known(params, family, {"p", "kappa", "K"});
        double p = require_param(params, family, "p");
        double kappa = param_or(params, "kappa", 0.0);
        double K = param_or(params, "K", 1.0);
        if (!(p > 0.0) || !(kappa >= 0.0) || !(K > 0.0))
            throw Error("heavy_log needs p > 0, kappa >= 0, K > 0");
        double shift = std::max(1.0, kappa * p);
        double logK = std::log(K);
        auto log_map = [=](double y) {
            if (y < 0.0)
                return -kInf;
            return logK + y / p - kappa * std::log(shift + y);
        };
        auto map = [log_map](double x) { return x >= 1.0 ? 0.0 : std::exp(log_map(-std::log(x))); };
        FunctionSpec spec = pointwise("heavy_log", map, 1.0, log_map);
        spec.description_ = describe(family, params);
        return spec;
    }
    if (family == "power_log_tail")
        return make_power_log_tail(params);
    throw Error("unknown analytic family '" + family + "'");
}

FunctionSpec FunctionSpec::pointwise(std::string label, RealFn map, double mass, RealFn log_map_neglog,
                                     std::vector<double> breaks)
{
    if (!map)
        throw Error("pointwise function needs a map");
    if (!(mass > 0.0))
        throw Error("pointwise function needs positive mass");
    std::sort(breaks.begin(), breaks.end());
    PointwiseMonotone pm{label, std::move(map), std::move(log_map_neglog), std::move(breaks)};
    return FunctionSpec(std::move(pm), MeasureSpace{mass, true}, "pointwise:" + label);
}

FunctionSpec FunctionSpec::empirical(std::vector<double> magnitudes, std::vector<double> weights,
                                     double mass)
{
    if (magnitudes.empty())
        throw Error("empirical sample must be nonempty");
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw Error("empirical sample needs a finite positive total mass");
    for (double m : magnitudes)
        if (!std::isfinite(m) || m < 0.0)
            throw Error("empirical magnitudes must be finite and nonnegative");
    if (weights.empty()) {
        weights.assign(magnitudes.size(), mass / static_cast<double>(magnitudes.size()));
    } else {
        if (weights.size() != magnitudes.size())
            throw Error("empirical weights must match magnitudes in length");
        double sum = 0.0;
        for (double w : weights) {
            if (!(w > 0.0) || !std::isfinite(w))
                throw Error("empirical weights must be positive");
            sum += w;
        }
        if (std::abs(sum - mass) > 1e-9 * mass)
            throw Error("empirical weights must sum to the total mass");
    }

    std::vector<std::size_t> order(magnitudes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return magnitudes[a] > magnitudes[b]; });
    Empirical e;
    for (std::size_t idx : order) {
        if (!e.magnitudes.empty() && e.magnitudes.back() == magnitudes[idx]) {
            e.weights.back() += weights[idx];
        } else {
            e.magnitudes.push_back(magnitudes[idx]);
            e.weights.push_back(weights[idx]);
        }
    }
    e.cumulative.resize(e.weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < e.weights.size(); ++i) {
        acc += e.weights[i];
        e.cumulative[i] = acc;
    }
    // Pin the last step to the mass so f* vanishes exactly beyond it.
    e.cumulative.back() = mass;
    std::ostringstream os;
    os << "empirical n=" << magnitudes.size();
    return FunctionSpec(std::move(e), MeasureSpace{mass, false}, os.str());
}

FunctionSpec FunctionSpec::pareto_sample(double p, std::size_t n, std::uint64_t seed)
{
    if (!(p > 0.0) || n == 0)
        throw Error("pareto sample needs p > 0 and n > 0");
    std::mt19937_64 gen(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) {
        double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
        x = std::pow(u, -1.0 / p);
    }
    FunctionSpec spec = empirical(std::move(xs));
    std::ostringstream os;
    os << "pareto_sample p=" << p << " n=" << n << " seed=" << seed;
    spec.description_ = os.str();
    return spec;
}

FunctionSpec FunctionSpec::scaled(double lambda) const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw Error("scale factor must be finite and nonnegative");
    double mass = measure_.total_mass;
    std::ostringstream os;
    os << lambda << " * (" << description_ << ")";
    if (lambda == 0.0) {
        FunctionSpec zero = make_constant(0.0, mass < kInf ? mass : 1.0, "zero", {});
        zero.description_ = os.str();
        return zero;
    }
    double log_lambda = std::log(lambda);
    if (const auto* a = std::get_if<AnalyticTail>(&variant_)) {
        AnalyticTail b = *a;
        const TailFunction src = a->tail;
        SupportHint hint{src.support().full_below * lambda, src.support().zero_above * lambda};
        std::vector<double> jumps(src.jumps().begin(), src.jumps().end());
        for (double& j : jumps)
            j *= lambda;
        b.tail = TailFunction([src, lambda](double t) { return src(t / lambda); }, src.total_mass(), hint,
                              [src, log_lambda](double x) { return src.log_at_log(x - log_lambda); },
                              jumps);
        if (a->rearrangement) {
            auto r = a->rearrangement;
            b.rearrangement = [r, lambda](double s) { return lambda * r(s); };
        }
        if (a->log_rearrangement_neglog) {
            auto r = a->log_rearrangement_neglog;
            b.log_rearrangement_neglog = [r, log_lambda](double y) { return r(y) + log_lambda; };
        }
        return FunctionSpec(std::move(b), measure_, os.str());
    }
    if (const auto* pm = std::get_if<PointwiseMonotone>(&variant_)) {
        PointwiseMonotone q = *pm;
        auto m = pm->map;
        q.map = [m, lambda](double x) { return lambda * m(x); };
        if (pm->log_map_neglog) {
            auto g = pm->log_map_neglog;
            q.log_map_neglog = [g, log_lambda](double y) { return g(y) + log_lambda; };
        }
        return FunctionSpec(std::move(q), measure_, os.str());
    }
    Empirical e = std::get<Empirical>(variant_);
    for (double& m : e.magnitudes)
        m *= lambda;
    return FunctionSpec(std::move(e), measure_, os.str());
}

// ---------------------------------------------------------------------------

double left_inverse(const TailFunction& tail, double level)
{
    if (!(level >= 0.0))
        throw Error("left_inverse level must be nonnegative");
    const double mass = tail.total_mass();
    if (level >= mass)
        return 0.0;

    if (level == 0.0) {
        double top = tail.support().zero_above;
        if (std::isfinite(top))
            return top;
        // T > 0 everywhere only for unbounded functions.
        if (tail.log_at_log(690.0) > -kInf)
            return kInf;
        throw IndeterminateError("tail vanishes but its support end is unknown");
    }

    const double log_level = std::log(level);
    auto below = [&](double x) { return tail.log_at_log(x) <= log_level; };

    constexpr double kLoX = -690.0;
    constexpr double kHiX = 690.0;
    if (below(kLoX))
        return 0.0;  // level >= T(0+)

    double lo = kLoX;
    double hi = 0.0;
    if (below(hi)) {
        while (hi - lo > 1.0) {
            double probe = hi - 2.0 * std::max(1.0, std::abs(hi));
            if (probe <= lo)
                break;
            if (below(probe))
                hi = probe;
            else {
                lo = probe;
                break;
            }
        }
    } else {
        lo = hi;
        hi = 1.0;
        while (!below(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > kHiX) {
                if (!below(kHiX))
                    throw IndeterminateError("tail does not fall below the requested level in range");
                hi = kHiX;
                break;
            }
        }
    }
    for (int i = 0; i < 400 && hi - lo > 4.0 * kEps * std::max(1.0, std::abs(hi)); ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (below(mid) ? hi : lo) = mid;
    }
    double s = std::exp(hi);
    for (double j : tail.jumps())
        if (std::abs(s - j) <= 1e-12 * j)
            return j;
    return s;
}

double left_inverse(const MonotoneCurve& curve, double level)
{
    if (curve.direction() != Direction::decreasing)
        throw Error("left inverse needs a nonincreasing curve");
    auto x = curve.abscissa();
    auto y = curve.values();
    if (level >= y.front())
        return x.front();
    if (level < y.back()) {
        if (curve.right_behavior() == EndpointBehavior::finite_limit)
            throw IndeterminateError("level below the curve's tabulated range");
        return kInf;
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (y[i] <= level) {
            if (y[i - 1] == y[i])
                return x[i - 1];
            double w = (y[i - 1] - level) / (y[i - 1] - y[i]);
            return x[i - 1] + w * (x[i] - x[i - 1]);
        }
    }
    return x.back();
}

// ---------------------------------------------------------------------------

namespace {

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// One application of the 31-point Kronrod rule and its embedded 15-point Gauss rule.
Segment gauss_kronrod_31(const RealFn& f, double a, double b)
{
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
    using Gauss = boost::math::quadrature::gauss<double, 15>;
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    // 15 is odd: the centre is a Gauss node, and Gauss nodes sit at even Kronrod indices.
    double fc = f(mid);
    double kronrod = fc * wk[0];
    double gauss = fc * wg[0];
    double l1 = std::abs(fc) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        double fp = f(mid + half * x[i]);
        double fm = f(mid - half * x[i]);
        kronrod += (fp + fm) * wk[i];
        l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
        if (i % 2 == 0)
            gauss += (fp + fm) * wg[i / 2];
    }
    double err = std::max(std::abs(kronrod - gauss), 50.0 * std::numeric_limits<double>::epsilon() * l1);
    return {a, b, kronrod * half, err * half};
}

}  // namespace

IntervalIntegral integrate_interval(const RealFn& f, double a, double b, double rel_tol, int max_depth,
                                    double abs_tol)
{
    if (!(b > a))
        return {};
    // Globally adaptive: always bisect the segment with the largest error, stopping once the
    // summed error meets max(abs_tol, rel_tol * |total|).
    const std::size_t max_segments = std::size_t{1} << std::clamp(max_depth, 1, 14);
    std::vector<Segment> heap{gauss_kronrod_31(f, a, b)};
    double total = heap.front().value;
    double error = heap.front().error;
    while (error > std::max(abs_tol, rel_tol * std::abs(total)) && heap.size() < max_segments) {
        std::pop_heap(heap.begin(), heap.end());
        Segment worst = heap.back();
        heap.pop_back();
        double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b)) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            break;
        }
        for (const Segment& s : {gauss_kronrod_31(f, worst.a, m), gauss_kronrod_31(f, m, worst.b)}) {
            heap.push_back(s);
            std::push_heap(heap.begin(), heap.end());
        }
        // Re-sum rather than update incrementally so cancellation does not accumulate.
        total = 0.0;
        error = 0.0;
        for (const Segment& s : heap) {
            total += s.value;
            error += s.error;
        }
    }
    return {total, error};
}

namespace {

struct PanelResult {
    double log_value = -kInf;
    double rel_error = 0.0;
    bool bad = false;
};

PanelResult integrate_panel(const RealFn& log_phi, double a, double b, const QuadratureOptions& opts)
{
    PanelResult out;
    constexpr int kSamples = 33;
    double best = -kInf;
    int best_i = -1;
    std::array<double, kSamples> ys{};
    for (int i = 0; i < kSamples; ++i) {
        ys[i] = a + (b - a) * i / (kSamples - 1);
        double h = log_phi(ys[i]);
        if (std::isnan(h) || h == kInf) {
            out.bad = true;
            return out;
        }
        if (h > best) {
            best = h;
            best_i = i;
        }
    }
    if (best_i < 0)
        return out;  // identically zero on the samples

    double lo = ys[std::max(0, best_i - 1)];
    double hi = ys[std::min(kSamples - 1, best_i + 1)];
    auto neg = [&](double y) {
        double h = log_phi(y);
        return std::isfinite(h) ? -h : kInf;
    };
    auto peak = detail::golden_minimize(neg, lo, hi, 1e-12);
    double ref = best;
    double split = ys[best_i];
    if (std::isfinite(peak.f) && -peak.f > best) {
        ref = -peak.f;
        split = peak.x;
    }

    auto phi = [&](double y) {
        double h = log_phi(y);
        if (!(h > -kInf))
            return 0.0;
        return std::exp(std::min(h - ref, 700.0));
    };
    // Pieces of doubling width on both sides of the peak, so that a sharp peak on a wide
    // panel stays resolved.
    std::vector<std::pair<double, double>> pieces;
    for (double x = split, w = 1.0; x < b; w *= 2.0) {
        double next = std::min(b, x + w);
        pieces.emplace_back(x, next);
        x = next;
    }
    for (double x = split, w = 1.0; x > a; w *= 2.0) {
        double next = std::max(a, x - w);
        pieces.emplace_back(next, x);
        x = next;
    }
    // Pieces next to the peak come first; later ones only need accuracy against the running total.
    std::stable_sort(pieces.begin(), pieces.end(), [split](const auto& x, const auto& y) {
        return std::min(std::abs(x.first - split), std::abs(x.second - split)) <
               std::min(std::abs(y.first - split), std::abs(y.second - split));
    });
    // log_phi carries rounding of order eps * max(|y|, |log_phi|); exp turns that into relative
    // noise no refinement can remove.
    const double rel_tol = std::max(opts.rel_tol, 16.0 * kEps * std::max({1.0, std::abs(b), std::abs(ref)}));
    double total = 0.0;
    double err = 0.0;
    try {
        for (auto [p, q] : pieces) {
            if (q - p <= 0.0)
                continue;
            auto r = integrate_interval(phi, p, q, rel_tol, opts.max_depth, 0.1 * rel_tol * total);
            total += r.value;
            err += r.error;
        }
    } catch (const std::exception&) {
        out.bad = true;
        return out;
    }
    if (!(total > 0.0))
        return out;
    out.log_value = ref + std::log(total);
    out.rel_error = err / total;
    return out;
}

}  // namespace

NormResult integrate_exp_halfline(const RealFn& log_phi, double y_max, std::span<const double> breaks,
                                  const QuadratureOptions& opts)
{
    const double y_end = std::min(y_max, opts.y_cap);
    if (!(y_end > 0.0))
        return NormResult::finite(0.0, 0.0);

    std::vector<double> edges{0.0};
    for (double e = 1.0; e < y_end; e *= 2.0)
        edges.push_back(e);
    edges.push_back(y_end);
    std::vector<double> cuts(breaks.begin(), breaks.end());
    std::sort(cuts.begin(), cuts.end());

    double total = -kInf;
    double abs_err = 0.0;  // in units of exp(total) accumulated lazily via relative errors
    std::vector<double> contributions;
    std::vector<double> widths;
    std::vector<double> partials;
    bool converged = false;

    for (std::size_t k = 1; k < edges.size(); ++k) {
        double a = edges[k - 1];
        double b = edges[k];
        double contrib = -kInf;
        double contrib_err = 0.0;
        double p = a;
        auto add_piece = [&](double q) {
            if (q <= p)
                return true;
            PanelResult r = integrate_panel(log_phi, p, q, opts);
            if (r.bad)
                return false;
            if (r.log_value > -kInf) {
                contrib_err = std::max(contrib_err, r.rel_error);
                contrib = detail::log_add_exp(contrib, r.log_value);
            }
            p = q;
            return true;
        };
        bool ok = true;
        for (double c : cuts)
            if (c > a && c < b)
                ok = ok && add_piece(c);
        ok = ok && add_piece(b);
        if (!ok) {
            double h = log_phi(p);
            if (h == kInf)
                return NormResult::diverges(partials, kNaN, "integrand is infinite inside the range");
            return NormResult::indeterminate("integrand is not finite inside the range");
        }

        double before = total;
        total = detail::log_add_exp(total, contrib);
        if (contrib > -kInf)
            abs_err += std::exp(contrib - total) * contrib_err;
        contributions.push_back(contrib);
        widths.push_back(b - a);
        partials.push_back(total);

        bool tiny = contrib < total + std::log(opts.rel_tol * 1e-3);
        bool decaying = contributions.size() < 2 || contrib <= contributions[contributions.size() - 2];
        if (total > -kInf && tiny && decaying && contributions.size() >= 3) {
            // The integrand may dip and rise again further out; probe the remaining edges first.
            const double floor = total + std::log(opts.rel_tol * 1e-3);
            bool reemerges = false;
            for (double e = 2.0 * b; e < y_end && !reemerges; e *= 2.0) {
                double v = log_phi(e) + std::log(e);
                reemerges = v > floor;
            }
            if (!reemerges) {
                converged = true;
                break;
            }
        }
        if (total == -kInf && before == -kInf && b >= y_end)
            break;
        const std::size_t n = contributions.size();
        // Each doubling panel carrying at least 1.9 times the previous one means the integrand
        // decays slower than y^-0.07; such integrals diverge, however slowly the partials grow.
        // Exponential decay at rate eps looks flat until y ~ 1/eps, so wait until y = 2^50.
        if (n >= 6 && b >= 0x1p50 && b < y_end) {
            bool doubling = true;
            for (std::size_t i = n - 4; i < n; ++i)
                doubling = doubling && contributions[i] - contributions[i - 1] >= std::log(1.9);
            if (doubling) {
                std::ostringstream os;
                os << "panel contributions keep doubling up to log-distance " << b;
                std::vector<double> growth;
                for (double lp : partials)
                    growth.push_back(std::exp(lp));
                return NormResult::diverges(growth, std::exp(partials.front()), os.str());
            }
        }
    }

    if (total == -kInf)
        return NormResult::finite(0.0, 0.0);

    auto to_values = [&]() {
        std::vector<double> out;
        out.reserve(partials.size());
        for (double lp : partials)
            out.push_back(std::exp(lp));
        return out;
    };

    if (!converged) {
        const std::size_t n = contributions.size();
        bool increasing = n >= 3 && partials[n - 3] < partials[n - 2] && partials[n - 2] < partials[n - 1];
        bool nondecaying = false;
        if (n >= 2 && contributions[n - 1] > -kInf && contributions[n - 2] > -kInf) {
            // Normalise a clamped final panel to the doubling width it would have had.
            double nominal = 2.0 * widths[n - 2];
            double scaled = contributions[n - 1] + std::log(std::max(1.0, nominal / widths[n - 1]));
            nondecaying = scaled - contributions[n - 2] >= std::log(0.95);
        }
        double d = std::min(1.0, y_end / 8.0);
        double h0 = log_phi(y_end);
        double h1 = log_phi(y_end - d);
        double h2 = log_phi(y_end - 2.0 * d);
        double lambda1 = (h1 - h0) / d;
        double lambda2 = (h2 - h1) / d;
        if (increasing && (nondecaying || !(lambda1 > 0.0))) {
            std::ostringstream os;
            os << "partial integrals keep growing up to log-distance " << y_end;
            return NormResult::diverges(to_values(), std::exp(partials.front()), os.str());
        }
        if (!(lambda1 > 0.0) || !std::isfinite(h0))
            return NormResult::indeterminate("integrand neither decays nor grows at the end of the range");
        double tail_log = h0 - std::log(lambda1);
        double tail_rel = std::exp(tail_log - total);
        total = detail::log_add_exp(total, tail_log);
        double spread = std::isfinite(lambda2) ? std::abs(lambda1 - lambda2) / lambda1 : 1.0;
        abs_err += tail_rel * (spread + 1e-6);
    }
    if (abs_err > 1e-4)
        return NormResult::indeterminate("quadrature error estimate does not shrink");
    NormResult r = NormResult::finite_log(total, abs_err + opts.rel_tol);
    r.growth = to_values();
    return r;
}

NormResult integrate_lower_singular(const RealFn& integrand, double upper, const QuadratureOptions& opts)
{
    if (!(upper > 0.0) || !std::isfinite(upper))
        throw Error("integrate_lower_singular needs a finite positive upper limit");
    constexpr double kFloor = 1e-300;
    if (upper <= kFloor)
        throw Error("upper limit too close to zero");
    const double log_upper = std::log(upper);
    auto log_phi = [&](double y) {
        double u = upper * std::exp(-y);
        double g = integrand(u);
        if (std::isnan(g) || g < 0.0)
            return kNaN;
        if (g == 0.0)
            return -kInf;
        return log_upper - y + std::log(g);
    };
    return integrate_exp_halfline(log_phi, std::log(upper / kFloor), {}, opts);
}

NormResult integrate_lower_singular_neglog(const RealFn& log_integrand_neglog, double anchor,
                                           double upper, std::span<const double> breaks,
                                           const QuadratureOptions& opts)
{
    if (!(upper > 0.0) || !(anchor > 0.0) || !std::isfinite(anchor))
        throw Error("integrate_lower_singular_neglog needs positive anchor and upper limit");
    const double log_upper = std::log(upper);
    const double shift = std::log(anchor / upper);
    auto log_phi = [&](double y) { return log_upper - y + log_integrand_neglog(y + shift); };
    std::vector<double> ybreaks;
    for (double b : breaks)
        if (b > 0.0 && b < upper)
            ybreaks.push_back(std::log(upper / b));
    return integrate_exp_halfline(log_phi, kInf, ybreaks, opts);
}

// ---------------------------------------------------------------------------

namespace {

struct ScanCoordinate {
    double lo;
    double hi;
    bool infinite;
    double width;
    double z_left;
    double z_right;

    ScanCoordinate(ScanDomain d, double min_log)
        : lo(d.lo), hi(d.hi), infinite(!std::isfinite(d.hi)), width(infinite ? 1.0 : d.hi - d.lo)
    {
        if (!std::isfinite(lo) || !(hi > lo))
            throw Error("scan domain must be a nonempty interval with finite lower end");
        double scale = width;
        double left_gap = std::max(4.0 * kEps * std::abs(lo), std::exp(min_log) * scale);
        z_left = std::log(left_gap / scale);
        if (infinite) {
            z_right = std::log(1e300);
        } else {
            double right_gap = std::max(4.0 * kEps * std::abs(hi), std::exp(min_log) * width);
            z_right = -std::log(right_gap / width);
        }
    }

    double to_t(double z) const
    {
        double t;
        if (infinite) {
            t = lo + std::exp(z);
        } else {
            double sigma = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
            t = lo + width * sigma;
            if (t >= hi)
                t = std::nextafter(hi, lo);
        }
        if (t <= lo)
            t = std::nextafter(lo, kInf);
        return t;
    }
};

struct Sample {
    double z;
    double t;
    double v;
    int side;   // -1 left levels, 0 base, +1 right levels
    int level;  // 0 for base
};

std::vector<Sample> layout(const ScanCoordinate& c, const GridConfig& cfg)
{
    std::vector<Sample> out;
    double zb_l = std::max(c.z_left, -16.0);
    double zb_r = std::min(c.z_right, 16.0);
    if (!(zb_r > zb_l)) {
        zb_l = c.z_left;
        zb_r = c.z_right;
    }
    const int n = cfg.base_points();
    for (int i = 0; i < n; ++i) {
        double z = zb_l + (zb_r - zb_l) * i / (n - 1);
        out.push_back({z, c.to_t(z), kNaN, 0, 0});
    }
    const int m = cfg.level_points();
    for (int side : {-1, 1}) {
        double start = side < 0 ? zb_l : zb_r;
        double limit = side < 0 ? c.z_left : c.z_right;
        if (std::abs(limit - start) < 1e-9)
            continue;
        for (int k = 1; k <= cfg.levels; ++k) {
            double z0 = start + (limit - start) * (k - 1) / cfg.levels;
            double z1 = start + (limit - start) * k / cfg.levels;
            for (int j = 1; j <= m; ++j) {
                double z = z0 + (z1 - z0) * j / m;
                out.push_back({z, c.to_t(z), kNaN, side, k});
            }
        }
    }
    return out;
}

bool strictly_greater(double a, double b)
{
    // Overflowed values keep counting as growth.
    if (a == kInf && b == kInf)
        return true;
    return a > b;
}

}  // namespace

std::vector<double> scan_points(ScanDomain domain, const GridConfig& cfg)
{
    ScanCoordinate c(domain, cfg.min_log_distance);
    std::vector<double> ts;
    for (const auto& s : layout(c, cfg))
        ts.push_back(s.t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

namespace {

// In log mode the map returns log values; thresholds and errors are taken in log space.
NormResult scan_impl(const RealFn& map, ScanDomain domain, const GridConfig& cfg,
                     std::span<const double> extra_points, bool log_mode)
{
    ScanCoordinate coord(domain, cfg.min_log_distance);
    std::vector<Sample> samples = layout(coord, cfg);
    for (auto& s : samples)
        s.v = map(s.t);

    std::vector<double> base;
    for (const auto& s : samples)
        if (s.side == 0 && std::isfinite(s.v))
            base.push_back(s.v);
    double threshold;
    if (log_mode) {
        double ref = -kInf;
        if (!base.empty()) {
            std::vector<double> sorted = base;
            std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
            ref = sorted[sorted.size() / 2];
        }
        if (!std::isfinite(ref))
            ref = base.empty() ? std::log(1e-300) : *std::max_element(base.begin(), base.end());
        threshold = std::log(cfg.divergence_factor) + ref;
    } else {
        double ref = 0.0;
        if (!base.empty()) {
            std::vector<double> sorted = base;
            std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
            ref = std::abs(sorted[sorted.size() / 2]);
            if (ref == 0.0)
                for (double v : base)
                    ref = std::max(ref, std::abs(v));
        }
        if (ref == 0.0)
            ref = 1e-300;
        threshold = cfg.divergence_factor * ref;
    }
    auto to_linear = [log_mode](std::vector<double> v) {
        if (log_mode)
            for (double& x : v)
                x = std::exp(x);
        return v;
    };
    const double threshold_out = log_mode ? std::exp(threshold) : threshold;

    // Endpoint-approaching sequences: the base edge value, then the max of each level.
    for (int side : {-1, 1}) {
        std::vector<double> seq;
        double edge0 = kNaN;
        for (const auto& s : samples)
            if (s.side == 0) {
                edge0 = s.v;
                if (side < 0)
                    break;
            }
        seq.push_back(edge0);
        for (int k = 1; k <= cfg.levels; ++k) {
            double mx = -kInf;
            bool any = false;
            for (const auto& s : samples)
                if (s.side == side && s.level == k && !std::isnan(s.v)) {
                    mx = std::max(mx, s.v);
                    any = true;
                }
            if (any)
                seq.push_back(mx);
        }
        const std::size_t n = seq.size();
        if (n < 4)
            continue;
        double a = seq[n - 3], b = seq[n - 2], c = seq[n - 1];
        bool grows = strictly_greater(b, a) && strictly_greater(c, b);
        bool large = a > threshold && b > threshold && c > threshold;
        if (grows && large) {
            std::ostringstream os;
            os << "values grow without bound approaching the " << (side < 0 ? "left" : "right")
               << " endpoint";
            return NormResult::diverges(to_linear(seq), threshold_out, os.str());
        }
        // Levels are evenly spaced in log-distance to the endpoint, so a power-law blow-up adds a
        // near-constant log increment per level, however small the exponent. The last level may
        // be cut short by unresolvable samples, so the window ending one level earlier counts too
        // as long as the values still rise.
        for (std::size_t back = 0; back <= 1 && n >= 5 + back; ++back) {
            if (back == 1 && !strictly_greater(seq[n - 1], seq[n - 2]))
                break;
            double l[4];
            bool positive = true;
            for (std::size_t i = 0; i < 4; ++i) {
                double v = seq[n - 4 - back + i];
                l[i] = log_mode ? v : (v > 0.0 ? std::log(v) : kNaN);
                positive = positive && std::isfinite(l[i]);
            }
            if (!positive)
                continue;
            double d1 = l[1] - l[0], d2 = l[2] - l[1], d3 = l[3] - l[2];
            auto steady = [](double x, double y) { return y >= 0.8 * x && y <= 1.25 * x; };
            if (d1 >= 0.1 && steady(d1, d2) && steady(d2, d3)) {
                std::ostringstream os;
                os << "values grow like a power of the distance to the " << (side < 0 ? "left" : "right")
                   << " endpoint";
                return NormResult::diverges(to_linear(seq), threshold_out, os.str());
            }
        }
        if (c > threshold && !grows)
            return NormResult::indeterminate(
                "endpoint values exceed the divergence threshold but are not monotone");
    }

    std::sort(samples.begin(), samples.end(), [](const Sample& x, const Sample& y) { return x.z < y.z; });
    std::size_t best = samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = samples[i].v;
        if (v == kInf)
            return NormResult::diverges({kInf}, threshold_out, "map is infinite at an interior point");
        if (std::isnan(v))
            continue;
        if (best == samples.size() || v > samples[best].v)
            best = i;
    }
    if (best == samples.size())
        return NormResult::indeterminate("map produced no values");

    double grid_max = samples[best].v;
    double value = grid_max;
    double arg = samples[best].t;
    double error = 0.0;
    const bool at_edge = best == 0 || best + 1 == samples.size();
    if (at_edge) {
        // Supremum approached at an endpoint: the change over the last level bounds the error.
        const int side = best == 0 ? -1 : 1;
        double prev = kNaN;
        for (const auto& s : samples)
            if (s.side == side && s.level == cfg.levels - 1 && !std::isnan(s.v))
                prev = std::isnan(prev) ? s.v : std::max(prev, s.v);
        error = std::isfinite(prev) && std::isfinite(grid_max) ? std::abs(grid_max - prev) : 0.0;
    } else if (std::isfinite(grid_max)) {
        auto neg = [&](double z) {
            double v = map(coord.to_t(z));
            return std::isnan(v) ? kInf : -v;
        };
        auto m = detail::golden_minimize(neg, samples[best - 1].z, samples[best + 1].z, 1e-13);
        if (-m.f > value) {
            value = -m.f;
            arg = coord.to_t(m.x);
        }
        error = std::abs(value - grid_max) + (log_mode ? 1e-12 : 1e-12 * std::abs(value));
    }
    for (double t : extra_points) {
        if (!(t > domain.lo) || !(t <= domain.hi))
            continue;
        double v = map(t);
        if (v == kInf)
            return NormResult::diverges({kInf}, threshold_out, "map is infinite at a supplied point");
        if (v > value) {
            value = v;
            arg = t;
        }
    }
    NormResult r = log_mode ? NormResult::finite_log(value, error) : NormResult::finite(value, error);
    r.argmax = arg;
    return r;
}

}  // namespace

NormResult supremum_scan(const RealFn& map, ScanDomain domain, const GridConfig& cfg,
                         std::span<const double> extra_points)
{
    return scan_impl(map, domain, cfg, extra_points, false);
}

NormResult supremum_scan_log(const RealFn& log_map, ScanDomain domain, const GridConfig& cfg,
                             std::span<const double> extra_points)
{
    return scan_impl(log_map, domain, cfg, extra_points, true);
}

// ---------------------------------------------------------------------------

TailFunction empirical_tail(const FunctionSpec& sample)
{
    const Empirical* e = sample.empirical_data();
    if (!e)
        throw Error("empirical_tail needs an empirical function spec");
    const double mass = sample.measure().total_mass;
    auto mags = std::make_shared<std::vector<double>>(e->magnitudes);
    auto cum = std::make_shared<std::vector<double>>(e->cumulative);
    auto eval = [mags, cum, mass](double t) {
        if (t <= 0.0)
            return mass;
        auto it = std::partition_point(mags->begin(), mags->end(), [t](double x) { return x >= t; });
        auto k = static_cast<std::size_t>(it - mags->begin());
        return k == 0 ? 0.0 : (*cum)[k - 1];
    };
    SupportHint hint{e->magnitudes.back(), e->magnitudes.front()};
    std::vector<double> jumps(e->magnitudes.begin(), e->magnitudes.end());
    return TailFunction(eval, mass, hint, {}, std::move(jumps));
}

}  // namespace tailnorm
