#pragma once

// Measurable functions, their tails, and the shared numeric kernels:
// monotone inversion, singular quadrature and supremum scanning.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tailnorm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Invalid input: bad parameters, violated preconditions, malformed data.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric procedure could not reach a verdict (bracketing failed, budget exhausted).
class IndeterminateError : public Error {
public:
    using Error::Error;
};

using RealFn = std::function<double(double)>;
using Params = std::map<std::string, double>;

struct MeasureSpace {
    double total_mass = 1.0;  // may be +inf
    bool atomless = true;

    static MeasureSpace probability() { return {}; }
    bool finite() const { return total_mass < kInf; }
    void validate() const;
};

/// Scan and refinement settings shared by every sup/inf functional.
struct GridConfig {
    int points = 512;                 // base-level scan points
    int levels = 6;                   // endpoint refinement levels per side
    double divergence_factor = 1e3;   // growth threshold relative to the median interior value
    double grid_scale = 1.0;          // multiplies point counts
    double min_log_distance = -230.0; // scans stop at relative distance e^{this} from a zero endpoint

    int base_points() const;
    int level_points() const;

    /// Defaults, with TAILNORM_GRID_SCALE applied when set.
    static GridConfig from_environment();
};

enum class Verdict { finite, diverges, indeterminate };

const char* to_string(Verdict v);

/// Value with convergence evidence, or a divergence certificate.
struct NormResult {
    Verdict verdict = Verdict::indeterminate;
    double value = kNaN;
    double error = kNaN;
    // Natural log of value. Finite results beyond double range keep value = +inf.
    double log_value = kNaN;
    double argmax = kNaN;
    // Independent second route, when the operation computes one.
    double cross_check = kNaN;
    // Diverges: values over successive refinement levels, and the threshold they beat.
    std::vector<double> growth;
    double threshold = kNaN;
    std::string reason;

    static NormResult finite(double value, double error);
    static NormResult finite_log(double log_value, double rel_error);
    static NormResult diverges(std::vector<double> growth, double threshold, std::string reason);
    static NormResult indeterminate(std::string reason);

    bool is_finite() const { return verdict == Verdict::finite; }
    bool is_diverges() const { return verdict == Verdict::diverges; }
};

/// Structured outcome of a validation pass; numeric trouble is reported, never thrown.
struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;
    std::vector<std::string> advisories;

    void fail(std::string message)
    {
        valid = false;
        violations.push_back(std::move(message));
    }
    void advise(std::string message) { advisories.push_back(std::move(message)); }
};

/// Where a tail is trivially known: T = mass below `full_below`, T = 0 above `zero_above`.
struct SupportHint {
    double full_below = 0.0;
    double zero_above = kInf;
};

/// t -> mu{|f| >= t}; nonincreasing with values in [0, total_mass].
class TailFunction {
public:
    TailFunction() = default;
    TailFunction(RealFn eval, double total_mass, SupportHint hint = {}, RealFn log_at_log = {},
                 std::vector<double> jumps = {});

    double operator()(double t) const;
    /// log T(e^x); stays accurate where T underflows.
    double log_at_log(double x) const;

    double total_mass() const { return total_mass_; }
    const SupportHint& support() const { return hint_; }
    std::span<const double> jumps() const { return jumps_; }

private:
    RealFn eval_;
    RealFn log_at_log_;
    double total_mass_ = 1.0;
    SupportHint hint_;
    std::vector<double> jumps_;
};

enum class Direction { increasing, decreasing };
enum class EndpointBehavior { finite_limit, diverges };

/// Tabulated monotone curve with linear interpolation between nodes.
class MonotoneCurve {
public:
    MonotoneCurve(std::vector<double> abscissa, std::vector<double> values, Direction direction,
                  EndpointBehavior left = EndpointBehavior::finite_limit,
                  EndpointBehavior right = EndpointBehavior::finite_limit);

    double operator()(double x) const;
    Direction direction() const { return direction_; }
    std::span<const double> abscissa() const { return x_; }
    std::span<const double> values() const { return y_; }
    EndpointBehavior left_behavior() const { return left_; }
    EndpointBehavior right_behavior() const { return right_; }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    Direction direction_;
    EndpointBehavior left_;
    EndpointBehavior right_;
};

// ---------------------------------------------------------------------------
// Function specifications
// ---------------------------------------------------------------------------

/// Closed-form tail, optionally with its closed-form rearrangement.
struct AnalyticTail {
    std::string family;
    Params params;
    TailFunction tail;
    RealFn rearrangement;             // s -> f*(s); empty means invert the tail
    RealFn log_rearrangement_neglog;  // y -> log f*(M e^{-y})
    std::vector<double> rearrangement_breaks;
};

/// A nonincreasing map on (0, mass) that is its own rearrangement.
struct PointwiseMonotone {
    std::string label;
    RealFn map;
    RealFn log_map_neglog;  // y -> log map(M e^{-y})
    std::vector<double> breaks;
};

/// Atoms with positive weights; magnitudes sorted descending, ties merged.
struct Empirical {
    std::vector<double> magnitudes;
    std::vector<double> weights;
    std::vector<double> cumulative;  // cumulative[i] = sum of weights[0..i]
};

class FunctionSpec {
public:
    using Variant = std::variant<AnalyticTail, PointwiseMonotone, Empirical>;

    FunctionSpec(Variant v, MeasureSpace measure, std::string description);

    /// Named analytic family; see analytic_families().
    static FunctionSpec analytic(const std::string& family, const Params& params);
    static FunctionSpec pointwise(std::string label, RealFn map, double mass,
                                  RealFn log_map_neglog = {}, std::vector<double> breaks = {});
    /// Empty weights means uniform weights summing to `mass`.
    static FunctionSpec empirical(std::vector<double> magnitudes, std::vector<double> weights = {},
                                  double mass = 1.0);

    /// Pareto(p) pseudo-sample: n draws of U^{-1/p} from a seeded mt19937_64.
    static FunctionSpec pareto_sample(double p, std::size_t n, std::uint64_t seed);

    const Variant& variant() const { return variant_; }
    const MeasureSpace& measure() const { return measure_; }
    const std::string& description() const { return description_; }

    bool is_empirical() const { return std::holds_alternative<Empirical>(variant_); }
    const Empirical* empirical_data() const { return std::get_if<Empirical>(&variant_); }

    /// The function lambda * f.
    FunctionSpec scaled(double lambda) const;

private:
    Variant variant_;
    MeasureSpace measure_;
    std::string description_;
};

struct FamilyInfo {
    std::string id;
    std::vector<std::string> params;
    std::string summary;
};

const std::vector<FamilyInfo>& analytic_families();

// ---------------------------------------------------------------------------
// Numeric kernels
// ---------------------------------------------------------------------------

/// inf{s >= 0 : tail(s) <= level}. Throws IndeterminateError when no bracket exists.
double left_inverse(const TailFunction& tail, double level);
double left_inverse(const MonotoneCurve& curve, double level);

struct QuadratureOptions {
    double rel_tol = 1e-12;
    int max_depth = 18;
    double y_cap = 0x1p60;  // farthest log-distance explored when evaluation stays representable
};

/// Globally adaptive Gauss-Kronrod (31 points) on a finite interval; at most 2^max_depth
/// segments. Stops when the error estimate is below max(abs_tol, rel_tol * |value|).
struct IntervalIntegral {
    double value = 0.0;
    double error = 0.0;
};
IntervalIntegral integrate_interval(const RealFn& f, double a, double b, double rel_tol = 1e-12,
                                    int max_depth = 18, double abs_tol = 0.0);

/// log of the integral over [0, y_max] of exp(log_phi(y)), on doubling panels.
/// Divergence is certified when partial integrals grow strictly over the last three
/// panels while panel contributions stop decaying.
NormResult integrate_exp_halfline(const RealFn& log_phi, double y_max,
                                  std::span<const double> breaks = {},
                                  const QuadratureOptions& opts = {});

/// Integral of a nonnegative integrand over (0, upper], singular at most at 0.
/// Uses u = upper * e^{-y}.
NormResult integrate_lower_singular(const RealFn& integrand, double upper,
                                    const QuadratureOptions& opts = {});

/// Same, with the integrand supplied as y -> log g(anchor * e^{-y}); no underflow limit.
NormResult integrate_lower_singular_neglog(const RealFn& log_integrand_neglog, double anchor,
                                           double upper, std::span<const double> breaks = {},
                                           const QuadratureOptions& opts = {});

struct ScanDomain {
    double lo = 0.0;
    double hi = kInf;
};

/// sup of `map` over the open interval. `extra_points` are evaluated in addition to the grid
/// (jump locations, left limits). The map may return +inf; NaN points are ignored.
NormResult supremum_scan(const RealFn& map, ScanDomain domain, const GridConfig& cfg = {},
                         std::span<const double> extra_points = {});

/// Same scan for a map given as log values; the result keeps log_value exact when the
/// supremum itself overflows.
NormResult supremum_scan_log(const RealFn& log_map, ScanDomain domain, const GridConfig& cfg = {},
                             std::span<const double> extra_points = {});

/// Evaluation points a scan with this config visits, in increasing order.
std::vector<double> scan_points(ScanDomain domain, const GridConfig& cfg);

/// T(t) = sum of weights of magnitudes >= t.
TailFunction empirical_tail(const FunctionSpec& sample);

}  // namespace tailnorm
