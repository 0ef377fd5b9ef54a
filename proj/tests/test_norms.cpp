#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tailnorm/norms.hpp"

using namespace tailnorm;

namespace {

FunctionSpec pareto(double p)
{
    return FunctionSpec::analytic("pareto", {{"p", p}});
}

FunctionSpec log_h()
{
    return FunctionSpec::analytic("log_power", {{"m", 1}});
}

FunctionSpec gaussian(double sigma)
{
    return FunctionSpec::analytic("gaussian", {{"sigma", sigma}});
}

YoungFunction exp_square()
{
    return eof_power(2.0).as_young();
}

YoungFunction exp_linear()
{
    return YoungFunction("exp_minus_one", {}, [](double x) {
        double u = std::exp(x);
        return u > 40.0 ? u + std::log1p(-std::exp(-u)) : std::log(std::expm1(u));
    });
}

}  // namespace

TEST_CASE("weak norm examples")
{
    auto h = weak_norm(log_h(), natural_weight(log_h()));
    REQUIRE(h.is_finite());
    CHECK(h.value == doctest::Approx(1.0).epsilon(1e-6));

    auto z = weak_norm(FunctionSpec::analytic("zero", {}), power_weight(2.0));
    REQUIRE(z.is_finite());
    CHECK(z.value == 0.0);

    for (double p : {1.5, 2.0, 4.0}) {
        auto r = weak_norm(pareto(p), power_weight(p));
        REQUIRE(r.is_finite());
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("weak norm diverges when the weight outgrows f*")
{
    auto r = weak_norm(pareto(1.5), power_weight(2.0));
    CHECK(r.is_diverges());
}

TEST_CASE("the two forms of the weak norm agree on continuous tails")
{
    std::vector<FunctionSpec> specs = {pareto(2.0), pareto(4.0), gaussian(1.3),
                                       FunctionSpec::analytic("exponential", {{"scale", 0.7}}),
                                       FunctionSpec::analytic("weibull", {{"k", 0.6}}), log_h()};
    std::vector<Weight> weights = {power_weight(1.25), power_weight(2.0), power_weight(10.0), power_weight(1.5)};
    for (const auto& f : specs) {
        for (const auto& w : weights) {
            auto r = weak_norm(f, w);
            if (!r.is_finite())
                continue;
            CHECK_MESSAGE(r.cross_check == doctest::Approx(r.value).epsilon(1e-4),
                          f.description() << " / " << w.describe());
        }
    }
}

TEST_CASE("implied tail bound from the weak norm")
{
    auto f = gaussian(1.0);
    Weight w = power_weight(2.0);
    auto r = weak_norm(f, w);
    REQUIRE(r.is_finite());
    TailFunction T = tail_of(f);
    for (double t : {0.1, 0.5, 1.0, 2.0, 4.0})
        CHECK(T(t) <= weak_tail_bound(w, r.value, t) * (1 + 1e-9));
}

TEST_CASE("Marcinkiewicz norm examples")
{
    CHECK(marcinkiewicz_norm(log_h(), natural_weight(log_h())).is_diverges());
    for (double p : {2.0, 4.0}) {
        auto r = marcinkiewicz_norm(pareto(p), power_weight(p));
        REQUIRE(r.is_finite());
        CHECK(r.value == doctest::Approx(p / (p - 1.0)).epsilon(1e-6));
    }
    auto ind = FunctionSpec::analytic("indicator", {{"delta", 0.25}, {"height", 1}});
    auto r = marcinkiewicz_norm(ind, power_weight(2.0));
    REQUIRE(r.is_finite());
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("divergence evidence for h against its natural weight grows past 1e3")
{
    auto r = marcinkiewicz_norm(log_h(), natural_weight(log_h()));
    REQUIRE(r.is_diverges());
    REQUIRE(r.growth.size() >= 3);
    std::size_t n = r.growth.size();
    CHECK(r.growth[n - 1] > r.growth[n - 2]);
    CHECK(r.growth[n - 2] > r.growth[n - 3]);
    CHECK(r.growth[n - 3] > 1e3);
}

TEST_CASE("L_p norm examples")
{
    auto e = lp_norm(FunctionSpec::analytic("exponential", {{"scale", 1}}), 2.0);
    REQUIRE(e.is_finite());
    CHECK(e.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    for (double p : {1.0, 3.0, 11.5}) {
        auto c = lp_norm(FunctionSpec::analytic("constant", {{"c", 1.7}}), p);
        REQUIRE(c.is_finite());
        CHECK(c.value == doctest::Approx(1.7).epsilon(1e-9));
    }
    CHECK(lp_norm(pareto(2.0), 2.0).is_diverges());
    CHECK(lp_norm(pareto(2.0), 2.5).is_diverges());
}

TEST_CASE("L_p of the Pareto tail against the closed form 1 + p/(p0 - p)")
{
    for (double p : {1.0, 1.5, 1.9, 1.99}) {
        auto r = lp_norm(pareto(2.0), p);
        REQUIRE(r.is_finite());
        double oracle = std::pow(1.0 + p / (2.0 - p), 1.0 / p);
        CHECK(r.value == doctest::Approx(oracle).epsilon(1e-8));
        CHECK(r.cross_check == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("L_p of an empirical sample is the weighted power mean")
{
    auto f = FunctionSpec::empirical({3, 1, 2, 2}, {0.1, 0.2, 0.3, 0.4});
    for (double p : {1.0, 2.0, 3.5}) {
        auto r = lp_norm(f, p);
        double oracle =
            std::pow(0.1 * std::pow(3, p) + 0.2 * 1 + 0.3 * std::pow(2, p) + 0.4 * std::pow(2, p), 1.0 / p);
        CHECK(r.value == doctest::Approx(oracle).epsilon(1e-13));
        CHECK(r.cross_check == doctest::Approx(oracle).epsilon(1e-13));
    }
}

TEST_CASE("weak-Orlicz functional examples")
{
    auto a = weak_orlicz_rho(pareto(2.0), power_young(2.0));
    REQUIRE(a.is_finite());
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-9));

    auto b = weak_orlicz_rho(gaussian(1.0), exp_square());
    REQUIRE(b.is_finite());
    CHECK(b.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b.value <= 1.0 + 1e-12);

    auto ind = FunctionSpec::analytic("indicator", {{"delta", 0.3}, {"height", 2}});
    auto c = weak_orlicz_rho(ind, power_young(3.0));
    REQUIRE(c.is_finite());
    CHECK(c.value <= 8.0 * 1.0);
    CHECK(c.value == doctest::Approx(8.0 * 0.3).epsilon(1e-9));
}

TEST_CASE("weak-Orlicz norm examples")
{
    for (double p : {1.5, 2.0, 3.0}) {
        auto r = weak_orlicz_norm(pareto(p), power_young(p));
        REQUIRE(r.is_finite());
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
    }
    auto z = weak_orlicz_norm(FunctionSpec::analytic("zero", {}), power_young(2.0));
    REQUIRE(z.is_finite());
    CHECK(z.value == 0.0);
    for (double sigma : {0.5, 1.0, 2.0}) {
        auto g = weak_orlicz_norm(gaussian(sigma), exp_square());
        REQUIRE(g.is_finite());
        CHECK(g.value == doctest::Approx(sigma).epsilon(1e-7));
    }
    CHECK(weak_orlicz_norm(log_h(), exp_square()).is_diverges());
}

TEST_CASE("membership in the closure of bounded functions")
{
    auto ind = in_wM(FunctionSpec::analytic("indicator", {{"delta", 0.5}, {"height", 3}}), exp_square());
    CHECK(ind.verdict == Verdict::finite);
    CHECK(ind.member);

    auto cubic = in_wM(FunctionSpec::analytic("weibull", {{"k", 3}}), exp_square());
    CHECK(cubic.verdict == Verdict::finite);
    CHECK(cubic.member);

    auto gauss = in_wM(gaussian(1.0), exp_square());
    CHECK(gauss.verdict == Verdict::finite);
    CHECK_FALSE(gauss.member);
    CHECK(gauss.failing_c == doctest::Approx(0.5));

    // exp(t^2/c^2 - t) is unbounded for every c, so the exponential tail is not even in the space.
    auto expo = in_wM(FunctionSpec::analytic("exponential", {{"scale", 1}}), exp_square());
    CHECK(expo.verdict == Verdict::finite);
    CHECK_FALSE(expo.member);
    CHECK(expo.failing_c == doctest::Approx(1.0));
}

TEST_CASE("Luxemburg norm examples")
{
    for (double c0 : {0.5, 1.0, 3.0}) {
        auto r = luxemburg_norm(FunctionSpec::analytic("constant", {{"c", c0}}), power_young(2.0));
        REQUIRE(r.is_finite());
        CHECK(r.value == doctest::Approx(c0).epsilon(1e-8));
    }
    // modular of h under e^u - 1 is 1/(c - 1)
    auto m = orlicz_modular(log_h(), exp_linear(), 3.0);
    REQUIRE(m.is_finite());
    CHECK(m.value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(orlicz_modular(log_h(), exp_linear(), 0.9).is_diverges());
    auto h = luxemburg_norm(log_h(), exp_linear());
    REQUIRE(h.is_finite());
    CHECK(h.value == doctest::Approx(2.0).epsilon(1e-8));
    // E exp(f^2/c^2) - 1 = sigma^2/(c^2 - sigma^2) for a Gaussian-type tail
    for (double sigma : {0.5, 1.0, 2.0}) {
        auto g = luxemburg_norm(gaussian(sigma), exp_square());
        REQUIRE(g.is_finite());
        CHECK(g.value == doctest::Approx(std::sqrt(2.0) * sigma).epsilon(1e-7));
    }
    CHECK(luxemburg_norm(FunctionSpec::analytic("exponential", {{"scale", 1}}), exp_square()).is_diverges());
}

TEST_CASE("Chebyshev step of the Luxemburg unit ball")
{
    auto f = gaussian(0.5);
    YoungFunction phi = exp_square();
    auto lux = luxemburg_norm(f, phi);
    REQUIRE(lux.is_finite());
    REQUIRE(lux.value <= 1.0);
    auto modular = orlicz_modular(f, phi, 1.0);
    REQUIRE(modular.is_finite());
    TailFunction T = tail_of(f);
    for (double t : {0.2, 0.5, 1.0, 2.0, 3.0})
        CHECK(T(t) <= modular.value / phi(t) * (1 + 1e-9));
}

TEST_CASE("Grand Lebesgue norm examples")
{
    auto f = FunctionSpec::analytic("exponential", {{"scale", 1}});
    auto d = gls_norm(f, make_psi("degenerate", {{"r", 3}}));
    REQUIRE(d.is_finite());
    CHECK(d.value == doctest::Approx(std::cbrt(6.0)).epsilon(1e-9));

    // sup over p in (1, 2) of (2/(2-p))^{1/p} (2-p)^{1/2}, oracle by dense evaluation of the closed form
    auto r = gls_norm(pareto(2.0), make_psi("p0_delta_s", {{"p0", 2}, {"delta", 0}}));
    REQUIRE(r.is_finite());
    double oracle = 0.0;
    for (int i = 0; i <= 200000; ++i) {
        double p = 1.0 + 1e-9 + (1.0 - 2e-9) * i / 200000.0;
        oracle = std::max(oracle, std::pow(2.0 / (2.0 - p), 1.0 / p) * std::sqrt(2.0 - p));
    }
    CHECK(r.value >= 0.5);
    CHECK(r.value <= 2.5);
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("Grand Lebesgue norm diverges when the ratio blows up at the end of the support")
{
    // |f|_p ~ (2-p)^{-1/2} against psi = (B - p)^{-1/4}
    auto r = gls_norm(pareto(2.0), make_psi("power_blowup", {{"B", 2}, {"beta", 0.25}}));
    CHECK(r.is_diverges());
}

TEST_CASE("Lorentz integral functional examples")
{
    auto one = lorentz_integral_norm(FunctionSpec::analytic("constant", {{"c", 1}}), power_weight(2.0), 2.0);
    REQUIRE(one.is_finite());
    CHECK(one.value == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
    auto z = lorentz_integral_norm(FunctionSpec::analytic("zero", {}), power_weight(2.0), 2.0);
    REQUIRE(z.is_finite());
    CHECK(z.value == 0.0);
    auto q = lorentz_integral_norm(pareto(4.0), power_weight(2.0), 2.0);
    REQUIRE(q.is_finite());
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("absolute homogeneity")
{
    const double lambda = 3.7;
    auto f = gaussian(0.8);
    auto g = f.scaled(lambda);
    Weight w = power_weight(2.0);
    auto ratio = [&](const NormResult& a, const NormResult& b) {
        REQUIRE(a.is_finite());
        REQUIRE(b.is_finite());
        return b.value / a.value;
    };
    CHECK(ratio(weak_norm(f, w), weak_norm(g, w)) == doctest::Approx(lambda).epsilon(1e-6));
    CHECK(ratio(marcinkiewicz_norm(f, w), marcinkiewicz_norm(g, w)) == doctest::Approx(lambda).epsilon(1e-6));
    CHECK(ratio(weak_orlicz_norm(f, exp_square()), weak_orlicz_norm(g, exp_square())) ==
          doctest::Approx(lambda).epsilon(1e-6));
    CHECK(ratio(luxemburg_norm(f, exp_square()), luxemburg_norm(g, exp_square())) ==
          doctest::Approx(lambda).epsilon(1e-6));
    PsiFunction psi = make_psi("power_blowup", {{"B", 6}, {"beta", 1}});
    CHECK(ratio(gls_norm(f, psi), gls_norm(g, psi)) == doctest::Approx(lambda).epsilon(1e-6));
    auto p = pareto(3.0);
    CHECK(ratio(weak_orlicz_norm(p, power_young(3.0)), weak_orlicz_norm(p.scaled(lambda), power_young(3.0))) ==
          doctest::Approx(lambda).epsilon(1e-6));
}

TEST_CASE("rearrangement invariance: equal tails give equal norms")
{
    // x^{-1/2} on (0,1) as a map, and the Pareto tail it has
    auto a = pareto(2.0);
    auto b = FunctionSpec::pointwise(
        "x^(-1/2) reversed", [](double x) { return std::pow(x, -0.5); }, 1.0);
    Weight w = power_weight(1.5);
    auto wa = weak_norm(a, w), wb = weak_norm(b, w);
    REQUIRE(wa.is_finite());
    REQUIRE(wb.is_finite());
    CHECK(wb.value == doctest::Approx(wa.value).epsilon(1e-6));
    auto la = lp_norm(a, 1.5), lb = lp_norm(b, 1.5);
    CHECK(lb.value == doctest::Approx(la.value).epsilon(1e-6));
    auto ma = marcinkiewicz_norm(a, w), mb = marcinkiewicz_norm(b, w);
    REQUIRE(ma.is_finite());
    REQUIRE(mb.is_finite());
    CHECK(mb.value == doctest::Approx(ma.value).epsilon(1e-6));
}

TEST_CASE("sandwich between the weak and Marcinkiewicz norms")
{
    std::vector<FunctionSpec> specs = {pareto(1.5), pareto(2.0), pareto(4.0), gaussian(1.0),
                                       FunctionSpec::analytic("indicator", {{"delta", 0.1}, {"height", 2}})};
    for (double p : {1.25, 2.0, 10.0}) {
        Weight w = power_weight(p);
        auto g = gamma(w);
        REQUIRE(g.is_finite());
        for (const auto& f : specs) {
            auto weak = weak_norm(f, w);
            auto marc = marcinkiewicz_norm(f, w);
            if (weak.is_diverges()) {
                CHECK(marc.is_diverges());
                continue;
            }
            REQUIRE(weak.is_finite());
            REQUIRE(marc.is_finite());
            CHECK(weak.value <= marc.value * (1 + 1e-9));
            CHECK(marc.value <= g.value * weak.value * (1 + 1e-3));
        }
    }
}

TEST_CASE("empirical weak norm of a Pareto sample approaches the analytic value")
{
    auto sample = FunctionSpec::pareto_sample(2.0, 100000, 42);
    CHECK(empirical_weak_floor(sample) == doctest::Approx(317.0 / 100000.0));
    WeakNormOptions opts;
    opts.min_s = empirical_weak_floor(sample);
    auto r = weak_norm(sample, power_weight(2.0), {}, opts);
    REQUIRE(r.is_finite());
    CHECK(r.value == doctest::Approx(1.0).epsilon(0.05));
    // exact path: max over atoms of w(cumulative) * magnitude, above the floor
    const Empirical* e = sample.empirical_data();
    double oracle = 0.0;
    for (std::size_t i = 0; i < e->magnitudes.size(); ++i)
        if (e->cumulative[i] >= opts.min_s)
            oracle = std::max(oracle, std::sqrt(e->cumulative[i]) * e->magnitudes[i]);
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-12));
}
