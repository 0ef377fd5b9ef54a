#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tailnorm/norms.hpp"
#include "tailnorm/young.hpp"

using namespace tailnorm;

TEST_CASE("power Young function and its log evaluator")
{
    YoungFunction phi = power_young(3.0);
    CHECK(phi(2.0) == doctest::Approx(8.0));
    CHECK(phi(-2.0) == doctest::Approx(8.0));
    CHECK(phi(0.0) == 0.0);
    CHECK(phi.log_eval_log(1000.0) == doctest::Approx(3000.0));
    CHECK(validate_young(phi).valid);
    CHECK_THROWS_AS(power_young(0.5), Error);
}

TEST_CASE("exponential Young functions from power exponents")
{
    for (double q : {1.1, 1.5, 2.0, 3.0, 7.0}) {
        auto n = eof_power(q);
        auto report = validate_eof(n);
        CHECK_MESSAGE(report.valid, "q=" << q);
        YoungFunction N = n.as_young();
        CHECK(N(1.0) == doctest::Approx(std::exp(1.0) - 1.0));
        CHECK(N(0.5) == doctest::Approx(std::expm1(std::pow(0.5, q))).epsilon(1e-14));
    }
    CHECK_FALSE(validate_eof(eof_power(1.0)).valid);
}

TEST_CASE("u^2 log(1 + u^2) generates an exponential Young function")
{
    auto n = eof_square_log();
    CHECK(validate_eof(n).valid);
    CHECK(n.nu(2.0) == doctest::Approx(4.0 * std::log(5.0)));
    // derivative against a central difference
    for (double u : {0.3, 1.0, 4.0}) {
        double h = 1e-6 * u;
        double fd = (n.nu(u + h) - n.nu(u - h)) / (2 * h);
        CHECK(n.nu_prime(u) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("validate_eof rejects exponents violating the EOF conditions")
{
    auto shifted = eof_custom(
        "u^2 + 1", [](double u) { return u * u + 1.0; }, [](double u) { return 2 * u; });
    CHECK_FALSE(validate_eof(shifted).valid);
    auto bounded = eof_custom(
        "log(1 + u^2)", [](double u) { return std::log1p(u * u); }, [](double u) { return 2 * u / (1 + u * u); });
    CHECK_FALSE(validate_eof(bounded).valid);
    auto odd = eof_custom(
        "u^3", [](double u) { return u * u * u; }, [](double u) { return 3 * u * u; });
    CHECK_FALSE(validate_eof(odd).valid);
}

TEST_CASE("power-log Young function is continuous at the knot")
{
    for (double p0 : {1.5, 2.0, 4.0}) {
        for (double delta : {0.0, 0.5, 2.0}) {
            for (double kappa : {0.0, 1.0}) {
                YoungFunction phi = phi_p0_delta_s(p0, delta, SlowlyVarying::log_power_infinity(kappa));
                const double e = std::exp(1.0);
                double below = phi(std::nextafter(e, 0.0));
                double above = phi(std::nextafter(e, 10.0));
                CHECK(above == doctest::Approx(below).epsilon(1e-12));
                // closed form above the knot
                double u = 50.0;
                double S = std::pow(1.0 + std::log1p(std::log(u)), kappa);
                double expect = std::pow(u, p0) * std::pow(std::log(u), -delta) * S;
                CHECK(phi(u) == doctest::Approx(expect).epsilon(1e-12));
                // and the quadratic patch below it
                double S1 = std::pow(1.0 + std::log(2.0), kappa);
                CHECK(phi(1.0) == doctest::Approx(std::exp(p0 - 2.0) * S1).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("power-log Young function is nondecreasing; convexity is only advised")
{
    YoungFunction phi = phi_p0_delta_s(2.0, 2.0, SlowlyVarying::constant());
    auto report = validate_young(phi);
    CHECK(report.valid);
    double prev = 0.0;
    for (double u = 0.01; u < 1e6; u *= 1.07) {
        double v = phi(u);
        CHECK(v >= prev * (1 - 1e-12));
        prev = v;
    }
    CHECK_THROWS_AS(phi_p0_delta_s(1.0, 0.0, SlowlyVarying::constant()), Error);
}

TEST_CASE("psi families")
{
    PsiFunction a = make_psi("p0_delta_s", {{"p0", 2}, {"delta", 0}});
    CHECK(a(1.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(a.lower() == 1.0);
    CHECK(a.upper() == 2.0);
    CHECK(std::isinf(a(2.5)));

    PsiFunction d = make_psi("degenerate", {{"r", 2}});
    CHECK(d.degenerate());
    CHECK(d(2.0) == 1.0);
    CHECK(std::isinf(d(3.0)));

    PsiFunction b = make_psi("power_blowup", {{"B", 3}, {"beta", 1}});
    double prev = 0.0;
    for (double p = 2.0; p < 3.0; p = 3.0 - 0.5 * (3.0 - p)) {
        double v = b(p);
        CHECK(v > prev);
        CHECK(v == doctest::Approx(1.0 / (3.0 - p)));
        prev = v;
        if (3.0 - p < 1e-12)
            break;
    }
    CHECK(std::isinf(b(3.0)));

    PsiFunction s = make_psi("p0_delta_s", {{"p0", 3}, {"delta", 1}, {"s_kappa", 2}});
    double p = 2.0;
    double z = 3.0 / (3.0 - p);
    double S = std::pow(1.0 + std::log1p(z), 2.0);
    CHECK(s(p) == doctest::Approx(std::pow(3.0 - p, -2.0 / 3.0) * std::pow(S, 1.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("psi parameter ranges are enforced")
{
    CHECK_THROWS_AS(make_psi("power_blowup", {{"B", 1}, {"beta", 1}}), Error);
    CHECK_THROWS_AS(make_psi("power_blowup", {{"B", 3}, {"beta", -1}}), Error);
    CHECK_THROWS_AS(make_psi("p0_delta_s", {{"p0", 1}}), Error);
    CHECK_THROWS_AS(make_psi("p0_delta_s", {{"p0", 2}, {"delta", -1}}), Error);
    CHECK_THROWS_AS(make_psi("degenerate", {{"r", 0.5}}), Error);
    CHECK_THROWS_AS(make_psi("nope", {}), Error);
}

TEST_CASE("psi families have a positive infimum on compact subintervals")
{
    std::vector<PsiFunction> psis = {make_psi("power_blowup", {{"B", 4}, {"beta", 0.5}}),
                                     make_psi("p0_delta_s", {{"p0", 2.5}, {"delta", 0.3}, {"s_kappa", 1}})};
    for (const auto& psi : psis) {
        double a = psi.lower(), b = psi.upper();
        double lo = kInf;
        for (int i = 1; i < 200; ++i) {
            double p = a + (b - a) * i / 200.0;
            double v = psi(p);
            CHECK(std::isfinite(v));
            lo = std::min(lo, v);
        }
        CHECK(lo > 0.0);
    }
}

TEST_CASE("natural psi of the exponential tail is Gamma(p+1)^(1/p)")
{
    auto f = FunctionSpec::analytic("exponential", {{"scale", 1}});
    NaturalPsi np = natural_psi(f, 1.0, 6.0);
    CHECK(np.divergent.empty());
    CHECK(np.psi(1.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(np.psi(2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    for (double p : {1.37, 2.71, 4.444, 5.9})
        CHECK(np.psi(p) == doctest::Approx(std::pow(std::tgamma(p + 1.0), 1.0 / p)).epsilon(1e-6));
}

TEST_CASE("natural psi of a constant is constant")
{
    auto f = FunctionSpec::analytic("constant", {{"c", 2.5}});
    NaturalPsi np = natural_psi(f, 1.0, 10.0);
    for (double p : {1.0, 2.2, 9.9})
        CHECK(np.psi(p) == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("natural psi records divergent moments")
{
    auto f = FunctionSpec::analytic("pareto", {{"p", 3}});
    NaturalPsi np = natural_psi(f, 1.0, 4.0, 31);
    REQUIRE(!np.divergent.empty());
    for (double p : np.divergent)
        CHECK(p >= 3.0 - 1e-12);
    CHECK(np.psi(2.0) == doctest::Approx(std::pow(3.0, 0.5)).epsilon(1e-6));
}

TEST_CASE("a function has unit GLS norm against its own natural psi")
{
    std::vector<FunctionSpec> specs = {FunctionSpec::analytic("exponential", {{"scale", 2}}),
                                       FunctionSpec::analytic("weibull", {{"k", 0.5}}),
                                       FunctionSpec::analytic("constant", {{"c", 3}})};
    for (const auto& f : specs) {
        NaturalPsi np = natural_psi(f, 1.0, 8.0);
        auto r = gls_norm(f, np.psi);
        REQUIRE(r.is_finite());
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    }
}
