#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tailnorm/norms.hpp"
#include "tailnorm/rearrangement.hpp"

using namespace tailnorm;

namespace {

FunctionSpec log_h()
{
    return FunctionSpec::analytic("log_power", {{"m", 1}});
}

FunctionSpec inverse_power(double p)
{
    return FunctionSpec::pointwise(
        "x^(-1/p)", [p](double x) { return std::pow(x, -1.0 / p); }, 1.0, [p](double y) { return y / p; });
}

}  // namespace

TEST_CASE("tail of |log x| on (0,1) is exp(-t)")
{
    TailFunction T = tail_of(log_h());
    for (double t : {0.01, 0.5, 1.0, 3.0, 20.0})
        CHECK(T(t) == doctest::Approx(std::exp(-t)).epsilon(1e-12));
    // log form stays exact where T underflows
    CHECK(T.log_at_log(std::log(2000.0)) == doctest::Approx(-2000.0).epsilon(1e-12));
}

TEST_CASE("tail of a constant function")
{
    TailFunction T = tail_of(FunctionSpec::analytic("constant", {{"c", 2.5}}));
    CHECK(T(1.0) == 1.0);
    CHECK(T(2.5) == 1.0);
    CHECK(T(2.5000001) == 0.0);
}

TEST_CASE("tail of x^(-1/p) by direct set measure")
{
    for (double p : {1.5, 3.0}) {
        TailFunction T = tail_of(inverse_power(p));
        for (double t : {0.3, 1.0, 2.0, 50.0}) {
            // measure of {x in (0,1) : x <= t^{-p}}
            double oracle = std::min(1.0, std::pow(t, -p));
            CHECK(T(t) == doctest::Approx(oracle).epsilon(1e-12));
        }
    }
}

TEST_CASE("rearrangement of |log x| and x^(-1/p)")
{
    Rearrangement h = rearrange(log_h());
    for (double s : {0.9, 0.3, 1e-5})
        CHECK(h(s) == doctest::Approx(std::abs(std::log(s))).epsilon(1e-12));
    Rearrangement g = rearrange(FunctionSpec::analytic("pareto", {{"p", 2}}));
    for (double s : {0.9, 0.3, 1e-5})
        CHECK(g(s) == doctest::Approx(std::pow(s, -0.5)).epsilon(1e-12));
}

TEST_CASE("rearrangement obtained by inverting a tail")
{
    // power_log_tail has no closed-form f*; with delta = 0 it is the Pareto tail.
    Rearrangement r = rearrange(FunctionSpec::analytic("power_log_tail", {{"p0", 2}}));
    for (double s : {0.9, 0.3, 1e-5, 1e-200})
        CHECK(r(s) == doctest::Approx(std::pow(s, -0.5)).epsilon(1e-10));
    CHECK(r.log_at_neglog(3000.0) == doctest::Approx(1500.0).epsilon(1e-10));
}

TEST_CASE("empirical rearrangement is a left-closed step function")
{
    auto f = FunctionSpec::empirical({1, 2, 3, 4});
    Rearrangement r = rearrange(f);
    CHECK(r(0.1) == 4.0);
    CHECK(r(0.25) == 3.0);
    CHECK(r(0.2499) == 4.0);
    CHECK(r(0.5) == 2.0);
    CHECK(r(0.99) == 1.0);
    CHECK(r(1.0) == 0.0);
    auto ties = FunctionSpec::empirical({2, 2, 1, 2});
    Rearrangement rt = rearrange(ties);
    CHECK(rt(0.74) == 2.0);
    CHECK(rt(0.75) == 1.0);
}

TEST_CASE("double_star of |log x| is 1 + |log t|")
{
    for (double t : {0.9, 0.5, 0.01, 1e-8}) {
        auto r = double_star(log_h(), t);
        REQUIRE(r.is_finite());
        CHECK(r.value == doctest::Approx(1 + std::abs(std::log(t))).epsilon(1e-10));
    }
}

TEST_CASE("double_star of a constant")
{
    auto r = double_star(FunctionSpec::analytic("constant", {{"c", 1.75}}), 0.3);
    REQUIRE(r.is_finite());
    CHECK(r.value == doctest::Approx(1.75).epsilon(1e-12));
}

TEST_CASE("double_star diverges when f* is not integrable")
{
    auto r = double_star(FunctionSpec::analytic("pareto", {{"p", 1}}), 0.5);
    CHECK(r.is_diverges());
}

TEST_CASE("double_star oracle: greedy top-weight averages")
{
    auto f = FunctionSpec::empirical({1, 2, 3, 4});
    CHECK(double_star_oracle(f, 0.25) == doctest::Approx(4.0));
    CHECK(double_star_oracle(f, 0.5) == doctest::Approx(3.5));
    CHECK(double_star_oracle(f, 0.375) == doctest::Approx((0.25 * 4 + 0.125 * 3) / 0.375));
    auto r = double_star(f, 0.5);
    REQUIRE(r.is_finite());
    CHECK(r.value == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("double_star agrees with the oracle on random empirical inputs")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + trial * 7;
        std::vector<double> xs(n), ws(n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            xs[i] = std::floor(10 * U(gen)) / std::max(0.1, U(gen));  // forces ties
            ws[i] = 0.1 + U(gen);
            total += ws[i];
        }
        auto f = FunctionSpec::empirical(xs, ws, total);
        for (double frac : {0.013, 0.2, 0.5, 0.77, 1.0}) {
            double t = frac * total;
            auto r = double_star(f, t);
            REQUIRE(r.is_finite());
            CHECK(r.value == doctest::Approx(double_star_oracle(f, t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("f** dominates f* and both are nonincreasing")
{
    std::vector<FunctionSpec> specs = {log_h(), FunctionSpec::analytic("pareto", {{"p", 3}}),
                                       FunctionSpec::analytic("indicator", {{"delta", 0.3}, {"height", 2}}),
                                       FunctionSpec::pareto_sample(2.0, 1000, 3)};
    for (const auto& f : specs) {
        Rearrangement r = rearrange(f);
        AveragedRearrangement fss(r);
        REQUIRE(fss.status().is_finite());
        // t decreases along the loop, so both sequences must not decrease.
        double prev_star = 0.0, prev_ss = 0.0;
        for (double t = 0.999; t > 1e-9; t *= 0.83) {
            double a = r(t), b = fss(t);
            CHECK(b >= a * (1 - 1e-12));
            CHECK(a >= prev_star);
            CHECK(b >= prev_ss * (1 - 1e-12));
            prev_star = a;
            prev_ss = b;
        }
    }
}

TEST_CASE("f** beyond the mass extends f* by zero")
{
    auto f = FunctionSpec::analytic("constant", {{"c", 2}, {"mass", 0.5}});
    AveragedRearrangement fss(rearrange(f));
    CHECK(fss(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equimeasurability: f* viewed as a function has the tail of f")
{
    std::vector<FunctionSpec> specs = {FunctionSpec::analytic("gaussian", {{"sigma", 1.3}}),
                                       FunctionSpec::analytic("pareto", {{"p", 2.5}, {"K", 2}})};
    for (const auto& f : specs) {
        Rearrangement r = rearrange(f);
        auto again = FunctionSpec::pointwise("f*", [r](double s) { return r(s); }, r.mass());
        TailFunction a = tail_of(f), b = tail_of(again);
        for (double t : {0.1, 0.7, 2.0, 3.1, 9.0})
            CHECK(b(t) == doctest::Approx(a(t)).epsilon(1e-8));
    }
}

TEST_CASE("L_p identity between the tail integral and the rearrangement integral")
{
    std::vector<FunctionSpec> specs = {log_h(), FunctionSpec::analytic("pareto", {{"p", 3}}),
                                       FunctionSpec::analytic("weibull", {{"k", 0.7}}),
                                       FunctionSpec::analytic("power_log_tail", {{"p0", 3}, {"delta", 1}})};
    for (const auto& f : specs) {
        for (double p : {1.0, 1.5, 2.0}) {
            auto r = lp_norm(f, p);
            REQUIRE(r.is_finite());
            CHECK(r.cross_check == doctest::Approx(r.value).epsilon(1e-6));
        }
    }
}
