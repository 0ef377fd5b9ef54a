#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tailnorm/harness.hpp"

using namespace tailnorm;

namespace {

const Assertion* find(const CheckReport& r, const std::string& input_part, const std::string& quantity_part)
{
    for (const auto& a : r.assertions)
        if (a.input.find(input_part) != std::string::npos && a.quantity.find(quantity_part) != std::string::npos)
            return &a;
    return nullptr;
}

}  // namespace

TEST_CASE("report status: fail dominates indeterminate, which dominates pass")
{
    CheckReport r{"x"};
    r.expect("a", "q", 1.0, 0.0, 2.0);
    CHECK(r.status == CheckStatus::pass);
    r.expect("a", "q", kNaN, 0.0, 2.0);
    CHECK(r.status == CheckStatus::indeterminate);
    r.expect("a", "q", 3.0, 0.0, 2.0);
    CHECK(r.status == CheckStatus::fail);
    r.expect("a", "q", 1.0, 0.0, 2.0);
    CHECK(r.status == CheckStatus::fail);

    CheckReport outer{"y"};
    CheckReport ind{"z"};
    ind.record("a", "q", kNaN, CheckStatus::indeterminate);
    outer.absorb(ind);
    CHECK(outer.status == CheckStatus::indeterminate);
    CHECK(outer.assertions.size() == 1);
}

TEST_CASE("sandwich of x^(-1/2) against w_2 has ratio 2 = gamma")
{
    auto f = FunctionSpec::analytic("pareto", {{"p", 2}});
    auto rep = check_sandwich({f}, {power_weight(2.0)});
    REQUIRE(rep.assertions.size() == 1);
    CHECK(rep.status == CheckStatus::pass);
    CHECK(rep.assertions[0].measured == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(rep.assertions[0].upper == doctest::Approx(2.0 * 1.001));
}

TEST_CASE("sandwich passes when both norms diverge and flags a finite-gamma blow-up")
{
    auto heavy = FunctionSpec::analytic("pareto", {{"p", 1.5}});
    auto rep = check_sandwich({heavy}, {power_weight(4.0)});
    CHECK(rep.status == CheckStatus::pass);
    CHECK(rep.assertions[0].note.find("both sides infinite") != std::string::npos);
}

TEST_CASE("default sandwich matrix covers every pair and passes")
{
    auto rep = run_check("sandwich", GridConfig{}, 11);
    CHECK(rep.assertions.size() == 30);
    CHECK(rep.status == CheckStatus::pass);
}

TEST_CASE("exactness: Marcinkiewicz norm of 1/w equals gamma = p/(p-1) for power weights")
{
    for (double p : {1.5, 2.0, 4.0}) {
        auto rep = check_exactness(power_weight(p));
        CHECK(rep.status == CheckStatus::pass);
        const Assertion* a = find(rep, "", "marcinkiewicz/gamma");
        REQUIRE(a != nullptr);
        CHECK(a->measured == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("heavy tails: the measured constant doubles with K")
{
    auto rep = check_heavy_tail_equivalence(3.0, 0.5, 2.0);
    CHECK(rep.status == CheckStatus::pass);
    int ratios = 0;
    for (const auto& a : rep.assertions)
        if (a.quantity == "sup(2K)/sup(K)") {
            ++ratios;
            CHECK(a.measured == doctest::Approx(2.0).epsilon(0.05));
        }
    CHECK(ratios == 2);
    CHECK_THROWS_AS(check_heavy_tail_equivalence(1.0, 0.0), Error);
}

TEST_CASE("light tails: weak norm 1, Marcinkiewicz norm infinite")
{
    auto rep = check_light_tail(3.0, 0.5);
    CHECK(rep.status == CheckStatus::pass);
    REQUIRE(rep.assertions.size() == 2);
    CHECK(rep.assertions[0].measured == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.assertions[1].measured >= 3.0);
}

TEST_CASE("weak-Orlicz against Luxemburg on Gaussians")
{
    std::vector<FunctionSpec> fs = {FunctionSpec::analytic("gaussian", {{"sigma", 1}})};
    auto rep = check_weak_orlicz_equiv(eof_power(2.0), fs);
    CHECK(rep.status == CheckStatus::pass);
    const Assertion* a = find(rep, "gaussian", "luxemburg/weak");
    REQUIRE(a != nullptr);
    // T = exp(-t^2): weak-Orlicz norm 1, Luxemburg modular 1/(c^2 - 1) = 1 at c = sqrt 2.
    CHECK(a->measured == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("wM membership and modulars of a bounded function")
{
    auto rep = check_wm_subspace(eof_power(2.0), {}, {FunctionSpec::analytic("gaussian", {{"sigma", 1}})});
    CHECK(rep.status == CheckStatus::pass);
    for (double k : {1.0, 2.0, 4.0, 8.0}) {
        std::string q = "log modular of Phi(" + std::to_string(static_cast<int>(k)) + " f*)";
        const Assertion* a = find(rep, "indicator", q);
        REQUIRE(a != nullptr);
        // height-1 indicator on half the unit interval: modular = (e^{k^2} - 1) / 2
        CHECK(a->measured == doctest::Approx(std::log(0.5 * std::expm1(k * k))).epsilon(1e-8));
    }
    const Assertion* g = find(rep, "gaussian", "in_wM");
    REQUIRE(g != nullptr);
    CHECK(g->measured == 0.0);
}

TEST_CASE("ACN failure: truncation does not change the Marcinkiewicz norm")
{
    auto rep = check_acn_failure(3.0);
    CHECK(rep.status == CheckStatus::pass);
    for (const auto& a : rep.assertions)
        if (a.quantity.rfind("sup_t", 0) == 0)
            CHECK(a.measured == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("moment embedding: closed-form moments of the pure power tail")
{
    auto rep = check_embedding_41(2.0, 0.0, 0.0);
    CHECK(rep.status == CheckStatus::pass);
    int oracle_rows = 0;
    for (const auto& a : rep.assertions)
        if (a.quantity.find("1 + p/(p0-p)") != std::string::npos)
            ++oracle_rows;
    CHECK(oracle_rows == 13);
}

TEST_CASE("Chebyshev envelope exponent tracks Delta + 1")
{
    for (double delta : {0.0, 0.5, 1.0}) {
        auto rep = check_embedding_42(2.5, delta, 0.0);
        CHECK_MESSAGE(rep.status == CheckStatus::pass, "delta=" << delta);
    }
}

TEST_CASE("sharpness ladder reports an honest failure at p0 - 0.01")
{
    auto rep = check_sharpness_43(2.0, 0.0, 0.0);
    CHECK(rep.status == CheckStatus::fail);
    const Assertion* a = find(rep, "", "at p=1.99");
    REQUIRE(a != nullptr);
    CHECK(a->status == CheckStatus::fail);
    const Assertion* lim = find(rep, "", "limit of the ratio");
    REQUIRE(lim != nullptr);
    CHECK(lim->measured == doctest::Approx(std::sqrt(2.0)));
    // the ladder approaches the limit from above
    CHECK(a->measured > lim->measured);
    CHECK(a->measured - lim->measured < 0.05);
}

TEST_CASE("run_check knows every id and rejects others")
{
    CHECK(check_ids().size() == 10);
    CHECK_THROWS_AS(run_check("nope", GridConfig{}, 1), Error);
}
