#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tailnorm/job.hpp"

using namespace tailnorm;

namespace {

std::filesystem::path scratch_dir()
{
    auto dir = std::filesystem::temp_directory_path() / "tailnorm_test_job";
    std::filesystem::create_directories(dir);
    return dir;
}

void expect_error_at(const std::string& text, int line, int column, const std::string& fragment)
{
    try {
        parse_config(text);
        FAIL("no error for: " << text);
    } catch (const ConfigError& e) {
        CHECK(e.line() == line);
        CHECK(e.column() == column);
        std::string what = e.what();
        CHECK_MESSAGE(what.find(fragment) != std::string::npos, what);
    }
}

}  // namespace

TEST_CASE("a Pareto job with a power weight resolves")
{
    JobConfig cfg = parse_config("command = norm\nkind = weak\nfunction = analytic:pareto p=2\nweight = power p=2\n");
    REQUIRE(cfg.function.has_value());
    REQUIRE(cfg.weight.has_value());
    CHECK(cfg.command == "norm");
    CHECK(cfg.weight->params().at("p") == 2.0);
    CHECK(cfg.warnings.empty());
}

TEST_CASE("comments, blank lines and CRLF are ignored")
{
    JobConfig cfg = parse_config("# job\r\n\r\ncommand = gamma   # trailing\r\nweight = log p=2 kappa=1 mass=0.5\r\n");
    REQUIRE(cfg.weight.has_value());
    CHECK(cfg.weight->mass() == 0.5);
}

TEST_CASE("parse errors carry line and column")
{
    expect_error_at("command = norm\nfunction analytic:pareto p=2\n", 2, 1, "expected 'key = value'");
    expect_error_at("command = norm\ncommand = gamma\n", 2, 1, "duplicate key 'command' (first set on line 1)");
    expect_error_at("colour = red\n", 1, 1, "unknown key");
    expect_error_at("command = norm\nfunction = analytic:nosuch p=2\n", 2, 12, "nosuch");
    // the bad token starts at column 28
    expect_error_at("command = norm\nfunction = analytic:pareto p:2\n", 2, 28, "expected key=value");
    expect_error_at("command = norm\nfunction = analytic:pareto p=two\n", 2, 30, "not a number");
    expect_error_at("command = gamma\nweight = power p=0.5\n", 2, 18, "p must exceed 1");
    expect_error_at("seed = -4\n", 1, 8, "seed");
    expect_error_at("check = sandwich,nope\n", 1, 18, "unknown check id 'nope'");
}

TEST_CASE("a weight with p <= 1 is only a warning outside gamma jobs")
{
    JobConfig cfg = parse_config("command = norm\nkind = weak\nfunction = analytic:pareto p=2\nweight = power p=0.5\n");
    REQUIRE(cfg.warnings.size() == 1);
    CHECK(cfg.warnings.front().find("p must exceed 1") != std::string::npos);
}

TEST_CASE("missing inputs are usage errors at run time")
{
    CHECK_THROWS_AS(run_job(parse_config("command = norm\nkind = weak\nfunction = analytic:pareto p=2\n")), ConfigError);
    CHECK_THROWS_AS(run_job(parse_config("command = norm\nkind = lp\nfunction = analytic:pareto p=2\n")), ConfigError);
    CHECK_THROWS_AS(run_job(parse_config("command = embed\npsi = degenerate r=2\n")), ConfigError);
    CHECK_THROWS_AS(run_job(parse_config("function = analytic:pareto p=2\n")), ConfigError);
    // without a command the descriptors still resolve
    JobConfig cfg = parse_config("function = analytic:exponential scale=1\n");
    CHECK(cfg.function.has_value());
}

TEST_CASE("sample files: header row, weights and errors")
{
    auto dir = scratch_dir();
    {
        std::ofstream(dir / "plain.csv") << "3\n1\n2\n";
        std::ofstream(dir / "header.csv") << "magnitude,weight\n3,0.5\n1,0.25\n2,0.25\n";
        std::ofstream(dir / "bad.csv") << "1\nx\n";
    }
    JobConfig cfg = parse_config("function = sample:plain.csv\n", dir.string());
    const Empirical* e = cfg.function->empirical_data();
    REQUIRE(e != nullptr);
    CHECK(e->magnitudes.size() == 3);
    CHECK(tail_of(*cfg.function)(2.0) == doctest::Approx(2.0 / 3.0));

    FunctionSpec h = load_sample((dir / "header.csv").string());
    CHECK(tail_of(h)(3.0) == doctest::Approx(0.5));
    CHECK(tail_of(h)(2.0) == doctest::Approx(0.75));
    CHECK_THROWS_AS(load_sample((dir / "bad.csv").string()), Error);
    CHECK_THROWS_AS(load_sample((dir / "missing.csv").string()), Error);
}

TEST_CASE("number formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, 2.0, 1e-300, 6.02214076e23}) {
        std::string s = format_number(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_number(kInf) == "inf");
    CHECK(format_number(-kInf) == "-inf");
    CHECK(format_number(kNaN) == "nan");
}

TEST_CASE("norm job on the log function with its natural weight gives 1")
{
    JobConfig cfg = parse_config("command = norm\nkind = weak\nfunction = analytic:log_power m=1\nweight = natural\n");
    JobOutput out = run_job(cfg);
    CHECK(out.exit_code == exit_success);
    CHECK(out.csv.find("\nweak,,log_power m=1,natural mass=1,finite,1,") != std::string::npos);
}

TEST_CASE("gamma job: w_2 gives 2")
{
    JobOutput out = run_job(parse_config("command = gamma\nweight = power p=2\n"));
    CHECK(out.exit_code == exit_success);
    auto pos = out.csv.find("\npower p=2 mass=1,finite,");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(out.csv.substr(pos + 25)) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("verify job: default sandwich matrix gives 30 rows and exit 0")
{
    JobOutput out = run_job(parse_config("command = verify\ncheck = sandwich\n"));
    CHECK(out.exit_code == exit_success);
    int rows = 0;
    std::istringstream in(out.csv);
    std::string line;
    while (std::getline(in, line))
        rows += !line.empty() && line[0] != '#';
    CHECK(rows == 31);  // header plus one row per pair
}

TEST_CASE("verify job exit code reflects a failing check")
{
    JobOutput out = run_job(parse_config("command = verify\ncheck = sharpness_43\n"));
    CHECK(out.exit_code == exit_check_failure);
    CHECK(out.summary.find("sharpness_43: fail") != std::string::npos);
}

TEST_CASE("output is byte-identical across runs and records its provenance")
{
    const std::string text = "command = tail\nfunction = pareto_sample p=2 n=2000\nrows = 40\nseed = 99\n";
    JobOutput a = run_job(parse_config(text));
    JobOutput b = run_job(parse_config(text));
    CHECK(a.csv == b.csv);
    CHECK(a.csv.find("# seed: 99\n") != std::string::npos);
    CHECK(a.csv.find("# grid: points=") != std::string::npos);
    CHECK(a.csv.find("# TAILNORM_GRID_SCALE: ") != std::string::npos);
    JobOutput c = run_job(parse_config("command = tail\nfunction = pareto_sample p=2 n=2000\nrows = 40\nseed = 100\n"));
    CHECK(c.csv != a.csv);
}

TEST_CASE("tail tables agree with direct evaluation")
{
    JobConfig cfg = parse_config("command = tail\nfunction = analytic:exponential scale=1\nrows = 9\n");
    JobOutput out = run_job(cfg);
    std::istringstream in(out.csv);
    std::string line;
    int checked = 0;
    bool first_table = false;
    while (std::getline(in, line)) {
        if (line == "x,T(x),f*(x)") {
            first_table = true;
            continue;
        }
        if (line.rfind("#", 0) == 0) {
            first_table = false;
            continue;
        }
        if (!first_table)
            continue;
        double x, T, fs;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &T, &fs) == 3);
        CHECK(T == doctest::Approx(std::exp(-x)).epsilon(1e-12));
        if (x < 1.0)
            CHECK(fs == doctest::Approx(-std::log(x)).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked == 9);
}

TEST_CASE("embed job reproduces the closed-form moments of the pure power tail")
{
    JobOutput out = run_job(parse_config("command = embed\npsi = p0_delta_s p0=2 delta=0\nsteps = 5\n"));
    CHECK(out.exit_code == exit_success);
    std::istringstream in(out.csv);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        double p, eps, lp;
        char verdict[32];
        if (std::sscanf(line.c_str(), "%lf,%lf,%31[^,],%lf", &p, &eps, verdict, &lp) != 4)
            continue;
        // |f|_p^p = 1 + p/(2-p)
        CHECK(std::pow(lp, p) == doctest::Approx(1.0 + p / (2.0 - p)).epsilon(1e-6));
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("tail job f** column matches the greedy top-weight oracle")
{
    JobConfig cfg = parse_config("command = tail\nfunction = pareto_sample p=3 n=500\nrows = 25\nseed = 5\n");
    JobOutput out = run_job(cfg);
    std::istringstream in(out.csv);
    std::string line;
    bool second_table = false;
    int checked = 0;
    while (std::getline(in, line)) {
        if (line == "x,f**(x)") {
            second_table = true;
            continue;
        }
        if (!second_table || line.empty() || line[0] == '#')
            continue;
        double x, v;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &x, &v) == 2);
        // beyond the mass f** decays like (integral of f*) / x
        double expected = x <= 1.0 ? double_star_oracle(*cfg.function, x) : double_star_oracle(*cfg.function, 1.0) / x;
        CHECK(v == doctest::Approx(expected).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked == 25);
}
