#include "tailnorm/job.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tailnorm {

namespace {

// Descriptor parse failure at a character offset inside the value.
struct DescriptorError {
    std::size_t offset;
    std::string message;
};

struct Token {
    std::string text;
    std::size_t offset;
};

struct Descriptor {
    Token head;
    std::map<std::string, std::pair<double, std::size_t>> params;
    std::map<std::string, std::pair<std::string, std::size_t>> raw;
};

std::vector<Token> split_ws(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])))
            ++j;
        if (j > i)
            out.push_back({std::string(s.substr(i, j - i)), i});
        i = j;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

// "head k=v k=v"; values that do not parse as numbers are kept only in `raw`.
Descriptor parse_descriptor(std::string_view text)
{
    auto tokens = split_ws(text);
    if (tokens.empty())
        throw DescriptorError{0, "empty descriptor"};
    Descriptor d{tokens.front(), {}, {}};
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        auto eq = t.text.find('=');
        if (eq == std::string::npos || eq == 0)
            throw DescriptorError{t.offset, "expected key=value, got '" + t.text + "'"};
        std::string key = t.text.substr(0, eq);
        std::string value = t.text.substr(eq + 1);
        if (d.raw.count(key))
            throw DescriptorError{t.offset, "duplicate parameter '" + key + "'"};
        d.raw[key] = {value, t.offset + eq + 1};
        if (auto v = parse_double(value))
            d.params[key] = {*v, t.offset + eq + 1};
    }
    return d;
}

Params numeric_params(const Descriptor& d, const std::set<std::string>& allowed)
{
    Params out;
    for (const auto& [key, entry] : d.raw) {
        if (!allowed.empty() && !allowed.count(key))
            throw DescriptorError{entry.second - key.size() - 1, "unknown parameter '" + key + "' for '" + d.head.text + "'"};
        auto it = d.params.find(key);
        if (it == d.params.end())
            throw DescriptorError{entry.second, "parameter '" + key + "' is not a number"};
        out[key] = it->second.first;
    }
    return out;
}

void reject_params(const Descriptor& d)
{
    if (!d.raw.empty()) {
        const auto& [key, entry] = *d.raw.begin();
        throw DescriptorError{entry.second - key.size() - 1, "'" + d.head.text + "' takes no parameters"};
    }
}

double param_or(const Params& p, const std::string& key, double fallback)
{
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

double require(const Params& p, const Descriptor& d, const std::string& key)
{
    auto it = p.find(key);
    if (it == p.end())
        throw DescriptorError{d.head.offset + d.head.text.size(), "'" + d.head.text + "' needs " + key + "="};
    return it->second;
}

// Library errors carry no position; attribute them to the descriptor head.
template <class F>
auto at_head(const Descriptor& d, F&& f)
{
    try {
        return f();
    } catch (const DescriptorError&) {
        throw;
    } catch (const Error& e) {
        throw DescriptorError{d.head.offset, e.what()};
    }
}

FunctionSpec function_from(const Descriptor& d, const std::string& base_dir, std::uint64_t seed)
{
    const std::string& head = d.head.text;
    if (head.rfind("analytic:", 0) == 0) {
        std::string family = head.substr(9);
        Params params = numeric_params(d, {});
        return at_head(d, [&] { return FunctionSpec::analytic(family, params); });
    }
    if (head.rfind("sample:", 0) == 0) {
        std::filesystem::path path = head.substr(7);
        if (path.empty())
            throw DescriptorError{d.head.offset, "sample descriptor needs a path"};
        if (path.is_relative())
            path = std::filesystem::path(base_dir) / path;
        Params params = numeric_params(d, {"mass"});
        double mass = param_or(params, "mass", 1.0);
        return at_head(d, [&] { return load_sample(path.string(), mass); });
    }
    if (head == "pareto_sample") {
        Params params = numeric_params(d, {"p", "n", "seed"});
        double p = require(params, d, "p");
        double n = require(params, d, "n");
        if (!(n >= 1.0) || n != std::floor(n) || n > 1e9)
            throw DescriptorError{d.params.at("n").second, "n must be a positive integer"};
        auto s = static_cast<std::uint64_t>(param_or(params, "seed", static_cast<double>(seed)));
        return at_head(d, [&] { return FunctionSpec::pareto_sample(p, static_cast<std::size_t>(n), s); });
    }
    throw DescriptorError{d.head.offset, "unknown function source '" + head +
                                             "' (expected analytic:<family>, sample:<path> or pareto_sample)"};
}

Weight weight_from(const Descriptor& d, const FunctionSpec* function)
{
    const std::string& head = d.head.text;
    if (head == "power") {
        Params params = numeric_params(d, {"p", "mass"});
        double p = require(params, d, "p");
        return at_head(d, [&] { return power_weight(p, param_or(params, "mass", 1.0)); });
    }
    if (head == "log") {
        Params params = numeric_params(d, {"p", "kappa", "mass"});
        double p = require(params, d, "p");
        double kappa = param_or(params, "kappa", 1.0);
        return at_head(d, [&] { return log_weight(p, SlowlyVarying::log_power(kappa), param_or(params, "mass", 1.0)); });
    }
    if (head == "natural") {
        reject_params(d);
        if (!function)
            throw DescriptorError{d.head.offset, "the natural weight needs a function"};
        return at_head(d, [&] { return natural_weight(*function); });
    }
    throw DescriptorError{d.head.offset, "unknown weight family '" + head + "' (expected power, log or natural)"};
}

YoungFunction young_from(const Descriptor& d)
{
    const std::string& head = d.head.text;
    if (head == "power") {
        Params params = numeric_params(d, {"q"});
        double q = require(params, d, "q");
        return at_head(d, [&] { return power_young(q); });
    }
    if (head == "exp_power") {
        Params params = numeric_params(d, {"q"});
        double q = require(params, d, "q");
        return at_head(d, [&] {
            ExponentialYoung n = eof_power(q);
            ValidationReport rep = validate_eof(n);
            if (!rep.valid)
                throw Error("exp_power q=" + format_number(q) + " is not an exponential Young function: " +
                            rep.violations.front());
            return n.as_young();
        });
    }
    if (head == "exp_square_log") {
        reject_params(d);
        return eof_square_log().as_young();
    }
    if (head == "phi") {
        Params params = numeric_params(d, {"p0", "delta", "s_kappa"});
        double p0 = require(params, d, "p0");
        return at_head(d, [&] {
            return phi_p0_delta_s(p0, param_or(params, "delta", 0.0),
                                  SlowlyVarying::log_power_infinity(param_or(params, "s_kappa", 0.0)));
        });
    }
    throw DescriptorError{d.head.offset,
                          "unknown Young family '" + head + "' (expected power, exp_power, exp_square_log or phi)"};
}

PsiFunction psi_from(const Descriptor& d)
{
    Params params = numeric_params(d, {});
    return at_head(d, [&] { return make_psi(d.head.text, params); });
}

template <class F>
auto without_position(const std::string& descriptor, F&& f)
{
    try {
        return f(parse_descriptor(descriptor));
    } catch (const DescriptorError& e) {
        throw Error(e.message);
    }
}

// Positions recorded per key so that resolution errors point at the config line.
struct Origin {
    int line = 0;
    int column = 0;
};

[[noreturn]] void fail_at(const Origin& o, std::size_t offset, const std::string& message)
{
    throw ConfigError(o.line, o.line > 0 ? o.column + static_cast<int>(offset) : 0, message);
}

const std::set<std::string> kCommands = {"norm", "gamma", "tail", "verify", "embed"};
const std::set<std::string> kWeightKinds = {"weak", "weak_dual", "marcinkiewicz", "lorentz"};
const std::set<std::string> kYoungKinds = {"weak_orlicz", "weak_orlicz_rho", "luxemburg", "modular", "in_wm"};

// ---------------------------------------------------------------------------
// CSV emission

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch == '\n' ? ' ' : ch;
    }
    return out + "\"";
}

class CsvWriter {
public:
    void comment(const std::string& line) { os_ << "# " << line << '\n'; }
    void header(const std::vector<std::string>& columns) { row(columns); }
    void row(const std::vector<std::string>& fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i)
            os_ << (i ? "," : "") << csv_field(fields[i]);
        os_ << '\n';
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

void provenance(CsvWriter& out, const JobConfig& cfg)
{
    out.comment("tailnorm " + cfg.command);
    out.comment("seed: " + std::to_string(cfg.seed));
    const GridConfig& g = cfg.grid;
    out.comment("grid: points=" + std::to_string(g.points) + " levels=" + std::to_string(g.levels) +
                " divergence_factor=" + format_number(g.divergence_factor) + " grid_scale=" +
                format_number(g.grid_scale) + " min_log_distance=" + format_number(g.min_log_distance));
    const char* env = std::getenv("TAILNORM_GRID_SCALE");
    out.comment(std::string("TAILNORM_GRID_SCALE: ") + (env ? env : "unset"));
    if (!cfg.function_desc.empty())
        out.comment("function: " + cfg.function_desc);
    else if (cfg.function)
        out.comment("function: " + cfg.function->description() + " (matching the psi)");
    if (!cfg.weight_desc.empty())
        out.comment("weight: " + cfg.weight_desc);
    if (!cfg.young_desc.empty())
        out.comment("young: " + cfg.young_desc);
    if (!cfg.psi_desc.empty())
        out.comment("psi: " + cfg.psi_desc);
    for (const auto& w : cfg.warnings)
        out.comment("warning: " + w);
}

std::string join_growth(const std::vector<double>& g)
{
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i)
        s += (i ? ";" : "") + format_number(g[i]);
    return s;
}

int exit_for(const NormResult& r)
{
    return r.verdict == Verdict::indeterminate ? exit_indeterminate : exit_success;
}

// ---------------------------------------------------------------------------
// Subcommands

const char* kind_formula(const std::string& kind)
{
    if (kind == "weak")
        return "sup_t w(t) f*(t); cross_check = sup_t t w(T(t))";
    if (kind == "weak_dual")
        return "sup_t t w(T(t))";
    if (kind == "marcinkiewicz")
        return "sup_t w(t) f**(t)";
    if (kind == "lp")
        return "(p int_0^inf t^(p-1) T(t) dt)^(1/p); cross_check = (int (f*)^p)^(1/p)";
    if (kind == "lorentz")
        return "(int (f*)^p w dt)^(1/p)";
    if (kind == "weak_orlicz")
        return "inf{c > 0 : sup_t Phi(t/c) T(t) <= 1}";
    if (kind == "weak_orlicz_rho")
        return "sup_t Phi(t) T(t)";
    if (kind == "luxemburg")
        return "inf{c > 0 : int Phi(f*/c) <= 1}";
    if (kind == "modular")
        return "int_0^mass Phi(f*(s)/c) ds";
    if (kind == "in_wm")
        return "1 if sup_t Phi(t/c) T(t) < inf for c = 2^-k, k = 0..10, else 0";
    if (kind == "gls")
        return "sup_p |f|_p / psi(p)";
    return "";
}

JobOutput run_norm(const JobConfig& cfg)
{
    CsvWriter out;
    provenance(out, cfg);
    out.comment("column value: " + std::string(kind_formula(cfg.kind)));
    out.header({"kind", "parameter", "function", "generator", "verdict", "value", "error", "log_value",
                "cross_check", "argmax", "threshold", "growth", "reason"});
    const FunctionSpec& f = *cfg.function;
    std::string generator;
    std::string parameter;
    NormResult r;
    JobOutput job;
    if (cfg.kind == "weak") {
        WeakNormOptions opts;
        opts.min_s = empirical_weak_floor(f);
        r = weak_norm(f, *cfg.weight, cfg.grid, opts);
    } else if (cfg.kind == "weak_dual") {
        r = weak_norm_dual(f, *cfg.weight, cfg.grid);
    } else if (cfg.kind == "marcinkiewicz") {
        r = marcinkiewicz_norm(f, *cfg.weight, cfg.grid);
    } else if (cfg.kind == "lorentz") {
        parameter = "p=" + format_number(cfg.p);
        r = lorentz_integral_norm(f, *cfg.weight, cfg.p);
    } else if (cfg.kind == "lp") {
        parameter = "p=" + format_number(cfg.p);
        r = lp_norm(f, cfg.p);
    } else if (cfg.kind == "weak_orlicz") {
        r = weak_orlicz_norm(f, *cfg.young, cfg.grid);
    } else if (cfg.kind == "weak_orlicz_rho") {
        r = weak_orlicz_rho(f, *cfg.young, cfg.grid);
    } else if (cfg.kind == "luxemburg") {
        r = luxemburg_norm(f, *cfg.young);
    } else if (cfg.kind == "modular") {
        parameter = "c=" + format_number(cfg.c);
        r = orlicz_modular(f, *cfg.young, cfg.c);
    } else if (cfg.kind == "gls") {
        r = gls_norm(f, *cfg.psi, cfg.grid);
    }
    if (cfg.weight)
        generator = cfg.weight->describe();
    else if (cfg.young)
        generator = cfg.young->describe();
    else if (cfg.psi)
        generator = cfg.psi->describe();

    if (cfg.kind == "in_wm") {
        MembershipResult m = in_wM(f, *cfg.young, cfg.grid);
        std::string reason = m.reason;
        if (!std::isnan(m.failing_c))
            reason += "; failing c = " + format_number(m.failing_c);
        out.row({"in_wm", "", f.description(), generator, to_string(m.verdict),
                 m.verdict == Verdict::finite ? (m.member ? "1" : "0") : "nan", "", "", "", "", "", "", reason});
        for (std::size_t i = 0; i < m.sups.size() && i < m.ladder.size(); ++i) {
            const NormResult& s = m.sups[i];
            out.row({"weak_orlicz_feasibility", "c=" + format_number(m.ladder[i]), f.description(), generator,
                     to_string(s.verdict), format_number(s.value), format_number(s.error),
                     format_number(s.log_value), format_number(s.cross_check), format_number(s.argmax),
                     format_number(s.threshold), join_growth(s.growth), s.reason});
        }
        job.exit_code = m.verdict == Verdict::finite ? exit_success : exit_indeterminate;
        job.summary = "in_wm: " + std::string(m.verdict == Verdict::finite ? (m.member ? "member" : "not a member")
                                                                            : "indeterminate") +
                      "\n";
        job.csv = out.str();
        return job;
    }

    out.row({cfg.kind, parameter, f.description(), generator, to_string(r.verdict), format_number(r.value),
             format_number(r.error), format_number(r.log_value), format_number(r.cross_check),
             format_number(r.argmax), format_number(r.threshold), join_growth(r.growth), r.reason});
    job.exit_code = exit_for(r);
    job.summary = cfg.kind + ": " + to_string(r.verdict) + (r.is_finite() ? " " + format_number(r.value) : "") + "\n";
    job.csv = out.str();
    return job;
}

JobOutput run_gamma(const JobConfig& cfg)
{
    CsvWriter out;
    provenance(out, cfg);
    out.comment("column value: gamma(w) = sup_t (w(t)/t) int_0^t ds/w(s)");
    out.header({"weight", "verdict", "value", "error", "argmax", "threshold", "growth", "reason"});
    NormResult r = gamma(*cfg.weight, cfg.grid);
    out.row({cfg.weight->describe(), to_string(r.verdict), format_number(r.value), format_number(r.error),
             format_number(r.argmax), format_number(r.threshold), join_growth(r.growth), r.reason});
    JobOutput job{exit_for(r), out.str(),
                  "gamma: " + std::string(to_string(r.verdict)) + (r.is_finite() ? " " + format_number(r.value) : "") +
                      "\n"};
    return job;
}

JobOutput run_tail(const JobConfig& cfg)
{
    const FunctionSpec& f = *cfg.function;
    TailFunction T = tail_of(f);
    Rearrangement r(f);
    double mass = r.mass();
    if (!std::isfinite(mass))
        throw Error("tail tables need a finite-mass space");

    // One abscissa grid, log-spaced, covering both the level range of T and the measure range of f*.
    double lo = mass, hi = mass;
    if (const Empirical* e = f.empirical_data()) {
        double min_mag = kInf, max_mag = 0.0, min_w = kInf;
        for (std::size_t i = 0; i < e->magnitudes.size(); ++i) {
            if (e->magnitudes[i] > 0.0) {
                min_mag = std::min(min_mag, e->magnitudes[i]);
                max_mag = std::max(max_mag, e->magnitudes[i]);
            }
            if (e->weights[i] > 0.0)
                min_w = std::min(min_w, e->weights[i]);
        }
        if (max_mag > 0.0) {
            lo = std::min({lo, min_mag, min_w});
            hi = std::max(hi, max_mag);
        } else {
            lo = std::min(lo, min_w);
        }
    } else {
        lo = mass * 1e-6;
        double top = r(lo);
        hi = std::max(mass, std::isfinite(top) ? top : mass);
        lo = std::min(lo, std::max(r(mass * (1.0 - 1e-9)), 1e-300));
    }
    const int n = std::max(2, cfg.rows);
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));

    CsvWriter out;
    provenance(out, cfg);
    out.comment("table: tail and rearrangement on a shared abscissa x");
    out.comment("column T(x): mu{|f| >= x}");
    out.comment("column f*(x): inf{t : T(t) <= x}, zero for x >= mass");
    out.header({"x", "T(x)", "f*(x)"});
    for (double x : grid)
        out.row({format_number(x), format_number(T(x)), format_number(x < mass ? r(x) : 0.0)});
    out.comment("table: averaged rearrangement");
    out.comment("column f**(x): (1/x) int_0^x f*(s) ds");
    out.header({"x", "f**(x)"});
    int exit = exit_success;
    // One cumulative integral serves every row; beyond the mass f* is zero.
    AveragedRearrangement fss(r);
    const NormResult& status = fss.status();
    if (status.verdict == Verdict::indeterminate)
        exit = exit_indeterminate;
    for (double x : grid) {
        std::string v = status.is_diverges() ? "inf" : "nan";
        if (status.is_finite())
            v = format_number(x <= mass ? fss(x) : fss(mass) * mass / x);
        out.row({format_number(x), v});
    }
    return {exit, out.str(), "tail: " + std::to_string(n) + " rows per table\n"};
}

JobOutput run_verify(const JobConfig& cfg)
{
    std::vector<std::string> ids = cfg.checks;
    if (ids.empty() || (ids.size() == 1 && ids.front() == "all"))
        ids = check_ids();
    CsvWriter out;
    provenance(out, cfg);
    out.comment("checks: " + [&] {
        std::string s;
        for (const auto& id : ids)
            s += (s.empty() ? "" : ",") + id;
        return s;
    }());
    out.comment("column measured must lie in [lower, upper]; status per assertion");
    out.header({"check_id", "status", "input", "quantity", "measured", "lower", "upper", "note"});
    std::ostringstream summary;
    CheckStatus overall = CheckStatus::pass;
    for (const auto& id : ids) {
        CheckReport rep = run_check(id, cfg.grid, cfg.seed);
        int failed = 0, indeterminate = 0;
        for (const Assertion& a : rep.assertions) {
            out.row({rep.check_id, to_string(a.status), a.input, a.quantity, format_number(a.measured),
                     format_number(a.lower), format_number(a.upper), a.note});
            failed += a.status == CheckStatus::fail;
            indeterminate += a.status == CheckStatus::indeterminate;
        }
        summary << id << ": " << to_string(rep.status) << " (" << rep.assertions.size() << " assertions, " << failed
                << " failed, " << indeterminate << " indeterminate)\n";
        for (const Assertion& a : rep.assertions)
            if (a.status == CheckStatus::fail)
                summary << "  fail: " << a.input << " | " << a.quantity << " = " << format_number(a.measured)
                        << " outside [" << format_number(a.lower) << ", " << format_number(a.upper) << "]\n";
        if (rep.status == CheckStatus::fail || (rep.status == CheckStatus::indeterminate && overall == CheckStatus::pass))
            overall = rep.status;
    }
    summary << "overall: " << to_string(overall) << "\n";
    int exit = overall == CheckStatus::pass ? exit_success
               : overall == CheckStatus::fail ? exit_check_failure
                                              : exit_indeterminate;
    return {exit, out.str(), summary.str()};
}

JobOutput run_embed(const JobConfig& cfg)
{
    const PsiFunction& psi = *cfg.psi;
    if (psi.degenerate())
        throw Error("embed needs a psi with an open support");
    const FunctionSpec& f = *cfg.function;
    const double b = psi.upper();
    const double delta = param_or(psi.params(), "delta", 0.0);
    const double gamma_factor = std::tgamma(1.0 + delta);
    CsvWriter out;
    provenance(out, cfg);
    out.comment("column |f|_p: (p int t^(p-1) T(t) dt)^(1/p)");
    out.comment("column ratio: |f|_p / psi(p)");
    out.comment("column gamma_ratio: |f|_p / (Gamma(1+delta) psi(p)), delta from psi (0 when absent)");
    out.header({"p", "b-p", "verdict", "|f|_p", "cross_check", "psi(p)", "ratio", "gamma_ratio"});
    int exit = exit_success;
    const int n = std::max(2, cfg.steps);
    double lo = kInf, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        double eps = cfg.eps_max * std::pow(cfg.eps_min / cfg.eps_max, static_cast<double>(i) / (n - 1));
        double p = b - eps;
        if (!(p > psi.lower()))
            continue;
        NormResult r = lp_norm(f, p);
        if (r.verdict == Verdict::indeterminate)
            exit = exit_indeterminate;
        double ps = psi(p);
        double ratio = r.is_finite() ? r.value / ps : (r.is_diverges() ? kInf : kNaN);
        if (r.is_finite()) {
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        out.row({format_number(p), format_number(eps), to_string(r.verdict), format_number(r.value),
                 format_number(r.cross_check), format_number(ps), format_number(ratio),
                 format_number(ratio / gamma_factor)});
    }
    std::string summary = "embed: ratio envelope [" + format_number(lo) + ", " + format_number(hi) + "]\n";
    return {exit, out.str(), summary};
}

}  // namespace

// ---------------------------------------------------------------------------

ConfigError::ConfigError(int line, int column, const std::string& message)
    : Error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message
                     : message),
      line_(line),
      column_(column)
{
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

FunctionSpec load_sample(const std::string& path, double mass)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open sample file '" + path + "'");
    std::vector<double> magnitudes, weights;
    std::string line;
    int lineno = 0;
    bool any_weight = false, first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        auto m = parse_double(trim(cells.at(0)));
        if (!m) {
            if (first) {
                first = false;
                continue;  // single header row
            }
            throw Error(path + ":" + std::to_string(lineno) + ": magnitude '" + trim(cells[0]) + "' is not a number");
        }
        first = false;
        magnitudes.push_back(std::abs(*m));
        if (cells.size() >= 2 && !trim(cells[1]).empty()) {
            auto w = parse_double(trim(cells[1]));
            if (!w || !(*w >= 0.0))
                throw Error(path + ":" + std::to_string(lineno) + ": weight '" + trim(cells[1]) +
                            "' is not a nonnegative number");
            weights.push_back(*w);
            any_weight = true;
        } else {
            weights.push_back(kNaN);
        }
    }
    if (magnitudes.empty())
        throw Error("sample file '" + path + "' has no rows");
    if (!any_weight)
        return FunctionSpec::empirical(std::move(magnitudes), {}, mass);
    if (std::any_of(weights.begin(), weights.end(), [](double w) { return std::isnan(w); }))
        throw Error("sample file '" + path + "': either every row or no row carries a weight");
    return FunctionSpec::empirical(std::move(magnitudes), std::move(weights), mass);
}

FunctionSpec parse_function(const std::string& descriptor, const std::string& base_dir, std::uint64_t seed)
{
    return without_position(descriptor, [&](const Descriptor& d) { return function_from(d, base_dir, seed); });
}

Weight parse_weight(const std::string& descriptor, const FunctionSpec* function)
{
    return without_position(descriptor, [&](const Descriptor& d) { return weight_from(d, function); });
}

YoungFunction parse_young(const std::string& descriptor)
{
    return without_position(descriptor, [&](const Descriptor& d) { return young_from(d); });
}

PsiFunction parse_psi(const std::string& descriptor)
{
    return without_position(descriptor, [&](const Descriptor& d) { return psi_from(d); });
}

void apply_setting(JobConfig& cfg, const std::string& key, const std::string& value, int line, int column)
{
    Origin o{line, column};
    cfg.origins[key] = {line, column};
    auto number = [&]() {
        auto v = parse_double(value);
        if (!v)
            fail_at(o, 0, "'" + key + "' needs a number, got '" + value + "'");
        return *v;
    };
    auto integer = [&](double lo, double hi) {
        double v = number();
        if (v != std::floor(v) || v < lo || v > hi)
            fail_at(o, 0, "'" + key + "' needs an integer in [" + format_number(lo) + ", " + format_number(hi) + "]");
        return v;
    };
    if (key == "command") {
        if (!kCommands.count(value))
            fail_at(o, 0, "unknown command '" + value + "' (expected norm, gamma, tail, verify or embed)");
        cfg.command = value;
    } else if (key == "function") {
        cfg.function_desc = value;
    } else if (key == "weight") {
        cfg.weight_desc = value;
    } else if (key == "young") {
        cfg.young_desc = value;
    } else if (key == "psi") {
        cfg.psi_desc = value;
    } else if (key == "kind") {
        if (!kWeightKinds.count(value) && !kYoungKinds.count(value) && value != "lp" && value != "gls")
            fail_at(o, 0, "unknown norm kind '" + value + "'");
        cfg.kind = value;
    } else if (key == "p") {
        cfg.p = number();
        if (!(cfg.p >= 1.0) || !std::isfinite(cfg.p))
            fail_at(o, 0, "p must be a finite number >= 1");
    } else if (key == "c") {
        cfg.c = number();
        if (!(cfg.c > 0.0) || !std::isfinite(cfg.c))
            fail_at(o, 0, "c must be positive");
    } else if (key == "rows") {
        cfg.rows = static_cast<int>(integer(2, 1e6));
    } else if (key == "steps") {
        cfg.steps = static_cast<int>(integer(2, 1e4));
    } else if (key == "eps_min") {
        cfg.eps_min = number();
        if (!(cfg.eps_min > 0.0))
            fail_at(o, 0, "eps_min must be positive");
    } else if (key == "eps_max") {
        cfg.eps_max = number();
        if (!(cfg.eps_max > 0.0))
            fail_at(o, 0, "eps_max must be positive");
    } else if (key == "seed") {
        std::uint64_t s = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
        if (ec != std::errc() || ptr != value.data() + value.size())
            fail_at(o, 0, "seed must be an unsigned 64-bit integer");
        cfg.seed = s;
    } else if (key == "points") {
        cfg.grid.points = static_cast<int>(integer(16, 1e7));
    } else if (key == "levels") {
        cfg.grid.levels = static_cast<int>(integer(1, 64));
    } else if (key == "divergence_factor") {
        cfg.grid.divergence_factor = number();
        if (!(cfg.grid.divergence_factor > 1.0))
            fail_at(o, 0, "divergence_factor must exceed 1");
    } else if (key == "check") {
        cfg.checks.clear();
        std::stringstream ss(value);
        std::string id;
        const auto& known = check_ids();
        std::size_t offset = 0;
        while (std::getline(ss, id, ',')) {
            std::string trimmed = id;
            trimmed.erase(0, trimmed.find_first_not_of(' '));
            trimmed.erase(trimmed.find_last_not_of(' ') + 1);
            if (trimmed != "all" && std::find(known.begin(), known.end(), trimmed) == known.end())
                fail_at(o, offset, "unknown check id '" + trimmed + "'");
            cfg.checks.push_back(trimmed);
            offset += id.size() + 1;
        }
        if (cfg.checks.size() > 1 && std::count(cfg.checks.begin(), cfg.checks.end(), "all"))
            fail_at(o, 0, "'all' cannot be combined with other check ids");
    } else {
        fail_at(Origin{line, line > 0 ? 1 : 0}, 0, "unknown key '" + key + "'");
    }
}

void check_requirements(const JobConfig& cfg)
{
    auto need = [&](bool ok, const std::string& message) {
        if (!ok)
            throw ConfigError(0, 0, message);
    };
    need(!cfg.command.empty(), "no command given (norm, gamma, tail, verify or embed)");
    if (cfg.command == "norm") {
        need(!cfg.kind.empty(), "norm needs kind = <norm kind>");
        need(cfg.function.has_value(), "norm needs function = <descriptor>");
        if (kWeightKinds.count(cfg.kind))
            need(cfg.weight.has_value(), "kind " + cfg.kind + " needs weight = <descriptor>");
        if (kYoungKinds.count(cfg.kind))
            need(cfg.young.has_value(), "kind " + cfg.kind + " needs young = <descriptor>");
        if (cfg.kind == "gls")
            need(cfg.psi.has_value(), "kind gls needs psi = <descriptor>");
        if (cfg.kind == "lp" || cfg.kind == "lorentz")
            need(!std::isnan(cfg.p), "kind " + cfg.kind + " needs p = <number >= 1>");
        if (cfg.kind == "luxemburg" || cfg.kind == "modular")
            need(cfg.function->measure().finite(), "kind " + cfg.kind + " needs a finite-mass function");
    } else if (cfg.command == "gamma") {
        need(cfg.weight.has_value(), "gamma needs weight = <descriptor>");
    } else if (cfg.command == "tail") {
        need(cfg.function.has_value(), "tail needs function = <descriptor>");
    } else if (cfg.command == "embed") {
        need(cfg.psi.has_value(), "embed needs psi = <descriptor>");
        need(!cfg.psi->degenerate(), "embed needs a psi with an open support");
        need(cfg.function.has_value(), "embed without a function needs psi = p0_delta_s");
        need(cfg.eps_min < cfg.eps_max, "embed needs eps_min < eps_max");
    }
}

void resolve(JobConfig& cfg)
{
    auto origin = [&](const std::string& key) {
        auto it = cfg.origins.find(key);
        return it == cfg.origins.end() ? Origin{} : Origin{it->second.first, it->second.second};
    };
    auto descriptor = [&](const std::string& key, const std::string& text, auto&& build) {
        try {
            return build(parse_descriptor(text));
        } catch (const DescriptorError& e) {
            fail_at(origin(key), e.offset, e.message);
        }
    };

    cfg.function.reset();
    cfg.weight.reset();
    cfg.young.reset();
    cfg.psi.reset();
    cfg.warnings.clear();

    if (!cfg.function_desc.empty())
        cfg.function = descriptor("function", cfg.function_desc,
                                  [&](const Descriptor& d) { return function_from(d, cfg.base_dir, cfg.seed); });
    if (!cfg.weight_desc.empty()) {
        cfg.weight = descriptor("weight", cfg.weight_desc, [&](const Descriptor& d) {
            Weight w = weight_from(d, cfg.function ? &*cfg.function : nullptr);
            if (w.family() == "power" || w.family() == "log") {
                double p = w.params().at("p");
                if (!(p > 1.0)) {
                    std::string msg = "p must exceed 1 for a finite gamma (got p=" + format_number(p) + ")";
                    if (cfg.command == "gamma")
                        throw DescriptorError{d.params.count("p") ? d.params.at("p").second : 0, msg};
                    cfg.warnings.push_back(msg);
                }
            }
            return w;
        });
    }
    if (!cfg.young_desc.empty())
        cfg.young = descriptor("young", cfg.young_desc, [&](const Descriptor& d) { return young_from(d); });
    if (!cfg.psi_desc.empty())
        cfg.psi = descriptor("psi", cfg.psi_desc, [&](const Descriptor& d) { return psi_from(d); });

    if (cfg.command == "embed" && cfg.psi && !cfg.function) {
        if (cfg.psi->family() == "p0_delta_s") {
            // The tail matching the psi, so that the ratio curve has a known limit.
            const Params& pp = cfg.psi->params();
            cfg.function = FunctionSpec::analytic(
                "power_log_tail",
                {{"p0", pp.at("p0")}, {"delta", param_or(pp, "delta", 0.0)}, {"s_kappa", param_or(pp, "s_kappa", 0.0)}});
        }
    }
}

JobConfig parse_config(std::string_view text, const std::string& base_dir)
{
    JobConfig cfg;
    cfg.base_dir = base_dir;
    std::map<std::string, int> seen;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) {
            if (end == text.size())
                break;
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(lineno, static_cast<int>(first) + 1, "expected 'key = value'");
        std::string key = line.substr(first, eq - first);
        key.erase(key.find_last_not_of(" \t") + 1);
        if (key.empty())
            throw ConfigError(lineno, static_cast<int>(first) + 1, "missing key before '='");
        if (key.find_first_of(" \t") != std::string::npos)
            throw ConfigError(lineno, static_cast<int>(first) + 1, "expected 'key = value'; keys are single words");
        std::size_t vstart = line.find_first_not_of(" \t", eq + 1);
        if (vstart == std::string::npos)
            throw ConfigError(lineno, static_cast<int>(eq) + 2, "missing value for '" + key + "'");
        std::string value = line.substr(vstart);
        value.erase(value.find_last_not_of(" \t") + 1);
        if (auto it = seen.find(key); it != seen.end())
            throw ConfigError(lineno, static_cast<int>(first) + 1,
                              "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
        seen[key] = lineno;
        apply_setting(cfg, key, value, lineno, static_cast<int>(vstart) + 1);
        if (end == text.size())
            break;
    }
    resolve(cfg);
    return cfg;
}

JobOutput run_job(const JobConfig& cfg)
{
    check_requirements(cfg);
    if (cfg.command == "norm")
        return run_norm(cfg);
    if (cfg.command == "gamma")
        return run_gamma(cfg);
    if (cfg.command == "tail")
        return run_tail(cfg);
    if (cfg.command == "verify")
        return run_verify(cfg);
    if (cfg.command == "embed")
        return run_embed(cfg);
    throw Error("no command given (norm, gamma, tail, verify or embed)");
}

}  // namespace tailnorm
