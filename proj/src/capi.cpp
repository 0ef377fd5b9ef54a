#include "tailnorm.h"

#include <cmath>
#include <string>

#include "tailnorm/job.hpp"

using namespace tailnorm;

struct tn_function {
    FunctionSpec spec;
};
struct tn_weight {
    Weight weight;
};
struct tn_young {
    YoungFunction young;
};
struct tn_psi {
    PsiFunction psi;
};
struct tn_job {
    JobConfig config;
    JobOutput output;
    std::string warnings;
};

namespace {

thread_local std::string last_error;

tn_status fail(tn_status s, const std::string& message)
{
    last_error = message;
    return s;
}

// Maps library exceptions to status codes; nothing escapes the C boundary.
template <class F>
tn_status guarded(F&& f)
{
    try {
        last_error.clear();
        return f();
    } catch (const ConfigError& e) {
        return fail(TN_ERR_PARSE, e.what());
    } catch (const IndeterminateError& e) {
        return fail(TN_ERR_NUMERIC, e.what());
    } catch (const Error& e) {
        return fail(TN_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(TN_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TN_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TN_ERR_INTERNAL, "unknown exception");
    }
}

tn_status null_argument(const char* what)
{
    return fail(TN_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

void fill(const NormResult& r, tn_result* out)
{
    out->verdict = r.is_finite() ? TN_FINITE : r.is_diverges() ? TN_DIVERGES : TN_INDETERMINATE;
    out->value = r.value;
    out->error = r.error;
    out->log_value = r.log_value;
    out->cross_check = r.cross_check;
}

template <class F>
tn_status norm_call(tn_result* out, F&& compute)
{
    if (!out)
        return null_argument("result");
    return guarded([&] {
        fill(compute(), out);
        return TN_OK;
    });
}

}  // namespace

extern "C" {

const char* tn_last_error(void)
{
    return last_error.c_str();
}

const char* tn_version(void)
{
    return "0.1.0";
}

tn_status tn_function_parse(const char* descriptor, tn_function** out)
{
    if (!descriptor || !out)
        return null_argument("descriptor and out");
    return guarded([&] {
        *out = new tn_function{parse_function(descriptor, ".", 1)};
        return TN_OK;
    });
}

tn_status tn_function_from_samples(const double* magnitudes, const double* weights, size_t n, double mass,
                                   tn_function** out)
{
    if (!magnitudes || !out)
        return null_argument("magnitudes and out");
    return guarded([&] {
        std::vector<double> m(magnitudes, magnitudes + n);
        std::vector<double> w;
        if (weights)
            w.assign(weights, weights + n);
        *out = new tn_function{FunctionSpec::empirical(std::move(m), std::move(w), mass)};
        return TN_OK;
    });
}

void tn_function_free(tn_function* f)
{
    delete f;
}

tn_status tn_function_tail(const tn_function* f, double t, double* out)
{
    if (!f || !out)
        return null_argument("function and out");
    return guarded([&] {
        *out = tail_of(f->spec)(t);
        return TN_OK;
    });
}

tn_status tn_function_rearrangement(const tn_function* f, double s, double* out)
{
    if (!f || !out)
        return null_argument("function and out");
    return guarded([&] {
        *out = Rearrangement(f->spec)(s);
        return TN_OK;
    });
}

tn_status tn_weight_parse(const char* descriptor, const tn_function* generator, tn_weight** out)
{
    if (!descriptor || !out)
        return null_argument("descriptor and out");
    return guarded([&] {
        *out = new tn_weight{parse_weight(descriptor, generator ? &generator->spec : nullptr)};
        return TN_OK;
    });
}

void tn_weight_free(tn_weight* w)
{
    delete w;
}

tn_status tn_young_parse(const char* descriptor, tn_young** out)
{
    if (!descriptor || !out)
        return null_argument("descriptor and out");
    return guarded([&] {
        *out = new tn_young{parse_young(descriptor)};
        return TN_OK;
    });
}

void tn_young_free(tn_young* y)
{
    delete y;
}

tn_status tn_psi_parse(const char* descriptor, tn_psi** out)
{
    if (!descriptor || !out)
        return null_argument("descriptor and out");
    return guarded([&] {
        *out = new tn_psi{parse_psi(descriptor)};
        return TN_OK;
    });
}

void tn_psi_free(tn_psi* p)
{
    delete p;
}

tn_status tn_gamma(const tn_weight* w, tn_result* out)
{
    if (!w)
        return null_argument("weight");
    return norm_call(out, [&] { return gamma(w->weight, GridConfig::from_environment()); });
}

tn_status tn_weak_norm(const tn_function* f, const tn_weight* w, tn_result* out)
{
    if (!f || !w)
        return null_argument("function and weight");
    return norm_call(out, [&] {
        WeakNormOptions opts;
        opts.min_s = empirical_weak_floor(f->spec);
        return weak_norm(f->spec, w->weight, GridConfig::from_environment(), opts);
    });
}

tn_status tn_marcinkiewicz_norm(const tn_function* f, const tn_weight* w, tn_result* out)
{
    if (!f || !w)
        return null_argument("function and weight");
    return norm_call(out, [&] { return marcinkiewicz_norm(f->spec, w->weight, GridConfig::from_environment()); });
}

tn_status tn_lp_norm(const tn_function* f, double p, tn_result* out)
{
    if (!f)
        return null_argument("function");
    if (!(p >= 1.0) || !std::isfinite(p))
        return fail(TN_ERR_INVALID_ARGUMENT, "p must be a finite number >= 1");
    return norm_call(out, [&] { return lp_norm(f->spec, p); });
}

tn_status tn_weak_orlicz_norm(const tn_function* f, const tn_young* y, tn_result* out)
{
    if (!f || !y)
        return null_argument("function and Young function");
    return norm_call(out, [&] { return weak_orlicz_norm(f->spec, y->young, GridConfig::from_environment()); });
}

tn_status tn_luxemburg_norm(const tn_function* f, const tn_young* y, tn_result* out)
{
    if (!f || !y)
        return null_argument("function and Young function");
    return norm_call(out, [&] { return luxemburg_norm(f->spec, y->young); });
}

tn_status tn_gls_norm(const tn_function* f, const tn_psi* psi, tn_result* out)
{
    if (!f || !psi)
        return null_argument("function and psi");
    return norm_call(out, [&] { return gls_norm(f->spec, psi->psi, GridConfig::from_environment()); });
}

tn_status tn_job_parse(const char* text, const char* base_dir, tn_job** out)
{
    if (!text || !out)
        return null_argument("text and out");
    return guarded([&] {
        *out = new tn_job{parse_config(text, base_dir ? base_dir : "."), {}, {}};
        return TN_OK;
    });
}

tn_status tn_job_set(tn_job* job, const char* key, const char* value)
{
    if (!job || !key || !value)
        return null_argument("job, key and value");
    return guarded([&] {
        apply_setting(job->config, key, value);
        return TN_OK;
    });
}

tn_status tn_job_run(tn_job* job, int* exit_code)
{
    if (!job || !exit_code)
        return null_argument("job and exit_code");
    job->output = {};
    job->warnings.clear();
    *exit_code = exit_usage;
    tn_status s = guarded([&] {
        resolve(job->config);
        for (const auto& w : job->config.warnings)
            job->warnings += w + "\n";
        if (job->config.command.empty())
            throw ConfigError(0, 0, "no command given (norm, gamma, tail, verify or embed)");
        job->output = run_job(job->config);
        *exit_code = job->output.exit_code;
        return TN_OK;
    });
    if (s == TN_ERR_NUMERIC)
        *exit_code = exit_indeterminate;
    return s;
}

const char* tn_job_csv(const tn_job* job)
{
    return job ? job->output.csv.c_str() : "";
}

const char* tn_job_summary(const tn_job* job)
{
    return job ? job->output.summary.c_str() : "";
}

const char* tn_job_warnings(const tn_job* job)
{
    return job ? job->warnings.c_str() : "";
}

void tn_job_free(tn_job* job)
{
    delete job;
}

}  // extern "C"
