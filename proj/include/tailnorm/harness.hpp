#pragma once

// Executable verification of the equivalence, exactness and embedding statements.
// Every check returns one assertion row per claim, with the accepted range it was held to.

#include <cstdint>
#include <string>
#include <vector>

#include "tailnorm/norms.hpp"

namespace tailnorm {

enum class CheckStatus { pass, fail, indeterminate };

const char* to_string(CheckStatus s);

/// One claim: `measured` must lie in [lower, upper]. Rows with infinite bounds on both sides
/// are informational and pass whenever the measurement exists.
struct Assertion {
    std::string input;
    std::string quantity;
    double measured = kNaN;
    double lower = -kInf;
    double upper = kInf;
    CheckStatus status = CheckStatus::indeterminate;
    std::string note;
};

struct CheckReport {
    std::string check_id;
    CheckStatus status = CheckStatus::pass;
    std::vector<Assertion> assertions;
    double runtime_seconds = 0.0;

    /// Records a range assertion; NaN measurements are indeterminate.
    Assertion& expect(std::string input, std::string quantity, double measured, double lower, double upper,
                      std::string note = {});
    /// Records a row whose status was decided by the caller.
    Assertion& record(std::string input, std::string quantity, double measured, CheckStatus status,
                      std::string note = {});
    /// Informational row.
    Assertion& observe(std::string input, std::string quantity, double measured, std::string note = {});

    /// fail dominates indeterminate, which dominates pass.
    void absorb(const CheckReport& other);
};

CheckReport check_sandwich(const std::vector<FunctionSpec>& functions, const std::vector<Weight>& weights,
                           const GridConfig& cfg = {});
/// `lower_slack` widens the lower end of the Marcinkiewicz/gamma ratio; the upper end is 1 + 1e-3.
CheckReport check_exactness(const Weight& w, double lower_slack = 1e-3, const GridConfig& cfg = {});
/// Tail min(1, (t/K)^-p log^{-kappa p}(t/K)) at K, 2K and 4K.
CheckReport check_heavy_tail_equivalence(double p, double kappa, double K = 1.0, const GridConfig& cfg = {});
/// h(x) = |log x|^m (1 + log(1 + |log x|))^kappa against its natural weight.
CheckReport check_light_tail(double m, double kappa, const GridConfig& cfg = {});
CheckReport check_weak_orlicz_equiv(const ExponentialYoung& N, const std::vector<FunctionSpec>& functions,
                                    const GridConfig& cfg = {});
CheckReport check_wm_subspace(const ExponentialYoung& N, const std::vector<FunctionSpec>& members,
                              const std::vector<FunctionSpec>& non_members, const GridConfig& cfg = {});
CheckReport check_acn_failure(double p, const GridConfig& cfg = {});
CheckReport check_embedding_41(double p0, double delta, double s_kappa, const GridConfig& cfg = {});
CheckReport check_embedding_42(double p0, double delta, double s_kappa);
CheckReport check_sharpness_43(double p0, double delta, double s_kappa);

/// Ids accepted by run_check, in suite order.
const std::vector<std::string>& check_ids();
/// Runs a check over its default parameter matrix; `seed` drives the empirical samples.
CheckReport run_check(const std::string& id, const GridConfig& cfg, std::uint64_t seed);

}  // namespace tailnorm
