#pragma once

// Line-oriented job files and the subcommands that run them.
//
//   command  = norm | gamma | tail | verify | embed
//   function = analytic:pareto p=2 | sample:./data.csv [mass=1] | pareto_sample p=2 n=100000
//   weight   = power p=2 [mass=1] | log p=2 kappa=1 [mass=1] | natural
//   young    = power q=2 | exp_power q=2 | exp_square_log | phi p0=2 delta=0 s_kappa=0
//   psi      = p0_delta_s p0=2 delta=0 | power_blowup B=3 beta=1 | degenerate r=2
//   kind     = weak | weak_dual | marcinkiewicz | lp | lorentz | weak_orlicz | weak_orlicz_rho
//              | luxemburg | modular | in_wm | gls
//   p, c, rows, steps, eps_min, eps_max, seed, points, levels, divergence_factor, check
//
// '#' starts a comment; every key may appear once.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tailnorm/harness.hpp"

namespace tailnorm {

/// Parse failure at a 1-based line and column.
class ConfigError : public Error {
public:
    ConfigError(int line, int column, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct JobConfig {
    std::string command;
    std::string function_desc;
    std::string weight_desc;
    std::string young_desc;
    std::string psi_desc;
    std::string kind;
    double p = kNaN;
    double c = 1.0;
    int rows = 200;
    int steps = 13;
    double eps_min = 0.01;
    double eps_max = 0.5;
    std::vector<std::string> checks;
    std::uint64_t seed = 1;
    GridConfig grid = GridConfig::from_environment();
    // Relative paths in sample descriptors resolve against this directory.
    std::string base_dir;
    std::vector<std::string> warnings;
    // Line and column of each key's value, for positioned resolution errors.
    std::map<std::string, std::pair<int, int>> origins;

    std::optional<FunctionSpec> function;
    std::optional<Weight> weight;
    std::optional<YoungFunction> young;
    std::optional<PsiFunction> psi;
};

/// Parses a job file and resolves its descriptors; throws ConfigError with the offending
/// position. Whether the command has everything it needs is checked by run_job.
JobConfig parse_config(std::string_view text, const std::string& base_dir = ".");

/// Applies one `key = value` setting, as a config line would (line 0 marks a command-line origin).
void apply_setting(JobConfig& cfg, const std::string& key, const std::string& value, int line = 0,
                   int column = 0);

/// Resolves descriptors into specs; call again after apply_setting.
void resolve(JobConfig& cfg);

FunctionSpec parse_function(const std::string& descriptor, const std::string& base_dir, std::uint64_t seed);
Weight parse_weight(const std::string& descriptor, const FunctionSpec* function);
YoungFunction parse_young(const std::string& descriptor);
PsiFunction parse_psi(const std::string& descriptor);

/// Reads a headerless or single-header CSV: magnitudes in column 1, optional weights in column 2.
FunctionSpec load_sample(const std::string& path, double mass = 1.0);

enum ExitCode : int { exit_success = 0, exit_check_failure = 1, exit_indeterminate = 2, exit_usage = 3 };

struct JobOutput {
    int exit_code = exit_success;
    std::string csv;
    // Human-readable lines for the terminal.
    std::string summary;
};

/// Runs a resolved job; throws ConfigError when the command lacks an input. Output depends only on the config, its seed and the grid settings.
JobOutput run_job(const JobConfig& cfg);

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for the specials.
std::string format_number(double v);

}  // namespace tailnorm
