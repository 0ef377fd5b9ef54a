#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tailnorm.h"

namespace {

constexpr int kUsage = 3;

int report(tn_status s, const char* context)
{
    std::cerr << "tailnorm: " << context << ": " << tn_last_error() << "\n";
    return s == TN_ERR_NUMERIC ? 2 : kUsage;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rearrangement-invariant norms of tails and samples, and checks of their equivalences"};
    std::vector<std::string> positional;
    std::string config_path, out_path, check, kind;
    std::vector<std::string> settings;
    std::uint64_t seed = 0;
    app.add_option("command", positional, "norm | gamma | tail | verify | embed, then check ids for verify");
    app.add_option("--config", config_path, "job file of key = value lines")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "write the CSV here instead of standard output");
    auto* seed_opt = app.add_option("--seed", seed, "seed for sampled inputs (default 1)");
    app.add_option("--check", check, "check id, comma-separated ids, or all");
    app.add_option("--kind", kind, "norm kind for the norm command");
    app.add_option("--set", settings, "extra key=value setting, applied after the job file")->allow_extra_args(false);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    std::string text;
    std::string base_dir = ".";
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "tailnorm: cannot read " << config_path << "\n";
            return kUsage;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
        auto slash = config_path.find_last_of('/');
        if (slash != std::string::npos)
            base_dir = config_path.substr(0, slash == 0 ? 1 : slash);
    }

    tn_job* job = nullptr;
    if (tn_status s = tn_job_parse(text.c_str(), base_dir.c_str(), &job); s != TN_OK)
        return report(s, config_path.empty() ? "settings" : config_path.c_str());

    auto set = [&](const std::string& key, const std::string& value) {
        tn_status s = tn_job_set(job, key.c_str(), value.c_str());
        if (s != TN_OK)
            std::cerr << "tailnorm: " << key << ": " << tn_last_error() << "\n";
        return s == TN_OK;
    };
    bool ok = true;
    for (const auto& kv : settings) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "tailnorm: --set expects key=value, got '" << kv << "'\n";
            ok = false;
            continue;
        }
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
            return s;
        };
        ok = set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1))) && ok;
    }
    if (!positional.empty()) {
        ok = set("command", positional.front()) && ok;
        if (positional.size() > 1) {
            std::string ids;
            for (std::size_t i = 1; i < positional.size(); ++i)
                ids += (i > 1 ? "," : "") + positional[i];
            ok = set("check", ids) && ok;
        }
    }
    if (!check.empty())
        ok = set("check", check) && ok;
    if (!kind.empty())
        ok = set("kind", kind) && ok;
    if (*seed_opt)
        ok = set("seed", std::to_string(seed)) && ok;
    if (!ok) {
        tn_job_free(job);
        return kUsage;
    }

    int exit_code = kUsage;
    tn_status s = tn_job_run(job, &exit_code);
    std::cerr << tn_job_warnings(job);
    if (s != TN_OK) {
        int code = report(s, "run");
        tn_job_free(job);
        return code;
    }
    const char* csv = tn_job_csv(job);
    if (out_path.empty()) {
        std::fputs(csv, stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << csv;
        if (!out) {
            std::cerr << "tailnorm: cannot write " << out_path << "\n";
            tn_job_free(job);
            return kUsage;
        }
    }
    std::cerr << tn_job_summary(job);
    tn_job_free(job);
    return exit_code;
}
