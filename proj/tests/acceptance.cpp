// Acceptance runner: one line per criterion, nonzero exit if any fails.
// usage: acceptance <apx binary> <work dir>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "apx/suite.hpp"

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t seed = 0;

struct Criterion {
    int id;
    const char* name;
    std::function<apx::CheckResult()> run;
    // wall-clock budget in seconds, 0 = none
    double budget;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %d (%s): %s  %s\n", id, name, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    return pass;
}

int run_all(const std::string& apx, const fs::path& out, const char* threads_env, const char* threads_flag) {
    fs::create_directories(out);
    std::string cmd;
    if (threads_env)
        cmd += std::string("APX_THREADS=") + threads_env + " ";
    cmd += "'" + apx + "'";
    if (threads_flag)
        cmd += std::string(" --threads ") + threads_flag;
    cmd += " all --seed 0 --out '" + out.string() + "' > '" + (out / "stdout.txt").string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <apx binary> <work dir>\n", argv[0]);
        return 64;
    }
    const std::string apx = argv[1];
    const fs::path work = argv[2];
    fs::remove_all(work);
    fs::create_directories(work);

    const Criterion criteria[] = {
        {1, "kernel-truncation equivalence", [] { return apx::check_kernel_equivalence(seed); }, 60.0},
        {2, "closed-form norms", [] { return apx::check_closed_form_norms(); }, 0.0},
        {3, "classifier ground truth", [] { return apx::check_classifier(); }, 0.0},
        {4, "strong-mean arithmetic", [] { return apx::check_strong_mean_arithmetic(); }, 0.0},
        {5, "condition and lemma oracles", [] { return apx::check_condition_oracles(); }, 0.0},
        {6, "pointwise theorem harness", [] { return apx::check_pointwise_theorems(seed); }, 300.0},
        {7, "norm theorem harness", [] { return apx::check_norm_theorems(seed); }, 0.0},
        {8, "power-mean monotonicity", [] { return apx::check_power_mean(seed); }, 0.0},
    };

    bool all = true;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        apx::CheckResult r;
        std::string error;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.budget == 0.0 || secs <= c.budget;
        char timing[96];
        if (c.budget > 0.0)
            std::snprintf(timing, sizeof timing, " [%.1f s, budget %.0f s]", secs, c.budget);
        else
            std::snprintf(timing, sizeof timing, " [%.1f s]", secs);
        const std::string detail = (error.empty() ? r.detail : "error: " + error) + timing;
        all = report(c.id, c.name, error.empty() && r.pass && in_time, detail) && all;
    }

    // criterion 9: byte-identical summaries across runs and thread counts
    const auto t0 = std::chrono::steady_clock::now();
    const int a = run_all(apx, work / "run_a", "1", nullptr);
    const int b = run_all(apx, work / "run_b", "1", nullptr);
    const int c = run_all(apx, work / "run_c", nullptr, "8");
    const std::string sa = slurp(work / "run_a" / "summary.json");
    const std::string sb = slurp(work / "run_b" / "summary.json");
    const std::string sc = slurp(work / "run_c" / "summary.json");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool produced = !sa.empty() && (a == 0 || a == 3) && (b == 0 || b == 3) && (c == 0 || c == 3);
    const bool same = produced && sa == sb && sa == sc;
    char detail[160];
    std::snprintf(detail, sizeof detail, "exit codes %d/%d/%d, summary %zu bytes, 1-thread runs %s, 8-thread run %s [%.1f s]",
                  a, b, c, sa.size(), sa == sb ? "identical" : "differ", sa == sc ? "identical" : "differs", secs);
    all = report(9, "determinism", same, detail) && all;

    std::printf("acceptance: %s\n", all ? "all criteria PASS" : "some criteria FAIL");
    return all ? 0 : 1;
}
