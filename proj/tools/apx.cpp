#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "apx/config.hpp"
#include "apx/error.hpp"
#include "apx/kernel.hpp"
#include "apx/norms.hpp"
#include "apx/parallel.hpp"
#include "apx/suite.hpp"
#include "apx/summability.hpp"
#include "apx/verify.hpp"

namespace {

enum Exit : int {
    ok = 0,
    hypothesis_refused = 2,
    verdict_fail = 3,
    usage = 64,
    config = 65,
    numeric = 70,
};

using apx::format_value;

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f)
        throw apx::ConfigError("cannot write " + out);
    f << text;
}

struct Args {
    std::string fn;
    std::string matrix = "cesaro";
    std::string which = "stepanov";
    std::string modulus_which = "wx";
    std::string deltas = "0.01:3.1415:32log";
    std::string k_range = "0..16";
    std::string exp;
    std::string out;
    std::string mode = "direct";
    std::string tail = "spectral";
    double p = 2.0;
    double q = 2.0;
    double x = 0.0;
    double tol = 1e-5;
    double rel_tol = 1e-8;
    int n = 0;
    int n_max = 64;
    std::size_t x_grid = 8;
    std::uint64_t seed = 0;
    int threads = 0;
};

apx::NormOptions norm_options(const Args& a) {
    apx::NormOptions o;
    o.rel_tol = a.rel_tol;
    return o;
}

int run_norms(const Args& a) {
    const auto f = apx::resolve_function(a.fn, 0).function;
    apx::NormKind kind;
    if (a.which == "stepanov")
        kind = apx::NormKind::stepanov(a.p);
    else if (a.which == "sup")
        kind = apx::NormKind::sup();
    else if (a.which == "besicovitch")
        kind = apx::NormKind::besicovitch(a.p);
    else
        throw apx::InvalidArgument("--which must be stepanov, sup or besicovitch");
    const double v = apx::norm(f, kind, norm_options(a));
    emit("norm,p,value\n" + a.which + "," + format_value(a.which == "sup" ? INFINITY : a.p) + "," + format_value(v) + "\n",
         a.out);
    return ok;
}

int run_modulus(const Args& a) {
    const auto f = apx::resolve_function(a.fn, 0).function;
    const auto deltas = apx::parse_deltas(a.deltas);
    std::vector<apx::ModulusEstimate> est;
    if (a.modulus_which == "wx")
        est = apx::wx_modulus_sequence(f, a.x, deltas, a.p, norm_options(a));
    else if (a.modulus_which == "omega")
        est = apx::omega_modulus_sequence(f, deltas, a.p, norm_options(a));
    else
        throw apx::InvalidArgument("--which must be wx or omega");
    std::string csv = "delta,value\n";
    for (const auto& e : est)
        csv += format_value(e.delta) + "," + format_value(e.value) + "\n";
    emit(csv, a.out);
    return ok;
}

int run_kernel_check(const Args& a) {
    const auto f = apx::resolve_function(a.fn, 0).function;
    const auto [k_lo, k_hi] = apx::parse_int_range(a.k_range);
    apx::KernelOptions opt;
    opt.tol = a.tol;
    if (a.tail == "spectral")
        opt.tail = apx::TailMode::Spectral;
    else if (a.tail == "discard")
        opt.tail = apx::TailMode::Discard;
    else
        throw apx::InvalidArgument("--tail must be spectral or discard");
    std::string csv = "k,x,kernel_value,truncation_value,abs_err,tail_bound\n";
    for (const auto& r : apx::kernel_check(f, k_lo, k_hi, a.x_grid, opt))
        csv += std::to_string(r.k) + "," + format_value(r.x) + "," + format_value(r.kernel_value) + ","
               + format_value(r.truncation_value) + "," + format_value(r.abs_err) + "," + format_value(r.tail_bound)
               + "\n";
    emit(csv, a.out);
    return ok;
}

int run_classify(const Args& a) {
    const auto m = apx::resolve_matrix(a.matrix);
    emit(apx::to_json(apx::classify(m, a.n_max)).dump(2) + "\n", a.out);
    return ok;
}

int run_strong_mean(const Args& a) {
    const auto f = apx::resolve_function(a.fn, 0).function;
    const auto m = apx::resolve_matrix(a.matrix);
    apx::StrongMeanOptions opt;
    if (a.mode == "kernel")
        opt.mode = apx::PartialSumMode::Kernel;
    else if (a.mode != "direct")
        throw apx::InvalidArgument("--mode must be direct or kernel");
    opt.kernel.tol = a.tol;
    const double v = apx::strong_mean(f, m, a.n, a.q, apx::GammaSpec::half_alpha(), a.x, opt);
    emit("n,q,x,value\n" + std::to_string(a.n) + "," + format_value(a.q) + "," + format_value(a.x) + ","
             + format_value(v) + "\n",
         a.out);
    return ok;
}

int run_verify(const Args& a) {
    const auto cfg = apx::load_experiment_file(a.exp);
    const auto report = apx::run_experiment(cfg.kind, cfg.setup, cfg.n_list);
    std::string csv = "n,strong_mean,bound,e_term,ratio\n";
    for (const auto& r : report.rows)
        csv += std::to_string(r.n) + "," + format_value(r.value) + "," + format_value(r.bound) + ","
               + format_value(r.e_term) + "," + format_value(r.ratio) + "\n";
    emit(csv, a.out);
    std::cerr << report.config << "\n"
              << "verdict: " << (report.pass ? "PASS" : "FAIL") << " (ratio sup " << format_value(report.ratio_sup)
              << (report.trending_up ? ", increasing over the last three doublings" : "") << ")\n";
    return report.pass ? ok : verdict_fail;
}

int run_all(const Args& a) {
    const auto results = apx::run_suite(a.seed);
    const auto summary = apx::suite_summary(a.seed, results);
    const std::filesystem::path dir = a.out.empty() ? std::filesystem::path(".") : std::filesystem::path(a.out);
    std::filesystem::create_directories(dir);
    emit(summary.dump(2) + "\n", (dir / "summary.json").string());
    for (const auto& r : results)
        std::cout << "check " << r.id << " [" << r.name << "]: " << (r.pass ? "PASS" : "FAIL") << "  " << r.detail
                  << "\n";
    return summary["all_pass"].get<bool>() ? ok : verdict_fail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Almost periodic approximation toolkit"};
    app.require_subcommand(1);
    Args a;
    app.add_option("--threads", a.threads, "Worker threads (overrides APX_THREADS)")->check(CLI::PositiveNumber);

    auto* norms = app.add_subcommand("norms", "Stepanov, sup or Besicovitch norm of a function");
    norms->add_option("--fn", a.fn, "Function JSON or corpus:<name>")->required();
    norms->add_option("--p", a.p, "Exponent");
    norms->add_option("--which", a.which, "stepanov|sup|besicovitch");
    norms->add_option("--rel-tol", a.rel_tol, "Quadrature relative tolerance")->check(CLI::PositiveNumber);
    norms->add_option("--out", a.out, "Output CSV (default stdout)");

    auto* modulus = app.add_subcommand("modulus", "Pointwise modulus w_x or Stepanov modulus omega");
    modulus->add_option("--fn", a.fn, "Function JSON or corpus:<name>")->required();
    modulus->add_option("--x", a.x, "Center for w_x");
    modulus->add_option("--p", a.p, "Exponent");
    modulus->add_option("--deltas", a.deltas, "lo:hi:N or lo:hi:Nlog");
    modulus->add_option("--which", a.modulus_which, "wx|omega")->capture_default_str();
    modulus->add_option("--rel-tol", a.rel_tol, "Quadrature relative tolerance")->check(CLI::PositiveNumber);
    modulus->add_option("--out", a.out, "Output CSV (default stdout)");

    auto* kcheck = app.add_subcommand("kernel-check", "Kernel integral versus spectral truncation");
    kcheck->add_option("--fn", a.fn, "Function JSON or corpus:<name>")->required();
    kcheck->add_option("--k", a.k_range, "Index range a..b");
    kcheck->add_option("--x-grid", a.x_grid, "Points over one quasi-period")->check(CLI::PositiveNumber);
    kcheck->add_option("--tol", a.tol, "Absolute tolerance (>= 1e-6)")->check(CLI::PositiveNumber);
    kcheck->add_option("--tail", a.tail, "spectral|discard");
    kcheck->add_option("--out", a.out, "Output CSV (default stdout)");

    auto* cls = app.add_subcommand("classify", "RBVS/HBVS classification of a matrix");
    cls->add_option("--matrix", a.matrix, "Built-in name or matrix JSON");
    cls->add_option("--n-max", a.n_max, "Last row")->check(CLI::NonNegativeNumber);
    cls->add_option("--out", a.out, "Output JSON (default stdout)");

    auto* sm = app.add_subcommand("strong-mean", "Matrix strong mean at a point");
    sm->add_option("--fn", a.fn, "Function JSON or corpus:<name>")->required();
    sm->add_option("--matrix", a.matrix, "Built-in name or matrix JSON");
    sm->add_option("--n", a.n, "Row")->check(CLI::NonNegativeNumber);
    sm->add_option("--q", a.q, "Exponent q > 0");
    sm->add_option("--x", a.x, "Point");
    sm->add_option("--mode", a.mode, "direct|kernel");
    sm->add_option("--tol", a.tol, "Kernel tolerance")->check(CLI::PositiveNumber);
    sm->add_option("--out", a.out, "Output CSV (default stdout)");

    auto* verify = app.add_subcommand("verify", "Run a rate experiment from a config file");
    verify->add_option("--exp", a.exp, "Experiment JSON")->required();
    verify->add_option("--out", a.out, "Report CSV (default stdout)");

    auto* all = app.add_subcommand("all", "Regression suite over the built-in corpus");
    all->add_option("--seed", a.seed, "Corpus seed");
    all->add_option("--out", a.out, "Directory for summary.json (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }
    if (a.threads > 0)
        apx::set_thread_count(a.threads);

    try {
        if (*norms)
            return run_norms(a);
        if (*modulus)
            return run_modulus(a);
        if (*kcheck)
            return run_kernel_check(a);
        if (*cls)
            return run_classify(a);
        if (*sm)
            return run_strong_mean(a);
        if (*verify)
            return run_verify(a);
        return run_all(a);
    } catch (const apx::HypothesisRefused& e) {
        std::cerr << "apx: " << e.what() << "\n";
        return hypothesis_refused;
    } catch (const apx::ConfigError& e) {
        std::cerr << "apx: config error: " << e.what() << "\n";
        return config;
    } catch (const apx::InvalidArgument& e) {
        std::cerr << "apx: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "apx: numeric failure: " << e.what() << "\n";
        return numeric;
    }
}
