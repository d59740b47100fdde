#include "apx/suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apx/config.hpp"
#include "apx/error.hpp"
#include "apx/kernel.hpp"
#include "apx/norms.hpp"
#include "apx/parallel.hpp"
#include "apx/rng.hpp"
#include "apx/summability.hpp"
#include "apx/verify.hpp"

namespace apx {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double v) { return format_value(v); }

CheckResult started(int id, const char* name) {
    CheckResult r;
    r.id = id;
    r.name = name;
    return r;
}

ApPolynomial harmonic(double lambda, complex a) { return ApPolynomial({{lambda, a}}, 1.0); }

ExperimentSetup theorem_setup(const std::string& name, std::uint64_t seed) {
    ExperimentSetup s;
    s.function_name = name;
    s.f = *corpus_member(name, seed);
    s.matrix = builtin_matrix("cesaro");
    s.p = 2.0;
    s.q = 2.0;
    s.w = ModulusModel::power_law(1.0, 0.25);
    s.x = 0.0;
    s.p_tilde = 2.0;
    return s;
}

nlohmann::ordered_json ratios_json(const ExperimentReport& r) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& row : r.rows)
        out.push_back(fmt(row.ratio));
    return out;
}

const char* const theorem_functions[] = {"cos", "lacunary_b0.2"};

} // namespace

double multiplier_sum(const ApPolynomial& f, double lo, double hi, double x) {
    double sum = 0.0;
    for (const auto& t : f.terms()) {
        const double m = t.lambda <= lo ? 1.0 : (t.lambda >= hi ? 0.0 : (hi - t.lambda) / (hi - lo));
        if (m == 0.0)
            continue;
        sum += t.lambda == 0.0 ? m * t.coefficient.real() : 2.0 * m * (t.coefficient * std::polar(1.0, t.lambda * x)).real();
    }
    return sum;
}

CheckResult check_kernel_equivalence(std::uint64_t seed) {
    CheckResult r = started(1, "kernel-truncation equivalence");
    double err_plain = 0.0, err_flagged = 0.0;
    std::size_t rows = 0, flagged = 0;
    for (const auto& [name, f] : make_test_corpus(seed)) {
        for (const auto& row : kernel_check(f, 0, 16, 8)) {
            ++rows;
            if (row.interval_has_exponent) {
                ++flagged;
                const auto params = KernelParams::index(row.k, f.alpha());
                err_flagged = std::max(err_flagged,
                                       std::abs(row.kernel_value - multiplier_sum(f, params.lo(), params.hi(), row.x)));
            } else {
                err_plain = std::max(err_plain, row.abs_err);
            }
        }
    }
    r.pass = err_plain <= 1e-5 && err_flagged <= 1e-5;
    r.values["rows"] = rows;
    r.values["flagged_rows"] = flagged;
    r.values["max_err_vs_truncation"] = fmt(err_plain);
    r.values["max_err_flagged_vs_multiplier"] = fmt(err_flagged);
    r.detail = "max |kernel - truncation| " + fmt(err_plain) + " over " + std::to_string(rows - flagged)
               + " rows; flagged rows " + std::to_string(flagged) + " max |kernel - multiplier| " + fmt(err_flagged);
    return r;
}

CheckResult check_closed_form_norms() {
    CheckResult r = started(2, "closed-form norms");
    const auto sin_x = harmonic(1.0, complex(0.0, -0.5));
    const auto cos_x = harmonic(1.0, complex(0.5, 0.0));
    const double target = 1.0 / std::numbers::sqrt2;
    const double s = stepanov_norm(sin_x, 2.0);
    const double b = besicovitch_norm(cos_x, 2.0);
    bool pass = std::abs(s - target) <= 1e-6 && std::abs(b - target) <= 1e-4;
    double omega_err = 0.0;
    for (double delta : {0.1, 0.5, 1.0}) {
        const double w = omega_modulus(sin_x, delta, 2.0);
        omega_err = std::max(omega_err, std::abs(w - std::numbers::sqrt2 * std::sin(0.5 * delta)));
    }
    pass = pass && omega_err <= 1e-5;
    r.pass = pass;
    r.values["stepanov_sin"] = fmt(s);
    r.values["besicovitch_cos"] = fmt(b);
    r.values["max_omega_err"] = fmt(omega_err);
    r.detail = "S2(sin) " + fmt(s) + ", B2(cos) " + fmt(b) + ", max omega err " + fmt(omega_err);
    return r;
}

CheckResult check_classifier() {
    CheckResult r = started(3, "classifier ground truth");
    const auto cesaro = classify(builtin_matrix("cesaro"), 64);
    const auto one_hot = classify(builtin_matrix("one_hot"), 64);
    const auto increasing = classify(builtin_matrix("increasing"), 64);
    const bool cesaro_ok = cesaro.variation_class == VariationClass::Both && cesaro.rbvs.uniform_K == 1.0;
    const bool one_hot_ok = std::isinf(one_hot.rbvs.uniform_K);
    const double k8 = increasing.rbvs.per_row_K[8];
    const bool increasing_ok = std::abs(k8 - 17.0) <= 1e-12 * 17.0;
    bool head_ok = true;
    std::size_t head_checked = 0;
    for (const char* name : {"cesaro", "one_hot", "increasing", "riesz", "riesz:2"}) {
        const auto a = builtin_matrix(name);
        const auto rep = classify(a, 64);
        if (!rep.hbvs.holds)
            continue;
        ++head_checked;
        head_ok = head_ok && head_inequality_holds(a, rep.hbvs.uniform_K, 64);
    }
    r.pass = cesaro_ok && one_hot_ok && increasing_ok && head_ok;
    r.values["cesaro_class"] = variation_class_name(cesaro.variation_class);
    r.values["cesaro_uniform_K_rbvs"] = fmt(cesaro.rbvs.uniform_K);
    r.values["one_hot_rbvs"] = std::isinf(one_hot.rbvs.uniform_K) ? "UNBOUNDED" : fmt(one_hot.rbvs.uniform_K);
    r.values["increasing_K_n8"] = fmt(k8);
    r.values["head_inequality_matrices"] = head_checked;
    r.detail = std::string("cesaro ") + variation_class_name(cesaro.variation_class) + " K " + fmt(cesaro.rbvs.uniform_K)
               + ", one_hot RBVS " + (one_hot_ok ? "UNBOUNDED" : fmt(one_hot.rbvs.uniform_K)) + ", increasing K(8) "
               + fmt(k8) + ", head inequality " + (head_ok ? "holds" : "fails") + " on "
               + std::to_string(head_checked) + " HBVS matrices";
    return r;
}

CheckResult check_strong_mean_arithmetic() {
    CheckResult r = started(4, "strong-mean arithmetic");
    const auto cos_x = harmonic(1.0, complex(0.5, 0.0));
    const double v = strong_mean(cos_x, builtin_matrix("cesaro"), 3, 2.0, GammaSpec::half_alpha(), 0.0);
    const double err = std::abs(v - 1.0 / std::numbers::sqrt2);
    r.pass = err <= 1e-12;
    r.values["value"] = fmt(v);
    r.values["abs_err"] = fmt(err);
    r.detail = "value " + fmt(v) + ", |err| " + fmt(err);
    return r;
}

CheckResult check_condition_oracles() {
    CheckResult r = started(5, "condition and lemma oracles");
    const auto w = ModulusModel::power_law(1.0, 0.25);
    const auto c7 = check_condition_7(w.rate());
    const auto c6 = check_condition_6(w, 2.0, 2.0);
    const auto l1 = check_lemma_1(w, 2.0, 2.0);
    double l2_err = 0.0;
    for (int m = 1; m <= 8; ++m) {
        const auto g = ApPolynomial({{static_cast<double>(m), complex(0.5, 0.0)}}, 1.0);
        l2_err = std::max(l2_err, std::abs(check_lemma_2(g, 2.0, 2.0) - 1.0 / std::sqrt(pi)));
    }
    r.pass = std::abs(c7.constant - 4.0) <= 1e-3 && std::abs(l1.constant - 4.0) <= 1e-3 && c6.pass && l2_err <= 1e-6;
    r.values["C7"] = fmt(c7.constant);
    r.values["C12"] = fmt(l1.constant);
    r.values["C6"] = fmt(c6.constant);
    r.values["condition_6_pass"] = c6.pass;
    r.values["lemma_2_max_err"] = fmt(l2_err);
    r.detail = "C7 " + fmt(c7.constant) + ", C12 " + fmt(l1.constant) + ", C6 " + fmt(c6.constant)
               + (c6.pass ? " (stable)" : " (unstable)") + ", lemma 2 max err " + fmt(l2_err);
    return r;
}

CheckResult check_pointwise_theorems(std::uint64_t seed) {
    CheckResult r = started(6, "pointwise theorem harness");
    const auto n_list = default_n_list();
    bool pass = true;
    std::string detail;
    for (const char* name : theorem_functions) {
        const auto setup = theorem_setup(name, seed);
        for (auto kind : {TheoremKind::T1, TheoremKind::T2}) {
            const auto rep = run_pointwise_experiment(kind, setup, n_list);
            pass = pass && rep.pass;
            const std::string key = std::string(theorem_name(kind)) + ":" + name;
            r.values[key] = {{"pass", rep.pass}, {"ratio_sup", fmt(rep.ratio_sup)}, {"ratios", ratios_json(rep)}};
            detail += key + (rep.pass ? " PASS" : " FAIL") + " (sup " + fmt(rep.ratio_sup) + "); ";
        }
    }
    auto refusal = theorem_setup("cos", seed);
    refusal.matrix = builtin_matrix("one_hot");
    std::string refused = "none";
    try {
        run_pointwise_experiment(TheoremKind::T2, refusal, n_list);
    } catch (const HypothesisRefused& e) {
        if (e.hypothesis() == Hypothesis::RestBoundedVariation)
            refused = "rest bounded variation";
        else
            refused = hypothesis_name(e.hypothesis());
    }
    pass = pass && refused == "rest bounded variation";
    r.values["one_hot_T2_refusal"] = refused;
    r.pass = pass;
    r.detail = detail + "one_hot T2 refusal: " + refused;
    return r;
}

CheckResult check_norm_theorems(std::uint64_t seed) {
    CheckResult r = started(7, "norm theorem harness");
    const auto n_list = default_n_list();
    bool pass = true;
    double identity_err = 0.0;
    std::string detail;
    for (const char* name : theorem_functions) {
        for (double q_prime : {0.5, 2.0}) {
            auto setup = theorem_setup(name, seed);
            setup.q_prime = q_prime;
            const auto t3 = run_norm_experiment(TheoremKind::T3, setup, n_list);
            const auto t4 = run_norm_experiment(TheoremKind::T4, setup, n_list);
            for (std::size_t i = 0; i < t3.rows.size(); ++i) {
                identity_err = std::max(identity_err, std::abs(t3.rows[i].value - t4.rows[i].value));
                identity_err = std::max(identity_err, std::abs(t3.rows[i].ratio - t4.rows[i].ratio));
            }
            pass = pass && t3.pass && t4.pass;
            for (const auto* rep : {&t3, &t4}) {
                const std::string key = std::string(theorem_name(rep->kind)) + ":" + name + ":q'=" + fmt(q_prime);
                r.values[key] = {{"pass", rep->pass}, {"ratio_sup", fmt(rep->ratio_sup)}, {"ratios", ratios_json(*rep)}};
                detail += key + (rep->pass ? " PASS" : " FAIL") + " (sup " + fmt(rep->ratio_sup) + "); ";
            }
        }
    }
    pass = pass && identity_err <= 1e-12;
    r.values["T3_T4_max_diff"] = fmt(identity_err);
    r.pass = pass;
    r.detail = detail + "T3/T4 max row diff " + fmt(identity_err);
    return r;
}

CheckResult check_power_mean(std::uint64_t seed) {
    CheckResult r = started(8, "power-mean monotonicity");
    const auto corpus = make_test_corpus(seed);
    const char* matrices[] = {"cesaro", "one_hot", "increasing", "riesz", "riesz:2"};
    SplitMix64 rng(seed ^ 0x5eedULL);
    double worst = -1e300;
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
        const auto& f = corpus[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(corpus.size()) - 1))].function;
        const auto a = builtin_matrix(matrices[rng.uniform_int(0, 4)]);
        const int n = rng.uniform_int(0, 64);
        const double x = rng.uniform(-10.0, 10.0);
        double q1 = rng.uniform(0.25, 4.0), q2 = rng.uniform(0.25, 4.0);
        if (q1 > q2)
            std::swap(q1, q2);
        const double h1 = strong_mean(f, a, n, q1, GammaSpec::half_alpha(), x);
        const double h2 = strong_mean(f, a, n, q2, GammaSpec::half_alpha(), x);
        worst = std::max(worst, h1 - h2);
        if (h1 > h2 + 1e-12)
            ++violations;
    }
    r.pass = violations == 0;
    r.values["samples"] = 100;
    r.values["violations"] = violations;
    r.values["max_excess"] = fmt(worst);
    r.detail = "100 samples, " + std::to_string(violations) + " violations, max H(q1) - H(q2) " + fmt(worst);
    return r;
}

std::vector<CheckResult> run_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    out.push_back(check_kernel_equivalence(seed));
    out.push_back(check_closed_form_norms());
    out.push_back(check_classifier());
    out.push_back(check_strong_mean_arithmetic());
    out.push_back(check_condition_oracles());
    out.push_back(check_pointwise_theorems(seed));
    out.push_back(check_norm_theorems(seed));
    out.push_back(check_power_mean(seed));
    return out;
}

nlohmann::ordered_json suite_summary(std::uint64_t seed, const std::vector<CheckResult>& results) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& c : results) {
        all = all && c.pass;
        checks.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"values", c.values}});
    }
    return {{"seed", seed}, {"all_pass", all}, {"checks", checks}};
}

} // namespace apx
