#include "apx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include "apx/error.hpp"
#include "apx/parallel.hpp"
#include "apx/quadrature.hpp"
#include "apx/rng.hpp"

namespace apx {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();
// below this point rates and moduli are extrapolated as power laws
constexpr double rate_floor = 1e-6;
constexpr double modulus_floor = 1e-8;

// int_lo^hi g(t) dt through t = e^s
template <class G>
double integrate_log(G&& g, double lo, double hi, const char* what) {
    if (!(hi > lo))
        return 0.0;
    QuadOptions q;
    q.rel_tol = 1e-10;
    q.abs_tol = 1e-300;
    const auto breaks = uniform_breaks(std::log(lo), std::log(hi), 0.5);
    auto r = integrate_panels(
        [&](double s) {
            const double t = std::exp(s);
            return g(t) * t;
        },
        breaks, q);
    return require_converged(r, what).value;
}

// exponent e with g(2 eps) / g(eps) = 2^e
double local_exponent(double g_eps, double g_2eps) { return std::log(g_2eps / g_eps) / std::numbers::ln2; }

std::vector<double> grid_or_default(std::span<const double> grid) {
    std::vector<double> out = grid.empty() ? default_small_grid() : std::vector<double>(grid.begin(), grid.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out[i] > 0.0) || !std::isfinite(out[i]))
            throw InvariantViolation("grid points must be positive and finite", i);
        if (i > 0 && out[i] <= out[i - 1])
            throw InvariantViolation("grid must be strictly increasing", i);
    }
    return out;
}

double safe_ratio(double num, double den) {
    if (den > 0.0)
        return num / den;
    return num > 0.0 ? inf : 0.0;
}

// max ratio, and stable when the ratio grows by at most the limit from 10 u_min down to u_min
void finish(ConditionResult& r) {
    r.constant = 0.0;
    for (const auto& [u, v] : r.ratios)
        r.constant = std::max(r.constant, v);
    if (r.divergent || !std::isfinite(r.constant)) {
        r.pass = false;
        return;
    }
    const double u_min = r.ratios.front().first;
    std::size_t ref = 0;
    for (std::size_t i = 0; i < r.ratios.size(); ++i)
        if (std::abs(std::log(r.ratios[i].first / (10.0 * u_min))) < std::abs(std::log(r.ratios[ref].first / (10.0 * u_min))))
            ref = i;
    const double growth = safe_ratio(r.ratios.front().second, r.ratios[ref].second);
    r.pass = ref == 0 || growth <= stability_growth_limit;
}

void check_matrix(const SummabilityMatrix& a, int n_max) {
    if (const auto v = validate_rows(a, n_max)) {
        const char* clause = v->clause == RowClause::Nonnegative       ? "negative entry"
                             : v->clause == RowClause::LowerTriangular ? "nonzero entry above the diagonal"
                                                                       : "row sum differs from 1";
        throw HypothesisRefused(Hypothesis::RowNormalization, std::string(clause) + " at n = " + std::to_string(v->n)
                                                                  + ", k = " + std::to_string(v->k));
    }
}

void check_variation(TheoremKind kind, const VariationReport& report) {
    const bool head = kind == TheoremKind::T1 || kind == TheoremKind::T3;
    const VariationSide& side = head ? report.hbvs : report.rbvs;
    if (side.holds)
        return;
    char buf[160];
    std::snprintf(buf, sizeof buf, "constant %.6g, growth %.6g up to n = %d", side.uniform_K, side.growth,
                  report.n_max);
    throw HypothesisRefused(head ? Hypothesis::HeadBoundedVariation : Hypothesis::RestBoundedVariation, buf);
}

void check_conditions(GateReport& gate, const ModulusModel& w, double p, double q) {
    gate.condition_6 = check_condition_6(w, p, q);
    if (!gate.condition_6.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "ratio sup %.6g is not stable as u -> 0", gate.condition_6.constant);
        throw HypothesisRefused(Hypothesis::ModulusIntegral, buf);
    }
    gate.condition_7 = check_condition_7(w.rate());
    if (!gate.condition_7.pass)
        throw HypothesisRefused(Hypothesis::RateIntegral, gate.condition_7.divergent
                                                              ? "int_0^t H diverges"
                                                              : "ratio is not stable as t -> 0");
}

int max_n(std::span<const int> n_list) {
    if (n_list.empty())
        throw InvalidArgument("experiment needs at least one n");
    int m = 0;
    for (int n : n_list) {
        if (n < 0)
            throw InvalidArgument("row indices must be nonnegative");
        m = std::max(m, n);
    }
    return m;
}

std::string echo(TheoremKind kind, const ExperimentSetup& s) {
    char buf[320];
    const bool norm = kind == TheoremKind::T3 || kind == TheoremKind::T4;
    if (norm)
        std::snprintf(buf, sizeof buf, "%s f=%s matrix=%s p=%g q=%g q_prime=%g p_tilde=%g H=%s x_grid=%zu",
                      theorem_name(kind), s.function_name.c_str(), s.matrix.name().c_str(), s.p, s.q, s.q_prime,
                      s.p_tilde, s.w.rate().name().c_str(), s.x_grid);
    else
        std::snprintf(buf, sizeof buf, "%s f=%s matrix=%s p=%g q=%g w=%s x=%g", theorem_name(kind),
                      s.function_name.c_str(), s.matrix.name().c_str(), s.p, s.q, s.w.name().c_str(), s.x);
    return buf;
}

double pivot_entry(TheoremKind kind, const SummabilityMatrix& a, int n) {
    return kind == TheoremKind::T1 || kind == TheoremKind::T3 ? a(n, n) : a(n, 0);
}

double main_term(TheoremKind kind, const ExperimentSetup& s, int n) {
    const double a = pivot_entry(kind, s.matrix, n);
    return a > 0.0 ? a * s.w.H(a) : 0.0;
}

// E_{alpha k / 2} upper brackets, keyed by the number of exponents below the cut
class TailCache {
public:
    TailCache(const ApPolynomial& f, double p, const NormOptions& opt) : f_(f), p_(p), opt_(opt) {}

    double at(double sigma) {
        std::size_t kept = 0;
        for (const auto& t : f_.terms())
            if (t.lambda <= sigma)
                ++kept;
        auto it = cache_.find(kept);
        if (it == cache_.end())
            it = cache_.emplace(kept, best_approx_bracket(f_, sigma, p_, opt_).upper).first;
        return it->second;
    }

private:
    const ApPolynomial& f_;
    double p_;
    NormOptions opt_;
    std::map<std::size_t, double> cache_;
};

double e_term(const ExperimentSetup& s, int n, TailCache& cache) {
    NeumaierSum sum;
    for (int k = 0; k <= n; ++k) {
        const double a = s.matrix(n, k);
        if (a == 0.0)
            continue;
        sum.add(a * std::pow(cache.at(0.5 * s.f.alpha() * k), s.q));
    }
    return std::pow(std::max(sum.value(), 0.0), 1.0 / s.q);
}

void check_norm_exponents(const ExperimentSetup& s) {
    require_exponent_chain(s.p, s.q);
    if (!(s.p_tilde >= s.q) || !std::isfinite(s.p_tilde))
        throw HypothesisRefused(Hypothesis::ExponentRange, "need q <= p_tilde < inf");
    if (!(s.q_prime > 0.0 && s.q_prime <= s.q))
        throw HypothesisRefused(Hypothesis::SecondaryExponent, "q' = " + std::to_string(s.q_prime));
}

// omega(f, .)_{S^p_tilde} sampled on [1e-4, pi] as a modulus paired with the rate of w
ModulusModel tabulated_omega(const ExperimentSetup& s) {
    const auto deltas = log_grid(1e-4, pi, 29);
    const auto est = omega_modulus_sequence(s.f, deltas, s.p_tilde, s.norm_options);
    std::vector<double> values;
    values.reserve(est.size());
    for (const auto& e : est)
        values.push_back(e.value);
    if (values.back() == 0.0)
        return ModulusModel::custom([](double) { return 0.0; }, s.w.rate(), "omega");
    return ModulusModel::tabulated(deltas, std::move(values), s.w.rate());
}

} // namespace

std::vector<double> default_small_grid() { return log_grid(1e-4, 1.0, 33); }

void require_exponent_chain(double p, double q) {
    if (!std::isfinite(p) || !std::isfinite(q) || !(q > 1.0))
        throw HypothesisRefused(Hypothesis::ExponentRange, "need finite q > 1");
    const double conj = q / (q - 1.0);
    if (!(conj <= p * (1.0 + 1e-12)) || !(p <= q)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "p = %g, q = %g, q/(q-1) = %g", p, q, conj);
        throw HypothesisRefused(Hypothesis::ExponentRange, buf);
    }
}

ConditionResult check_condition_6(const ModulusModel& w, double p, double q, std::span<const double> u_grid) {
    if (!(p > 1.0 && p <= q) || !std::isfinite(q))
        throw InvalidArgument("condition needs 1 < p <= q < inf");
    const auto grid = grid_or_default(u_grid);
    const double r = p / q;
    ConditionResult out;
    for (double u : grid) {
        if (u >= pi)
            throw InvalidArgument("condition grid must lie below pi");
        const double integral = integrate_log(
            [&](double t) { return std::pow(w.w(t), p) / std::pow(t, 1.0 + r); }, u, pi, "modulus integral");
        const double left = std::pow(std::pow(u, r) * integral, 1.0 / p);
        const double right = u * w.H(u);
        if (!(right > 0.0) && left > 0.0)
            throw DegenerateModulus("rate H vanishes at u = " + std::to_string(u) + " while the modulus integral does not");
        out.ratios.emplace_back(u, safe_ratio(left, right));
    }
    finish(out);
    return out;
}

ConditionResult check_condition_7(const RateFunction& h, std::span<const double> t_grid) {
    const auto grid = grid_or_default(t_grid);
    if (grid.front() <= rate_floor)
        throw InvalidArgument("rate grid must lie above 1e-6");
    ConditionResult out;
    const double h_eps = h(rate_floor);
    double head = 0.0;
    if (h_eps > 0.0) {
        const double e = local_exponent(h_eps, h(2.0 * rate_floor));
        if (!(e > -1.0 + 1e-9))
            out.divergent = true;
        else
            head = h_eps * rate_floor / (e + 1.0);
    }
    for (double t : grid) {
        double value = inf;
        if (!out.divergent) {
            const double integral = head + integrate_log([&](double u) { return h(u); }, rate_floor, t, "rate integral");
            value = safe_ratio(integral, t * h(t));
        }
        out.ratios.emplace_back(t, value);
    }
    finish(out);
    return out;
}

ConditionResult check_lemma_1(const ModulusModel& w, double p, double q, std::span<const double> u_grid) {
    if (!check_condition_6(w, p, q, u_grid).pass)
        throw HypothesisRefused(Hypothesis::ModulusIntegral, "lemma needs the modulus integral condition");
    if (!check_condition_7(w.rate(), u_grid).pass)
        throw HypothesisRefused(Hypothesis::RateIntegral, "lemma needs the rate integral condition");
    const auto grid = grid_or_default(u_grid);
    ConditionResult out;
    const double w_eps = w.w(modulus_floor);
    double head = 0.0;
    if (w_eps > 0.0) {
        const double e = local_exponent(w_eps, w.w(2.0 * modulus_floor));
        if (!(e > 1e-9))
            out.divergent = true;
        else
            head = w_eps / e;
    }
    for (double u : grid) {
        double value = inf;
        if (!out.divergent) {
            const double integral =
                head + integrate_log([&](double t) { return w.w(t) / t; }, modulus_floor, u, "modulus over t");
            value = safe_ratio(integral, u * w.H(u));
        }
        out.ratios.emplace_back(u, value);
    }
    finish(out);
    return out;
}

double check_lemma_2(const ApPolynomial& g, double p, double q) {
    require_exponent_chain(p, q);
    if (g.empty())
        return 0.0;
    double degree = 0.0;
    NeumaierSum lhs;
    for (std::size_t i = 0; i < g.terms().size(); ++i) {
        const auto& t = g.terms()[i];
        if (std::abs(t.lambda - std::round(t.lambda)) > exponent_match_tol)
            throw InvariantViolation("periodic inequality needs integer exponents", i);
        degree = std::max(degree, t.lambda);
        if (t.lambda == 0.0) {
            lhs.add(0.5 * std::pow(std::abs(2.0 * t.coefficient.real()), q));
        } else {
            lhs.add(std::pow(std::abs(2.0 * t.coefficient.real()), q));
            lhs.add(std::pow(std::abs(2.0 * t.coefficient.imag()), q));
        }
    }
    const double xi = 1.0 / p + 1.0 / q - 1.0;
    auto integrand = [&](double t) {
        const double weight = t == 0.0 ? (xi == 0.0 ? 1.0 : 0.0) : std::pow(std::abs(t), -xi);
        return std::pow(weight * std::abs(g(t)), p);
    };
    QuadOptions opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-300;
    const double width = pi / (2.0 * std::max(degree, 1.0));
    const double left = require_converged(integrate(integrand, -pi, 0.0, opt, width), "periodic weighted norm").value;
    const double right = require_converged(integrate(integrand, 0.0, pi, opt, width), "periodic weighted norm").value;
    return safe_ratio(std::pow(lhs.value(), 1.0 / q), std::pow(left + right, 1.0 / p));
}

Lemma2Family lemma_2_family(double p, double q, std::uint64_t seed, int count, int max_degree) {
    if (count < 1 || max_degree < 0)
        throw InvalidArgument("family needs count >= 1 and max_degree >= 0");
    require_exponent_chain(p, q);
    SplitMix64 rng(seed);
    std::vector<ApPolynomial> members;
    members.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int degree = rng.uniform_int(0, max_degree);
        std::vector<ApPolynomial::Term> terms;
        terms.push_back({0.0, complex(0.5 * rng.uniform(-1.0, 1.0), 0.0)});
        for (int k = 1; k <= degree; ++k) {
            const double a = rng.uniform(-1.0, 1.0);
            const double b = rng.uniform(-1.0, 1.0);
            terms.push_back({static_cast<double>(k), complex(0.5 * a, -0.5 * b)});
        }
        members.push_back(ApPolynomial::from_terms_dropping_zeros(std::move(terms), 1.0));
    }
    Lemma2Family out;
    out.ratios = parallel_map(members.size(), [&](std::size_t i) { return check_lemma_2(members[i], p, q); });
    for (double r : out.ratios)
        out.max_ratio = std::max(out.max_ratio, r);
    return out;
}

const char* theorem_name(TheoremKind k) noexcept {
    switch (k) {
    case TheoremKind::T1: return "T1";
    case TheoremKind::T2: return "T2";
    case TheoremKind::T3: return "T3";
    case TheoremKind::T4: return "T4";
    }
    return "?";
}

GateReport check_hypotheses(TheoremKind kind, const ExperimentSetup& setup, int n_max) {
    GateReport gate;
    const bool norm = kind == TheoremKind::T3 || kind == TheoremKind::T4;
    if (norm)
        check_norm_exponents(setup);
    else
        require_exponent_chain(setup.p, setup.q);
    check_matrix(setup.matrix, n_max);
    gate.variation = classify(setup.matrix, n_max);
    check_variation(kind, gate.variation);
    if (norm) {
        check_conditions(gate, tabulated_omega(setup), setup.p, setup.q);
        return gate;
    }
    check_conditions(gate, setup.w, setup.p, setup.q);
    gate.membership = class_membership_check(setup.f, setup.x, setup.w, setup.p, 32, setup.norm_options);
    if (!gate.membership->pass) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "constant %.6g on the fine grid versus %.6g on the coarse grid",
                      gate.membership->constant, gate.membership->coarse_constant);
        throw HypothesisRefused(Hypothesis::ClassMembership, buf);
    }
    return gate;
}

BoundTerms theorem_bound(TheoremKind kind, const ExperimentSetup& setup, int n) {
    check_hypotheses(kind, setup, n);
    BoundTerms out;
    out.main = main_term(kind, setup, n);
    if (kind == TheoremKind::T1 || kind == TheoremKind::T2) {
        TailCache cache(setup.f, setup.p, setup.norm_options);
        out.e_term = e_term(setup, n, cache);
    }
    return out;
}

void apply_verdict(ExperimentReport& report) {
    report.ratio_sup = 0.0;
    report.trending_up = false;
    report.pass = false;
    if (report.rows.empty())
        return;
    bool finite = true;
    for (const auto& r : report.rows) {
        report.ratio_sup = std::max(report.ratio_sup, r.ratio);
        finite = finite && std::isfinite(r.ratio);
    }
    const double first = report.rows.front().ratio;
    const bool bounded = finite && report.ratio_sup <= 2.0 * first;
    const std::size_t m = report.rows.size();
    if (m >= 4) {
        report.trending_up = true;
        for (std::size_t i = m - 3; i < m; ++i)
            report.trending_up = report.trending_up && report.rows[i].ratio > report.rows[i - 1].ratio * (1.0 + 1e-9);
    }
    report.pass = bounded && !report.trending_up;
}

std::vector<int> default_n_list() {
    std::vector<int> out;
    for (int n = 2; n <= 512; n *= 2)
        out.push_back(n);
    return out;
}

ExperimentReport run_pointwise_experiment(TheoremKind kind, const ExperimentSetup& setup, std::span<const int> n_list) {
    if (kind != TheoremKind::T1 && kind != TheoremKind::T2)
        throw InvalidArgument("pointwise experiment runs T1 or T2");
    check_hypotheses(kind, setup, max_n(n_list));
    ExperimentReport report;
    report.kind = kind;
    report.config = echo(kind, setup);
    TailCache cache(setup.f, setup.p, setup.norm_options);
    for (int n : n_list) {
        ReportRow row;
        row.n = n;
        row.value = strong_mean(setup.f, setup.matrix, n, setup.q, setup.gamma, setup.x);
        row.bound = main_term(kind, setup, n);
        row.e_term = e_term(setup, n, cache);
        row.ratio = safe_ratio(row.value, row.bound + row.e_term);
        report.rows.push_back(row);
    }
    apply_verdict(report);
    return report;
}

ExperimentReport run_norm_experiment(TheoremKind kind, const ExperimentSetup& setup, std::span<const int> n_list) {
    if (kind != TheoremKind::T3 && kind != TheoremKind::T4)
        throw InvalidArgument("norm experiment runs T3 or T4");
    if (setup.x_grid < 2)
        throw InvalidArgument("norm experiment needs an x grid of at least 2 points");
    check_hypotheses(kind, setup, max_n(n_list));
    ExperimentReport report;
    report.kind = kind;
    report.config = echo(kind, setup);
    const double cover = quasi_period(setup.f);
    const double width = setup.f.empty() ? 0.0 : pi / std::max(setup.f.max_exponent(), 1.0);
    report.rows = parallel_map(n_list.size(), [&](std::size_t i) {
        ReportRow row;
        row.n = n_list[i];
        if (!setup.f.empty()) {
            const StrongMeanProfile profile(setup.f, setup.matrix, row.n, setup.q_prime, setup.gamma);
            row.value = stepanov_norm([&](double x) { return profile(x); }, cover, setup.p_tilde, setup.x_grid,
                                      setup.norm_options, width,
                                      [&](double lo, double hi) { return profile.cusps(lo, hi); });
        }
        row.bound = main_term(kind, setup, row.n);
        row.ratio = safe_ratio(row.value, row.bound);
        return row;
    });
    apply_verdict(report);
    return report;
}

ExperimentReport run_experiment(TheoremKind kind, const ExperimentSetup& setup, std::span<const int> n_list) {
    if (kind == TheoremKind::T1 || kind == TheoremKind::T2)
        return run_pointwise_experiment(kind, setup, n_list);
    return run_norm_experiment(kind, setup, n_list);
}

} // namespace apx
