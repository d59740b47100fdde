#ifndef APX_VERIFY_HPP
#define APX_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apx/ap_polynomial.hpp"
#include "apx/modulus_model.hpp"
#include "apx/norms.hpp"
#include "apx/summability.hpp"

namespace apx {

struct ConditionResult {
    /// max over the grid of left side / right side
    double constant = 0.0;
    bool pass = false;
    /// the integral near 0 diverges
    bool divergent = false;
    /// (grid point, ratio) in ascending grid order
    std::vector<std::pair<double, double>> ratios;
};

/// A ratio sequence is stable when it grows by at most this factor over the
/// smallest decade of the grid.
inline constexpr double stability_growth_limit = 1.1;

/// Default grid: 33 log-spaced points in [1e-4, 1].
std::vector<double> default_small_grid();

/// Throws HypothesisRefused(ExponentRange) unless 1 < q/(q-1) <= p <= q.
void require_exponent_chain(double p, double q);

/// sup over the grid of { u^{p/q} int_u^pi w(t)^p / t^{1+p/q} dt }^{1/p} / (u H(u)).
ConditionResult check_condition_6(const ModulusModel& w, double p, double q, std::span<const double> u_grid = {});

/// sup over the grid of int_0^t H(u) du / (t H(t)); H is extrapolated as a power law below 1e-6.
ConditionResult check_condition_7(const RateFunction& h, std::span<const double> t_grid = {});

/// sup over the grid of int_0^u w(t)/t dt / (u H(u)). Refuses unless the two
/// conditions above pass for (w, p, q).
ConditionResult check_lemma_1(const ModulusModel& w, double p, double q, std::span<const double> u_grid = {});

/// LHS / RHS of the weighted Hardy-Littlewood coefficient inequality for a
/// 2 pi-periodic g with integer exponents; 0 for g == 0.
double check_lemma_2(const ApPolynomial& g, double p, double q);

struct Lemma2Family {
    double max_ratio = 0.0;
    std::vector<double> ratios;
};

/// Coefficient-inequality ratios over `count` seeded random polynomials of degree <= max_degree
/// with coefficients in [-1, 1].
Lemma2Family lemma_2_family(double p, double q, std::uint64_t seed, int count = 64, int max_degree = 16);

enum class TheoremKind { T1, T2, T3, T4 };

const char* theorem_name(TheoremKind k) noexcept;

/// Inputs shared by all four rate experiments.
struct ExperimentSetup {
    std::string function_name = "f";
    ApPolynomial f = ApPolynomial::zero();
    SummabilityMatrix matrix = builtin_matrix("cesaro");
    double p = 2.0;
    double q = 2.0;
    ModulusModel w = ModulusModel::power_law(1.0, 0.25);
    GammaSpec gamma = GammaSpec::half_alpha();
    /// pointwise experiments
    double x = 0.0;
    /// norm experiments
    double q_prime = 2.0;
    double p_tilde = 2.0;
    std::size_t x_grid = 64;
    NormOptions norm_options;
};

struct GateReport {
    VariationReport variation;
    ConditionResult condition_6;
    ConditionResult condition_7;
    std::optional<MembershipResult> membership;
};

/// Runs every hypothesis of the theorem up to row n_max; throws HypothesisRefused
/// naming the first one that fails.
GateReport check_hypotheses(TheoremKind kind, const ExperimentSetup& setup, int n_max);

struct BoundTerms {
    /// a_{nn} H(a_{nn}) (T1, T3) or a_{n0} H(a_{n0}) (T2, T4)
    double main = 0.0;
    /// { sum_k a_{nk} E_{alpha k/2}(f)^q }^{1/q} for T1/T2, 0 for T3/T4
    double e_term = 0.0;
    double total() const noexcept { return main + e_term; }
};

/// Right-hand side of the rate estimate after the hypotheses are verified.
BoundTerms theorem_bound(TheoremKind kind, const ExperimentSetup& setup, int n);

struct ReportRow {
    int n = 0;
    double value = 0.0;
    double bound = 0.0;
    double e_term = 0.0;
    double ratio = 0.0;
};

struct ExperimentReport {
    TheoremKind kind = TheoremKind::T1;
    std::vector<ReportRow> rows;
    double ratio_sup = 0.0;
    bool trending_up = false;
    bool pass = false;
    /// one-line echo of the configuration
    std::string config;
};

/// PASS iff every ratio is <= 2 * ratio(first row) and the ratio does not
/// increase over each of the last three doublings.
void apply_verdict(ExperimentReport& report);

/// Default n list: 2, 4, ..., 512.
std::vector<int> default_n_list();

/// Strong mean at x versus the pointwise bound (T1 or T2).
ExperimentReport run_pointwise_experiment(TheoremKind kind, const ExperimentSetup& setup, std::span<const int> n_list);

/// Stepanov S^{p_tilde} norm of x -> H^{q'}_n f(x) versus the norm bound (T3 or T4).
ExperimentReport run_norm_experiment(TheoremKind kind, const ExperimentSetup& setup, std::span<const int> n_list);

/// Dispatches on kind.
ExperimentReport run_experiment(TheoremKind kind, const ExperimentSetup& setup, std::span<const int> n_list);

} // namespace apx

#endif
