#ifndef APX_AP_POLYNOMIAL_HPP
#define APX_AP_POLYNOMIAL_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace apx {

using complex = std::complex<double>;

/// Exponents closer than this are treated as the same frequency.
inline constexpr double exponent_match_tol = 1e-9;

/*
 * Real-valued almost periodic trigonometric sum
 *
 *     f(x) = sum_nu A_nu exp(i lambda_nu x),   lambda_{-nu} = -lambda_nu,
 *                                              A_{-nu} = conj(A_nu).
 *
 * Only the one-sided spectrum (lambda >= 0) is stored, in strictly increasing
 * order. A lambda = 0 entry, when present, must carry a real coefficient.
 * Consecutive positive exponents, and the first positive exponent when the
 * constant term is stored, are separated by at least `alpha`.
 */
class ApPolynomial {
public:
    struct Term {
        double lambda;
        complex coefficient;
    };

    /// Validates every invariant; throws InvariantViolation naming the first bad term.
    ApPolynomial(std::vector<Term> terms, double alpha);

    /// The zero function (empty spectrum).
    static ApPolynomial zero(double alpha = 1.0);

    /// Assembles a spectrum, dropping exactly-zero coefficients first.
    static ApPolynomial from_terms_dropping_zeros(std::vector<Term> terms, double alpha);

    std::span<const Term> terms() const noexcept { return terms_; }
    double alpha() const noexcept { return alpha_; }
    bool empty() const noexcept { return terms_.empty(); }

    /// Largest stored exponent (0 for the zero function).
    double max_exponent() const noexcept;

    /// Smallest gap between consecutive stored exponents (including 0 -> lambda_1
    /// when the constant is stored). Returns +inf for fewer than two exponents.
    double min_gap() const noexcept;

    /// Constant (lambda = 0) coefficient; 0 when not stored.
    double constant() const noexcept;

    /// sum_nu |A_nu| over the full symmetric spectrum; a bound for sup |f|.
    double coefficient_l1() const noexcept;

    double operator()(double x) const;

    ApPolynomial scaled(double c) const;

    /// f(. + t) - f(.), with coefficients A_nu (exp(i lambda_nu t) - 1).
    ApPolynomial shifted_difference(double t) const;

    /// The spectral tail sum_{|lambda| > sigma} A_nu exp(i lambda_nu x).
    ApPolynomial tail_above(double sigma) const;

    /// Term-wise sum; throws when the merged spectrum breaks the gap of min(alpha, other.alpha).
    ApPolynomial operator+(const ApPolynomial& other) const;

private:
    ApPolynomial() = default;
    void validate() const;

    std::vector<Term> terms_;
    double alpha_ = 1.0;
};

/// f evaluated at x as the full symmetric complex sum; throws on a non-finite x.
double eval(const ApPolynomial& f, double x);

/// Bohr mean-value coefficient at frequency lambda (exact lookup for finite sums).
complex bohr_coefficient(const ApPolynomial& f, double lambda);

/// S_gamma f(x): sum over |lambda_nu| <= gamma. Throws InvalidArgument for gamma < 0.
double partial_sum_direct(const ApPolynomial& f, double gamma, double x);

struct StarPartialSum {
    double value = 0.0;
    /// An exponent lies strictly inside (alpha k / 2, alpha (k + 1) / 2).
    bool interval_has_exponent = false;
    /// An exponent lies within exponent_match_tol of one of the interval endpoints.
    bool endpoint_coincidence = false;
};

/// S_{alpha k / 2} f(x) plus the empty-interval diagnostics for index k.
StarPartialSum star_partial_sum(const ApPolynomial& f, int k, double x);

/// phi_x(t) = f(x + t) + f(x - t) - 2 f(x), evaluated in a cancellation-free form.
class SymmetricDifference {
public:
    SymmetricDifference(const ApPolynomial& base, double x);

    double operator()(double t) const noexcept;

    /// Direct three-evaluation form, for cross-checking.
    double literal(double t) const;

    double center() const noexcept { return x_; }

    /// phi_x as a trigonometric sum in t (constant -sum_j weight_j, cosines weight_j).
    ApPolynomial as_polynomial() const;

    /// phi_x(t) = sum_j weight_j (cos(lambda_j t) - 1).
    std::span<const double> frequencies() const noexcept { return lambda_; }
    std::span<const double> weights() const noexcept { return weight_; }

    /// sup_t |phi_x(t)| <= sum_j 2 |weight_j|.
    double bound() const noexcept;

private:
    ApPolynomial base_;
    double x_;
    std::vector<double> lambda_;
    std::vector<double> weight_;
};

struct NamedFunction {
    std::string name;
    ApPolynomial function;
};

/// Deterministic test corpus: single harmonics, an irrational two-tone sum,
/// lacunary sums for beta in {0.2, 0.4}, plus seeded random gap-constrained sums.
std::vector<NamedFunction> make_test_corpus(std::uint64_t seed);

/// sum_{j=0}^{levels} 2^{-j beta} cos(2^j alpha x).
ApPolynomial lacunary(double beta, int levels, double alpha = 1.0);

/// Finds a corpus member by name.
std::optional<ApPolynomial> corpus_member(const std::string& name, std::uint64_t seed = 0);

} // namespace apx

#endif
