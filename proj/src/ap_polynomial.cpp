#include "apx/ap_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "apx/error.hpp"
#include "apx/rng.hpp"

namespace apx {

namespace {

// e^{i theta} - 1 without cancellation for small theta.
complex expm1_i(double theta) {
    const double s = std::sin(0.5 * theta);
    return complex(0.0, 2.0 * s) * std::polar(1.0, 0.5 * theta);
}

} // namespace

ApPolynomial::ApPolynomial(std::vector<Term> terms, double alpha) : terms_(std::move(terms)), alpha_(alpha) {
    validate();
    if (!terms_.empty() && terms_.front().lambda == 0.0)
        terms_.front().coefficient = complex(terms_.front().coefficient.real(), 0.0);
}

ApPolynomial ApPolynomial::zero(double alpha) { return ApPolynomial({}, alpha); }

ApPolynomial ApPolynomial::from_terms_dropping_zeros(std::vector<Term> terms, double alpha) {
    std::erase_if(terms, [](const Term& t) { return t.coefficient == complex(0.0, 0.0); });
    return ApPolynomial(std::move(terms), alpha);
}

void ApPolynomial::validate() const {
    if (!std::isfinite(alpha_) || alpha_ <= 0.0)
        throw InvalidArgument("alpha must be finite and positive");
    const double gap_floor = alpha_ * (1.0 - 1e-12);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const Term& t = terms_[i];
        if (!std::isfinite(t.lambda) || t.lambda < 0.0)
            throw InvariantViolation("exponent must be finite and nonnegative", i);
        if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
            throw InvariantViolation("coefficient must be finite", i);
        if (std::abs(t.coefficient) == 0.0)
            throw InvariantViolation("stored coefficient must be nonzero", i);
        if (t.lambda == 0.0) {
            if (i != 0)
                throw InvariantViolation("exponents must be strictly increasing", i);
            if (std::abs(t.coefficient.imag()) > 1e-12)
                throw InvariantViolation("constant coefficient must be real", i);
        }
        if (i > 0) {
            const double prev = terms_[i - 1].lambda;
            if (t.lambda <= prev)
                throw InvariantViolation("exponents must be strictly increasing", i);
            if (t.lambda - prev < gap_floor)
                throw InvariantViolation("exponent gap below alpha", i);
        }
    }
}

double ApPolynomial::max_exponent() const noexcept { return terms_.empty() ? 0.0 : terms_.back().lambda; }

double ApPolynomial::min_gap() const noexcept {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < terms_.size(); ++i)
        gap = std::min(gap, terms_[i].lambda - terms_[i - 1].lambda);
    return gap;
}

double ApPolynomial::constant() const noexcept {
    return (!terms_.empty() && terms_.front().lambda == 0.0) ? terms_.front().coefficient.real() : 0.0;
}

double ApPolynomial::coefficient_l1() const noexcept {
    double s = 0.0;
    for (const Term& t : terms_)
        s += (t.lambda == 0.0 ? 1.0 : 2.0) * std::abs(t.coefficient);
    return s;
}

double ApPolynomial::operator()(double x) const { return eval(*this, x); }

ApPolynomial ApPolynomial::scaled(double c) const {
    if (!std::isfinite(c))
        throw InvalidArgument("scale factor must be finite");
    std::vector<Term> out;
    if (c != 0.0) {
        out.reserve(terms_.size());
        for (const Term& t : terms_)
            out.push_back({t.lambda, c * t.coefficient});
    }
    return ApPolynomial(std::move(out), alpha_);
}

ApPolynomial ApPolynomial::shifted_difference(double t) const {
    if (!std::isfinite(t))
        throw InvalidArgument("shift must be finite");
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const Term& term : terms_)
        out.push_back({term.lambda, term.coefficient * expm1_i(term.lambda * t)});
    return from_terms_dropping_zeros(std::move(out), alpha_);
}

ApPolynomial ApPolynomial::tail_above(double sigma) const {
    if (!(sigma >= 0.0))
        throw InvalidArgument("spectral cut must be nonnegative");
    std::vector<Term> out;
    for (const Term& t : terms_)
        if (t.lambda > sigma)
            out.push_back(t);
    return ApPolynomial(std::move(out), alpha_);
}

ApPolynomial ApPolynomial::operator+(const ApPolynomial& other) const {
    std::vector<Term> merged;
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < other.terms_.size()) {
        if (j == other.terms_.size()
            || (i < terms_.size() && terms_[i].lambda < other.terms_[j].lambda - exponent_match_tol)) {
            merged.push_back(terms_[i++]);
        } else if (i == terms_.size() || other.terms_[j].lambda < terms_[i].lambda - exponent_match_tol) {
            merged.push_back(other.terms_[j++]);
        } else {
            merged.push_back({terms_[i].lambda, terms_[i].coefficient + other.terms_[j].coefficient});
            ++i;
            ++j;
        }
    }
    return from_terms_dropping_zeros(std::move(merged), std::min(alpha_, other.alpha_));
}

double eval(const ApPolynomial& f, double x) {
    if (!std::isfinite(x))
        throw InvalidArgument("evaluation point must be finite");
    complex sum = 0.0;
    for (const auto& t : f.terms()) {
        if (t.lambda == 0.0) {
            sum += t.coefficient;
            continue;
        }
        const complex e = std::polar(1.0, t.lambda * x);
        sum += t.coefficient * e + std::conj(t.coefficient) * std::conj(e);
    }
    if (std::abs(sum.imag()) > 1e-12)
        throw NumericFailure("imaginary residue in real-valued evaluation");
    return sum.real();
}

complex bohr_coefficient(const ApPolynomial& f, double lambda) {
    const double key = std::abs(lambda);
    for (const auto& t : f.terms()) {
        if (std::abs(t.lambda - key) <= exponent_match_tol)
            return lambda < 0.0 ? std::conj(t.coefficient) : t.coefficient;
    }
    return 0.0;
}

double partial_sum_direct(const ApPolynomial& f, double gamma, double x) {
    if (!(gamma >= 0.0))
        throw InvalidArgument("partial sum cut gamma must be nonnegative");
    if (!std::isfinite(x))
        throw InvalidArgument("evaluation point must be finite");
    double sum = 0.0;
    for (const auto& t : f.terms()) {
        if (t.lambda > gamma)
            break;
        if (t.lambda == 0.0)
            sum += t.coefficient.real();
        else
            sum += 2.0 * (t.coefficient * std::polar(1.0, t.lambda * x)).real();
    }
    return sum;
}

StarPartialSum star_partial_sum(const ApPolynomial& f, int k, double x) {
    if (k < 0)
        throw InvalidArgument("star partial sum index must be nonnegative");
    const double lo = 0.5 * f.alpha() * k;
    const double hi = 0.5 * f.alpha() * (k + 1);
    StarPartialSum out;
    out.value = partial_sum_direct(f, lo, x);
    for (const auto& t : f.terms()) {
        if (t.lambda == 0.0)
            continue;
        if (std::abs(t.lambda - lo) <= exponent_match_tol || std::abs(t.lambda - hi) <= exponent_match_tol)
            out.endpoint_coincidence = true;
        else if (t.lambda > lo && t.lambda < hi)
            out.interval_has_exponent = true;
    }
    return out;
}

SymmetricDifference::SymmetricDifference(const ApPolynomial& base, double x) : base_(base), x_(x) {
    if (!std::isfinite(x))
        throw InvalidArgument("center must be finite");
    for (const auto& t : base_.terms()) {
        if (t.lambda == 0.0)
            continue;
        lambda_.push_back(t.lambda);
        weight_.push_back(4.0 * (t.coefficient * std::polar(1.0, t.lambda * x)).real());
    }
}

double SymmetricDifference::operator()(double t) const noexcept {
    double sum = 0.0;
    for (std::size_t j = 0; j < lambda_.size(); ++j) {
        const double s = std::sin(0.5 * lambda_[j] * t);
        sum -= 2.0 * weight_[j] * s * s;
    }
    return sum;
}

double SymmetricDifference::literal(double t) const { return eval(base_, x_ + t) + eval(base_, x_ - t) - 2.0 * eval(base_, x_); }

ApPolynomial SymmetricDifference::as_polynomial() const {
    std::vector<ApPolynomial::Term> terms;
    double constant = 0.0;
    for (double w : weight_)
        constant -= w;
    terms.push_back({0.0, complex(constant, 0.0)});
    double alpha = base_.alpha();
    for (std::size_t j = 0; j < lambda_.size(); ++j)
        terms.push_back({lambda_[j], complex(0.5 * weight_[j], 0.0)});
    if (!lambda_.empty())
        alpha = std::min(alpha, lambda_.front());
    return ApPolynomial::from_terms_dropping_zeros(std::move(terms), alpha);
}

double SymmetricDifference::bound() const noexcept {
    double b = 0.0;
    for (double w : weight_)
        b += 2.0 * std::abs(w);
    return b;
}

ApPolynomial lacunary(double beta, int levels, double alpha) {
    if (levels < 0)
        throw InvalidArgument("lacunary level count must be nonnegative");
    std::vector<ApPolynomial::Term> terms;
    for (int j = 0; j <= levels; ++j)
        terms.push_back({std::ldexp(alpha, j), complex(0.5 * std::pow(2.0, -j * beta), 0.0)});
    return ApPolynomial(std::move(terms), alpha);
}

std::vector<NamedFunction> make_test_corpus(std::uint64_t seed) {
    using Term = ApPolynomial::Term;
    std::vector<NamedFunction> corpus;
    corpus.push_back({"cos", ApPolynomial({{1.0, 0.5}}, 1.0)});
    corpus.push_back({"sin", ApPolynomial({{1.0, complex(0.0, -0.5)}}, 1.0)});
    corpus.push_back({"cos_half", ApPolynomial({{0.5, 0.5}}, 0.5)});
    corpus.push_back({"two_tone", ApPolynomial({{1.0, 0.5}, {std::numbers::sqrt2, 0.5}}, 0.4)});
    corpus.push_back({"lacunary_b0.2", lacunary(0.2, 8)});
    corpus.push_back({"lacunary_b0.4", lacunary(0.4, 8)});

    SplitMix64 rng(seed);
    for (int m = 0; m < 2; ++m) {
        const double alpha = 0.75;
        std::vector<Term> terms;
        terms.push_back({0.0, complex(rng.uniform(-0.5, 0.5), 0.0)});
        double lambda = 0.0;
        const int count = 3 + rng.uniform_int(0, 2);
        for (int j = 0; j < count; ++j) {
            lambda += alpha * (1.0 + rng.uniform(0.0, 1.5));
            terms.push_back({lambda, complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))});
        }
        corpus.push_back({"random_" + std::to_string(m), ApPolynomial::from_terms_dropping_zeros(std::move(terms), alpha)});
    }
    return corpus;
}

std::optional<ApPolynomial> corpus_member(const std::string& name, std::uint64_t seed) {
    for (auto& member : make_test_corpus(seed))
        if (member.name == name)
            return member.function;
    return std::nullopt;
}

} // namespace apx
