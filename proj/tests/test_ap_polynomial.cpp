#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apx/ap_polynomial.hpp"
#include "apx/error.hpp"
#include "apx/rng.hpp"

using namespace apx;
using Catch::Matchers::WithinAbs;

namespace {

// sum over the stored one-sided spectrum written out in cos/sin form
double real_form(const ApPolynomial& f, double x) {
    double s = 0.0;
    for (const auto& t : f.terms()) {
        if (t.lambda == 0.0)
            s += t.coefficient.real();
        else
            s += 2.0 * t.coefficient.real() * std::cos(t.lambda * x) - 2.0 * t.coefficient.imag() * std::sin(t.lambda * x);
    }
    return s;
}

ApPolynomial random_member(SplitMix64& rng) {
    std::vector<ApPolynomial::Term> terms{{0.0, complex(rng.uniform(-1.0, 1.0), 0.0)}};
    double lambda = 0.0;
    for (int j = 0; j < 5; ++j) {
        lambda += 0.5 + rng.uniform(0.0, 2.0);
        terms.push_back({lambda, complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))});
    }
    return ApPolynomial(std::move(terms), 0.5);
}

} // namespace

TEST_CASE("evaluation matches the cosine-sine form", "[ap_polynomial]") {
    SplitMix64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const auto f = random_member(rng);
        for (double x : {-7.3, 0.0, 0.4, 3.0, 112.5})
            CHECK_THAT(eval(f, x), WithinAbs(real_form(f, x), 1e-12));
    }
    CHECK_THAT(eval(ApPolynomial({{1.0, complex(0.0, -0.5)}}, 1.0), 0.7), WithinAbs(std::sin(0.7), 1e-15));
}

TEST_CASE("constructor reports the first broken invariant with its index", "[ap_polynomial]") {
    using T = ApPolynomial::Term;
    auto index_of = [](std::vector<T> terms, double alpha) -> std::size_t {
        try {
            ApPolynomial f(std::move(terms), alpha);
        } catch (const InvariantViolation& e) {
            return e.index();
        }
        return 999;
    };
    CHECK(index_of({{1.0, 0.5}, {1.5, 0.5}}, 1.0) == 1);
    CHECK(index_of({{1.0, 0.5}, {2.0, 0.0}}, 1.0) == 1);
    CHECK(index_of({{0.0, complex(1.0, 0.5)}}, 1.0) == 0);
    CHECK(index_of({{0.0, 1.0}, {0.5, 1.0}}, 1.0) == 1);
    CHECK(index_of({{2.0, 1.0}, {1.0, 1.0}}, 0.5) == 1);
    CHECK(index_of({{-1.0, 1.0}}, 0.5) == 0);
    CHECK_THROWS_AS(ApPolynomial({{1.0, 1.0}}, 0.0), InvalidArgument);
    CHECK_NOTHROW(ApPolynomial({{0.25, 1.0}, {1.25, 1.0}}, 1.0));
}

TEST_CASE("partial sums", "[ap_polynomial]") {
    SplitMix64 rng(5);
    const auto f = random_member(rng);
    // same spectrum as f, fresh coefficients
    std::vector<ApPolynomial::Term> g_terms(f.terms().begin(), f.terms().end());
    for (auto& t : g_terms)
        t.coefficient = t.lambda == 0.0 ? complex(rng.uniform(-1.0, 1.0), 0.0)
                                        : complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const ApPolynomial g(std::move(g_terms), f.alpha());
    for (double x : {-2.0, 0.3, 9.0}) {
        CHECK_THAT(partial_sum_direct(f, f.max_exponent(), x), WithinAbs(eval(f, x), 1e-12));
        CHECK_THAT(partial_sum_direct(f, 0.0, x), WithinAbs(f.constant(), 1e-15));
    }
    CHECK_THROWS_AS(partial_sum_direct(f, -0.1, 0.0), InvalidArgument);

    SECTION("linearity in f") {
        const auto sum = f.scaled(2.0) + g.scaled(-3.0);
        for (double gamma : {0.0, 1.0, 2.5, 7.0})
            for (double x : {-1.0, 0.0, 4.2})
                CHECK_THAT(partial_sum_direct(sum, gamma, x),
                           WithinAbs(2.0 * partial_sum_direct(f, gamma, x) - 3.0 * partial_sum_direct(g, gamma, x), 1e-12));
    }

    SECTION("endpoint is inclusive") {
        const ApPolynomial c({{1.0, 0.5}}, 1.0);
        CHECK_THAT(partial_sum_direct(c, 1.0, 0.0), WithinAbs(1.0, 1e-15));
        CHECK_THAT(partial_sum_direct(c, 1.0 - 1e-6, 0.0), WithinAbs(0.0, 1e-15));
    }
}

TEST_CASE("star partial sum flags intervals holding an exponent", "[ap_polynomial]") {
    const ApPolynomial f({{0.75, 0.5}, {2.0, 0.5}}, 1.0);
    // intervals (k/2, (k+1)/2): 0.75 lies in k = 1, 2.0 is an endpoint of k = 3 and k = 4
    CHECK_FALSE(star_partial_sum(f, 0, 0.0).interval_has_exponent);
    CHECK(star_partial_sum(f, 1, 0.0).interval_has_exponent);
    const auto k3 = star_partial_sum(f, 3, 0.0);
    CHECK_FALSE(k3.interval_has_exponent);
    CHECK(k3.endpoint_coincidence);
    CHECK_THAT(star_partial_sum(f, 2, 0.0).value, WithinAbs(1.0, 1e-15));
    CHECK_THAT(star_partial_sum(f, 4, 0.0).value, WithinAbs(2.0, 1e-15));
}

TEST_CASE("Bohr coefficients", "[ap_polynomial]") {
    const ApPolynomial f({{0.0, 0.25}, {1.0, complex(0.5, -0.25)}}, 1.0);
    CHECK(bohr_coefficient(f, 1.0) == complex(0.5, -0.25));
    CHECK(bohr_coefficient(f, -1.0) == complex(0.5, 0.25));
    CHECK(bohr_coefficient(f, 0.0) == complex(0.25, 0.0));
    CHECK(bohr_coefficient(f, 1.0 + 5e-10) == complex(0.5, -0.25));
    CHECK(bohr_coefficient(f, 1.5) == complex(0.0, 0.0));

    SECTION("numeric mean over a long window agrees with the stored value") {
        constexpr double L = 2e3;
        for (const auto& [name, g] : make_test_corpus(0)) {
            double max_a = 0.0;
            for (const auto& t : g.terms())
                max_a = std::max(max_a, std::abs(t.coefficient));
            // smallest distance within the symmetric spectrum
            std::vector<double> freqs;
            for (const auto& t : g.terms()) {
                freqs.push_back(t.lambda);
                if (t.lambda > 0.0)
                    freqs.push_back(-t.lambda);
            }
            std::sort(freqs.begin(), freqs.end());
            double gap = 1e300;
            for (std::size_t i = 1; i < freqs.size(); ++i)
                gap = std::min(gap, freqs[i] - freqs[i - 1]);
            const double bound = 10.0 * max_a / L / gap;
            for (const auto& t : g.terms()) {
                // midpoint rule over [0, L], 6 nodes per shortest period
                const double top = g.max_exponent() + t.lambda;
                const auto n = static_cast<std::size_t>(6.0 * L * top / (2.0 * std::numbers::pi)) + 1;
                const double h = L / static_cast<double>(n);
                complex acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double s = (static_cast<double>(i) + 0.5) * h;
                    acc += eval(g, s) * std::polar(1.0, -t.lambda * s);
                }
                acc *= h / L;
                INFO(name << " lambda " << t.lambda);
                CHECK(std::abs(acc - bohr_coefficient(g, t.lambda)) <= bound + 1e-9);
            }
        }
    }
}

TEST_CASE("symmetric difference", "[ap_polynomial]") {
    SplitMix64 rng(3);
    const auto f = random_member(rng);
    for (double x : {0.0, 1.7}) {
        const SymmetricDifference phi(f, x);
        const auto poly = phi.as_polynomial();
        for (double t : {0.0, 1e-7, 0.3, 2.0, 40.0}) {
            const double direct = eval(f, x + t) + eval(f, x - t) - 2.0 * eval(f, x);
            CHECK_THAT(phi(t), WithinAbs(direct, 1e-12));
            CHECK_THAT(phi.literal(t), WithinAbs(direct, 1e-12));
            CHECK_THAT(eval(poly, t), WithinAbs(direct, 1e-12));
            CHECK(std::abs(phi(t)) <= phi.bound() + 1e-12);
        }
        CHECK(phi(0.0) == 0.0);
    }
}

TEST_CASE("shifted difference and tail", "[ap_polynomial]") {
    SplitMix64 rng(8);
    const auto f = random_member(rng);
    const auto d = f.shifted_difference(0.4);
    const auto tail = f.tail_above(1.0);
    for (double x : {-3.0, 0.0, 2.2}) {
        CHECK_THAT(eval(d, x), WithinAbs(eval(f, x + 0.4) - eval(f, x), 1e-12));
        CHECK_THAT(eval(tail, x), WithinAbs(eval(f, x) - partial_sum_direct(f, 1.0, x), 1e-12));
    }
}

TEST_CASE("test corpus is deterministic and lacunary weights decay", "[ap_polynomial]") {
    const auto a = make_test_corpus(42);
    const auto b = make_test_corpus(42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].function.terms().size() == b[i].function.terms().size());
        for (std::size_t j = 0; j < a[i].function.terms().size(); ++j) {
            CHECK(a[i].function.terms()[j].lambda == b[i].function.terms()[j].lambda);
            CHECK(a[i].function.terms()[j].coefficient == b[i].function.terms()[j].coefficient);
        }
    }
    const auto lac = lacunary(0.2, 8);
    REQUIRE(lac.terms().size() == 9);
    for (std::size_t j = 0; j < 9; ++j) {
        CHECK(lac.terms()[j].lambda == std::ldexp(1.0, static_cast<int>(j)));
        CHECK_THAT(2.0 * lac.terms()[j].coefficient.real(), WithinAbs(std::pow(2.0, -0.2 * static_cast<double>(j)), 1e-15));
    }
    CHECK(corpus_member("two_tone").has_value());
    CHECK_FALSE(corpus_member("missing").has_value());
}
