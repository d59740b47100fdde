#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "apx/ap_polynomial.hpp"
#include "apx/error.hpp"
#include "apx/norms.hpp"

using namespace apx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

ApPolynomial cos_x() { return ApPolynomial({{1.0, 0.5}}, 1.0); }
ApPolynomial sin_x() { return ApPolynomial({{1.0, complex(0.0, -0.5)}}, 1.0); }

} // namespace

TEST_CASE("Stepanov norms of single harmonics", "[norms]") {
    CHECK_THAT(stepanov_norm(sin_x(), 2.0), WithinAbs(inv_sqrt2, 1e-6));
    CHECK_THAT(stepanov_norm(cos_x(), 2.0), WithinAbs(inv_sqrt2, 1e-6));
    // |cos|^3 has period pi, so every window mean is (1/pi) int_0^pi |cos|^3 = 4 / (3 pi)
    CHECK_THAT(stepanov_norm(cos_x(), 3.0), WithinRel(std::cbrt(4.0 / (3.0 * pi)), 1e-7));
    // constant c: every window mean is |c|^p
    const ApPolynomial c({{0.0, -1.5}}, 1.0);
    CHECK_THAT(stepanov_norm(c, 1.5), WithinRel(1.5, 1e-9));
    CHECK(stepanov_norm(ApPolynomial::zero(), 2.0) == 0.0);
    CHECK_THROWS_AS(stepanov_norm(cos_x(), 1.0), InvalidArgument);
}

TEST_CASE("closed-form p = 2 window agrees with quadrature", "[norms]") {
    NormOptions generic;
    generic.exact_p2 = false;
    for (const char* name : {"two_tone", "random_0", "cos_half"}) {
        const auto f = *corpus_member(name);
        INFO(name);
        CHECK_THAT(stepanov_norm(f, 2.0, generic), WithinRel(stepanov_norm(f, 2.0), 1e-7));
        for (double u : {0.0, 1.3, 7.9})
            CHECK_THAT(window_mean(f, u, 2.0, generic), WithinRel(window_mean(f, u, 2.0), 1e-8));
    }
}

TEST_CASE("Besicovitch norm is the Parseval value for p = 2", "[norms]") {
    CHECK_THAT(besicovitch_norm(cos_x(), 2.0), WithinAbs(inv_sqrt2, 1e-4));
    const auto two_tone = *corpus_member("two_tone");
    CHECK_THAT(besicovitch_norm(two_tone, 2.0), WithinAbs(1.0, 1e-4));
    CHECK_THAT(parseval_norm(two_tone), WithinAbs(1.0, 1e-15));
    // M|cos|^1 = 2 / pi
    CHECK_THAT(besicovitch_norm(cos_x(), 1.0), WithinAbs(2.0 / pi, 1e-4));
}

TEST_CASE("sup norm", "[norms]") {
    CHECK_THAT(sup_norm(cos_x()), WithinAbs(1.0, 1e-10));
    // cos x + cos(sqrt 2 x) comes arbitrarily close to 2 without reaching it
    const double two = sup_norm(*corpus_member("two_tone"));
    CHECK(two >= 1.99);
    CHECK(two <= 2.0);
    const auto f = *corpus_member("random_1");
    const double s = sup_norm(f);
    CHECK(s <= f.coefficient_l1() + 1e-12);
    for (double x = 0.0; x < quasi_period(f); x += 0.01)
        CHECK(std::abs(eval(f, x)) <= s + 1e-8);
}

TEST_CASE("norm ordering over the corpus", "[norms]") {
    for (const auto& [name, f] : make_test_corpus(0)) {
        INFO(name);
        const double b = parseval_norm(f);
        const double s = stepanov_norm(f, 2.0);
        CHECK(s >= b - 1e-9);
        CHECK(s <= sup_norm(f) + 1e-9);
    }
}

TEST_CASE("absolute homogeneity", "[norms]") {
    const auto f = *corpus_member("random_0");
    const auto g = f.scaled(-2.5);
    CHECK_THAT(stepanov_norm(g, 2.0), WithinRel(2.5 * stepanov_norm(f, 2.0), 1e-9));
    CHECK_THAT(stepanov_norm(g, 3.0), WithinRel(2.5 * stepanov_norm(f, 3.0), 1e-9));
    CHECK_THAT(sup_norm(g), WithinRel(2.5 * sup_norm(f), 1e-9));
    CHECK_THAT(omega_modulus(g, 0.5, 2.0), WithinRel(2.5 * omega_modulus(f, 0.5, 2.0), 1e-9));
    CHECK_THAT(wx_modulus(g, 0.3, 0.5, 2.0), WithinRel(2.5 * wx_modulus(f, 0.3, 0.5, 2.0), 1e-9));
}

TEST_CASE("quasi-period", "[norms]") {
    CHECK_THAT(quasi_period(cos_x()), WithinRel(2.0 * pi, 1e-15));
    CHECK_THAT(quasi_period(*corpus_member("cos_half")), WithinRel(4.0 * pi, 1e-15));
    const ApPolynomial mixed({{2.0, 0.5}, {3.0, 0.5}}, 1.0);
    CHECK(has_common_period(mixed));
    CHECK_THAT(quasi_period(mixed), WithinRel(2.0 * pi, 1e-12));
    const auto two_tone = *corpus_member("two_tone");
    CHECK_FALSE(has_common_period(two_tone));
    CHECK_THAT(quasi_period(two_tone), WithinRel(2.0 * pi * (1.0 + 1.0 / (std::numbers::sqrt2 - 1.0)), 1e-12));
}

TEST_CASE("Stepanov modulus of continuity", "[norms]") {
    // || sin(. + t) - sin ||_{S^2} = sqrt(2) |sin(t / 2)|
    for (double delta : {0.1, 0.5, 1.0})
        CHECK_THAT(omega_modulus(sin_x(), delta, 2.0), WithinAbs(std::numbers::sqrt2 * std::sin(0.5 * delta), 1e-5));

    const auto f = *corpus_member("lacunary_b0.4");
    const auto deltas = log_grid(1e-3, 1.0, 10);
    const auto seq = omega_modulus_sequence(f, deltas, 2.0);
    for (std::size_t i = 1; i < seq.size(); ++i)
        CHECK(seq[i].value >= seq[i - 1].value);
    CHECK_THROWS_AS(omega_modulus(sin_x(), 0.0, 2.0), InvalidArgument);
}

TEST_CASE("pointwise modulus", "[norms]") {
    // cos at x = 0: phi(t) = 2 (cos t - 1), so int_0^d phi^2 = 4 (3 d / 2 - 2 sin d + sin(2 d) / 4)
    for (double d : {0.05, 0.5, 2.0, pi}) {
        const double exact = std::sqrt(4.0 * (1.5 * d - 2.0 * std::sin(d) + 0.25 * std::sin(2.0 * d)) / d);
        CHECK_THAT(wx_modulus(cos_x(), 0.0, d, 2.0), WithinRel(exact, 1e-8));
    }
    // nondecreasing while |phi| grows, i.e. up to pi
    const auto seq = wx_modulus_sequence(cos_x(), 0.0, log_grid(1e-3, pi, 24), 2.0);
    for (std::size_t i = 1; i < seq.size(); ++i)
        CHECK(seq[i].value >= seq[i - 1].value);
}

TEST_CASE("best approximation bracket", "[norms]") {
    for (const auto& [name, f] : make_test_corpus(0)) {
        for (double sigma : {0.0, 0.5, 1.0, 3.0, 100.0}) {
            const auto b = best_approx_bracket(f, sigma, 2.0);
            INFO(name << " sigma " << sigma);
            CHECK(b.lower <= b.upper + 1e-12);
            if (sigma >= f.max_exponent())
                CHECK(b.upper == 0.0);
        }
    }
    // tail of a single harmonic is the harmonic itself
    const auto b = best_approx_bracket(cos_x(), 0.5, 2.0);
    CHECK_THAT(b.lower, WithinAbs(0.5, 1e-15));
    CHECK_THAT(b.upper, WithinAbs(inv_sqrt2, 1e-6));
}

TEST_CASE("class membership", "[norms]") {
    const auto w = ModulusModel::power_law(1.0, 0.25);
    const auto r = class_membership_check(cos_x(), 0.0, w, 2.0);
    CHECK(r.pass);
    CHECK(class_membership_check(cos_x(), 0.0, ModulusModel::power_law(1.0, 0.4), 2.0).pass);
    CHECK(r.constant > 0.0);
    CHECK(std::isfinite(r.constant));
    // a scaled function needs a proportionally scaled constant
    const auto r3 = class_membership_check(cos_x().scaled(3.0), 0.0, w, 2.0);
    CHECK_THAT(r3.constant, WithinRel(3.0 * r.constant, 1e-9));

    CHECK_THROWS_AS(class_membership_check(cos_x(), 0.0, ModulusModel::zero(), 2.0), DegenerateModulus);
    const auto step = ModulusModel::custom([](double d) { return d > 0.5 ? 1.0 : 0.0; }, RateFunction::zero(), "step");
    CHECK_THROWS_AS(class_membership_check(cos_x(), 0.0, step, 2.0), ModulusValidationError);
}

TEST_CASE("log grid", "[norms]") {
    const auto g = log_grid(1e-3, 1.0, 4);
    REQUIRE(g.size() == 4);
    CHECK_THAT(g[1], WithinRel(1e-2, 1e-12));
    CHECK(g.back() == 1.0);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 4), InvalidArgument);
}
