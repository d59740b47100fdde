#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "apx/ap_polynomial.hpp"
#include "apx/error.hpp"
#include "apx/kernel.hpp"
#include "apx/norms.hpp"
#include "apx/quadrature.hpp"

using namespace apx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

// Fourier side of the kernel: weight 1 up to lo, linear down to 0 at hi
double trapezoid_sum(const ApPolynomial& f, double lo, double hi, double x) {
    double s = 0.0;
    for (const auto& t : f.terms()) {
        double m = 0.0;
        if (t.lambda <= lo)
            m = 1.0;
        else if (t.lambda < hi)
            m = (hi - t.lambda) / (hi - lo);
        s += t.lambda == 0.0 ? m * t.coefficient.real() : 2.0 * m * std::real(t.coefficient * std::polar(1.0, t.lambda * x));
    }
    return s;
}

} // namespace

TEST_CASE("kernel values", "[kernel]") {
    const auto p = KernelParams::index(3, 1.0);
    CHECK(p.lo() == 1.5);
    CHECK(p.hi() == 2.0);
    CHECK_THAT(psi_eval(p, 0.0), WithinRel((1.5 + 2.0) / (2.0 * pi), 1e-15));
    for (double t : {1e-9, 1e-6, 0.3, 2.0, 17.0})
        CHECK(psi_eval(p, t) == psi_eval(p, -t));
    // the two branches meet at the switch point
    CHECK_THAT(psi_eval(p, 0.99999999e-6), WithinRel(psi_eval(p, 1.00000001e-6), 1e-12));
    const double t = 0.7;
    CHECK_THAT(psi_eval(p, t), WithinRel((std::cos(1.5 * t) - std::cos(2.0 * t)) / (pi * 0.5 * t * t), 1e-13));
    CHECK_THROWS_AS(KernelParams::direct(1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(KernelParams::index(-1, 1.0), InvalidArgument);
}

TEST_CASE("cosine tail integral", "[kernel]") {
    CHECK_THAT(cosine_tail_integral(0.0, 4.0), WithinRel(0.25, 1e-15));
    for (double omega : {0.5, 1.0, 3.0}) {
        const double T = 2.0;
        // integrate to X = T + whole periods; the remainder is O(1 / (omega^2 X^3))
        const double X = T + 2.0 * pi * 4000.0 / omega;
        QuadOptions q;
        q.rel_tol = 1e-12;
        const auto r = integrate([&](double t) { return std::cos(omega * t) / (t * t); }, T, X, q, pi / omega);
        const double remainder = -std::sin(omega * X) / (omega * X * X);
        CHECK_THAT(cosine_tail_integral(omega, T), WithinAbs(r.value + remainder, 1e-9));
    }
}

TEST_CASE("kernel integrates to one half", "[kernel]") {
    const auto p = KernelParams::direct(0.25, 1.0);
    const double T = 40.0 * pi;
    QuadOptions q;
    q.rel_tol = 1e-12;
    const auto head = integrate([&](double t) { return psi_eval(p, t); }, 0.0, T, q, 0.5);
    const double tail = (cosine_tail_integral(0.25, T) - cosine_tail_integral(1.0, T)) / (pi * 0.75);
    CHECK_THAT(head.value + tail, WithinAbs(0.5, 1e-10));
}

TEST_CASE("quadrature plan", "[kernel]") {
    const auto p = KernelParams::index(0, 1.0);
    const auto plan = plan_quadrature(p, 1.0, 1e-4);
    CHECK_THAT(plan.tail_start, WithinRel(1.0186e5, 1e-4));
    CHECK_THAT(plan.tail_bound, WithinRel(0.5e-4, 1e-12));
    CHECK(plan.breaks.front() == 0.0);
    CHECK(plan.breaks.back() == plan.tail_start);
    // every interior break is a zero of one of the sine factors
    const double zw = 2.0 * pi / p.width(), zs = 2.0 * pi / (p.hi() + p.lo());
    for (std::size_t i = 1; i + 1 < plan.breaks.size(); i += 997) {
        const double b = plan.breaks[i];
        const double rw = std::abs(b / zw - std::round(b / zw));
        const double rs = std::abs(b / zs - std::round(b / zs));
        CHECK(std::min(rw, rs) < 1e-9);
    }
    CHECK_THROWS_AS(plan_quadrature(p, 1.0, 1e-9), CapacityError);
}

TEST_CASE("kernel partial sums reproduce truncation", "[kernel]") {
    const ApPolynomial cos_x({{1.0, 0.5}}, 1.0);
    CHECK_THAT(partial_sum_via_kernel(cos_x, 2, 0.0).value, WithinAbs(1.0, 1e-5));
    CHECK_THAT(partial_sum_via_kernel(cos_x, 1, 0.0).value, WithinAbs(0.0, 1e-5));

    for (const char* name : {"random_0", "two_tone", "lacunary_b0.4"}) {
        const auto f = *corpus_member(name);
        for (int k : {0, 1, 3, 6, 11})
            for (double x : {0.0, 0.9, -2.4}) {
                const auto star = star_partial_sum(f, k, x);
                const double kv = partial_sum_via_kernel(f, k, x).value;
                const auto p = KernelParams::index(k, f.alpha());
                INFO(name << " k " << k << " x " << x);
                CHECK_THAT(kv, WithinAbs(trapezoid_sum(f, p.lo(), p.hi(), x), 1e-5));
                if (!star.interval_has_exponent)
                    CHECK_THAT(kv, WithinAbs(star.value, 1e-5));
            }
    }
    CHECK(partial_sum_via_kernel(ApPolynomial::zero(), 2, 0.3).value == 0.0);
    KernelOptions bad;
    bad.tol = 1e-7;
    CHECK_THROWS_AS(partial_sum_via_kernel(cos_x, 0, 0.0, bad), InvalidArgument);
}

TEST_CASE("discarded tail is within its certificate", "[kernel]") {
    const auto f = *corpus_member("random_1");
    const auto p = KernelParams::index(2, f.alpha());
    KernelOptions discard;
    discard.tail = TailMode::Discard;
    discard.tol = 1e-3;
    const auto base = kernel_integral(f, p, 0.4, discard);
    KernelOptions longer = discard;
    longer.horizon_scale = 4.0;
    const auto extended = kernel_integral(f, p, 0.4, longer);
    CHECK(std::abs(extended.integral - base.integral) < base.tail_bound);
    const auto exact = kernel_integral(f, p, 0.4);
    CHECK(std::abs(exact.integral - base.integral) < base.tail_bound + 1e-5);
}

TEST_CASE("kernel check table", "[kernel]") {
    const ApPolynomial cos_x({{1.0, 0.5}}, 1.0);
    const auto rows = kernel_check(cos_x, 1, 3, 4);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].k == 1);
    CHECK(rows[4].k == 2);
    CHECK_THAT(rows[5].x, WithinRel(pi / 2.0, 1e-15));
    for (const auto& r : rows)
        CHECK(r.abs_err <= 1e-5);
}

TEST_CASE("averaged difference", "[kernel]") {
    const ApPolynomial cos_x({{1.0, 0.5}}, 1.0);
    // phi_0(u) = 2 (cos u - 1)
    for (double delta : {0.01, 0.5, 2.0})
        for (double nu : {0.0, 0.3, 4.0}) {
            const double exact = 2.0 * (std::sin(nu + delta) - std::sin(nu)) / delta - 2.0;
            CHECK_THAT(averaged_difference(cos_x, 0.0, delta, nu), WithinAbs(exact, 1e-10));
        }

    SECTION("bounded by the pointwise modulus and the fitted class constant") {
        const auto w = ModulusModel::power_law(1.0, 0.25);
        for (const char* name : {"cos", "lacunary_b0.2"}) {
            const auto f = *corpus_member(name);
            const double x = 0.7;
            const auto m = class_membership_check(f, x, w, 2.0);
            REQUIRE(m.pass);
            // the fine membership grid has 64 points
            const auto grid = log_grid(1e-3, pi, 64);
            for (std::size_t i = 0; i < grid.size(); i += 9) {
                const double d = grid[i];
                const double avg = std::abs(averaged_difference(f, x, d, 0.0));
                INFO(name << " delta " << d);
                CHECK(avg <= wx_modulus(f, x, d, 2.0) + 1e-9);
                CHECK(avg <= m.constant * w.w(d) * (1.0 + 1e-9));
            }
        }
    }
}
