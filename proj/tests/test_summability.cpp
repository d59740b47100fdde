#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "apx/ap_polynomial.hpp"
#include "apx/error.hpp"
#include "apx/norms.hpp"
#include "apx/summability.hpp"

using namespace apx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// partial sum over lambda <= gamma written out term by term
double truncation(const ApPolynomial& f, double gamma, double x) {
    double s = 0.0;
    for (const auto& t : f.terms()) {
        if (t.lambda > gamma)
            break;
        s += t.lambda == 0.0 ? t.coefficient.real() : 2.0 * std::real(t.coefficient * std::polar(1.0, t.lambda * x));
    }
    return s;
}

double mean_oracle(const ApPolynomial& f, const SummabilityMatrix& a, int n, double q, double x) {
    const double fx = eval(f, x);
    double s = 0.0;
    for (int k = 0; k <= n; ++k)
        s += a(n, k) * std::pow(std::abs(truncation(f, 0.5 * f.alpha() * k, x) - fx), q);
    return std::pow(s, 1.0 / q);
}

} // namespace

TEST_CASE("builtin matrices", "[summability]") {
    const auto c = builtin_matrix("cesaro");
    const auto o = builtin_matrix("one_hot");
    const auto inc = builtin_matrix("increasing");
    const auto riesz = builtin_matrix("riesz");
    for (int n : {0, 1, 5, 40}) {
        for (int k = 0; k <= n + 2; ++k) {
            CHECK(c(n, k) == (k <= n ? 1.0 / (n + 1) : 0.0));
            CHECK(o(n, k) == (k == n ? 1.0 : 0.0));
            CHECK_THAT(riesz(n, k), WithinAbs(inc(n, k), 1e-15));
        }
        for (const auto* m : {&c, &o, &inc}) {
            double sum = 0.0;
            for (double v : m->row(n))
                sum += v;
            CHECK_THAT(sum, WithinAbs(1.0, 1e-13));
        }
    }
    CHECK_FALSE(validate_rows(builtin_matrix("riesz:2.5"), 30).has_value());
    CHECK_THROWS_AS(builtin_matrix("riesz:x"), InvalidArgument);
    CHECK_THROWS_AS(builtin_matrix("nope"), InvalidArgument);
}

TEST_CASE("row validation reports the first violation", "[summability]") {
    auto first = [](std::vector<std::vector<double>> rows) {
        const auto m = SummabilityMatrix::from_rows("m", std::move(rows));
        return validate_rows(m, *m.last_row());
    };
    CHECK_FALSE(first({{1.0}, {0.5, 0.5}}).has_value());

    auto v = first({{1.0}, {0.5, 0.5}, {0.5, 0.6, 0.0}});
    REQUIRE(v);
    CHECK(v->clause == RowClause::RowSum);
    CHECK(v->n == 2);

    v = first({{1.0}, {-0.1, 1.1}});
    REQUIRE(v);
    CHECK(v->clause == RowClause::Nonnegative);
    CHECK(v->n == 1);
    CHECK(v->k == 0);

    v = first({{1.0}, {0.5, 0.25, 0.25}});
    REQUIRE(v);
    CHECK(v->clause == RowClause::LowerTriangular);
    CHECK(v->k == 2);

    const auto m = SummabilityMatrix::from_rows("m", {{1.0}});
    CHECK_THROWS_AS(validate_rows(m, 3), InvalidArgument);
}

TEST_CASE("variation constants against closed forms", "[summability]") {
    const auto c = builtin_matrix("cesaro");
    const auto o = builtin_matrix("one_hot");
    const auto inc = builtin_matrix("increasing");
    const double inf = std::numeric_limits<double>::infinity();
    for (int n : {1, 6, 25})
        for (int m = 0; m <= n; ++m) {
            INFO("n " << n << " m " << m);
            CHECK_THAT(rbvs_constant(c, n, m), WithinAbs(1.0, 1e-12));
            CHECK(hbvs_constant(c, n, m) == 0.0);
            CHECK(rbvs_constant(o, n, m) == (m < n ? inf : 1.0));
            CHECK(hbvs_constant(o, n, m) == (m < n ? 0.0 : 1.0));
            // a_{nk} proportional to k + 1
            CHECK_THAT(hbvs_constant(inc, n, m), WithinAbs(m / (m + 1.0), 1e-12));
            CHECK_THAT(rbvs_constant(inc, n, m), WithinRel((2.0 * n + 1.0 - m) / (m + 1.0), 1e-12));
        }
}

TEST_CASE("classifier", "[summability]") {
    auto r = classify(builtin_matrix("cesaro"), 64);
    CHECK(r.variation_class == VariationClass::Both);
    CHECK_THAT(r.rbvs.uniform_K, WithinAbs(1.0, 1e-12));
    CHECK(r.hbvs.uniform_K == 0.0);
    CHECK(r.rbvs.per_row_K.size() == 65);

    r = classify(builtin_matrix("one_hot"), 64);
    CHECK(r.variation_class == VariationClass::Hbvs);
    CHECK_FALSE(r.rbvs.holds);
    CHECK(std::isinf(r.rbvs.uniform_K));

    r = classify(builtin_matrix("increasing"), 64);
    CHECK(r.variation_class == VariationClass::Hbvs);
    CHECK(r.rbvs.unbounded_trend);
    CHECK_THAT(r.rbvs.growth, WithinRel(129.0 / 65.0, 1e-12));

    r = classify(builtin_matrix("riesz:-1"), 64);
    CHECK(r.variation_class == VariationClass::Rbvs);
    CHECK(r.hbvs.unbounded_trend);
}

TEST_CASE("head inequality", "[summability]") {
    CHECK(head_inequality_holds(builtin_matrix("cesaro"), 0.0, 40));
    CHECK(head_inequality_holds(builtin_matrix("increasing"), 0.0, 40));
    // a_{n0} / a_{nm} = m + 1 grows without bound
    CHECK_FALSE(head_inequality_holds(builtin_matrix("riesz:-1"), 1.0, 40));
    CHECK(head_inequality_holds(builtin_matrix("riesz:-1"), 40.0, 40));
}

TEST_CASE("strong mean", "[summability]") {
    const ApPolynomial cos_x({{1.0, 0.5}}, 1.0);
    const auto c = builtin_matrix("cesaro");
    // cuts 0, 1/2, 1, 3/2: deviations 1, 1, 0, 0
    CHECK_THAT(strong_mean(cos_x, c, 3, 2.0, GammaSpec::half_alpha(), 0.0), WithinAbs(1.0 / std::numbers::sqrt2, 1e-12));
    CHECK(strong_mean(cos_x, c, 5, 2.0, GammaSpec::linear(0.0, 100.0), 0.3) == 0.0);

    SECTION("agrees with the term-by-term oracle") {
        for (const char* name : {"random_0", "random_1", "lacunary_b0.2", "two_tone"}) {
            const auto f = *corpus_member(name);
            for (const char* mname : {"cesaro", "increasing", "one_hot"}) {
                const auto a = builtin_matrix(mname);
                for (int n : {0, 3, 17})
                    for (double q : {0.5, 1.0, 2.0, 3.5})
                        for (double x : {0.0, 1.1, -6.0}) {
                            INFO(name << " " << mname << " n " << n << " q " << q << " x " << x);
                            const double want = mean_oracle(f, a, n, q, x);
                            CHECK_THAT(strong_mean(f, a, n, q, GammaSpec::half_alpha(), x), WithinAbs(want, 1e-12 * (1.0 + want)));
                        }
            }
        }
    }

    SECTION("power means are nondecreasing in q") {
        const auto f = *corpus_member("random_1");
        for (double x : {0.2, 2.7}) {
            double prev = 0.0;
            for (double q : {0.25, 0.5, 1.0, 2.0, 4.0}) {
                const double v = strong_mean(f, c, 9, q, GammaSpec::half_alpha(), x);
                CHECK(v >= prev - 1e-14);
                prev = v;
            }
        }
    }

    SECTION("explicit and linear cut sequences") {
        const auto f = *corpus_member("two_tone");
        const auto lin = GammaSpec::linear(0.2, 0.0);
        const auto ex = GammaSpec::explicit_values({0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2});
        CHECK(strong_mean(f, c, 6, 2.0, lin, 0.9) == strong_mean(f, c, 6, 2.0, ex, 0.9));
        CHECK_THROWS_AS(strong_mean(f, c, 7, 2.0, ex, 0.9), InvalidArgument);
    }

    CHECK_THROWS_AS(strong_mean(cos_x, c, 3, 0.0, GammaSpec::half_alpha(), 0.0), InvalidArgument);
    CHECK_THROWS_AS(strong_mean(cos_x, c, -1, 1.0, GammaSpec::half_alpha(), 0.0), InvalidArgument);
}

TEST_CASE("kernel-mode strong mean", "[summability]") {
    const auto c = builtin_matrix("cesaro");
    StrongMeanOptions kernel;
    kernel.mode = PartialSumMode::Kernel;
    const ApPolynomial cos_x({{1.0, 0.5}}, 1.0);
    for (double x : {0.0, 0.8})
        CHECK_THAT(strong_mean(cos_x, c, 6, 2.0, GammaSpec::half_alpha(), x, kernel),
                   WithinAbs(strong_mean(cos_x, c, 6, 2.0, GammaSpec::half_alpha(), x), 1e-4));

    const ApPolynomial flagged({{0.75, 0.5}}, 1.0);
    CHECK_THROWS_AS(strong_mean(flagged, c, 3, 2.0, GammaSpec::half_alpha(), 0.0, kernel), InvalidArgument);
    CHECK_THROWS_AS(strong_mean(cos_x, c, 3, 2.0, GammaSpec::linear(1.0, 0.0), 0.0, kernel), InvalidArgument);
}

TEST_CASE("strong mean profile", "[summability]") {
    const auto f = *corpus_member("lacunary_b0.2");
    const auto a = builtin_matrix("increasing");
    const StrongMeanProfile profile(f, a, 12, 0.5, GammaSpec::half_alpha());
    for (double x : {0.0, 0.4, 3.3, -2.0})
        CHECK_THAT(profile(x), WithinRel(strong_mean(f, a, 12, 0.5, GammaSpec::half_alpha(), x), 1e-12));

    const double hi = 2.0 * std::numbers::pi;
    const auto cusps = profile.cusps(0.0, hi);
    CHECK_FALSE(cusps.empty());
    for (double z : cusps) {
        REQUIRE(z >= 0.0);
        REQUIRE(z <= hi);
        // some kept deviation f - S_gamma vanishes at z
        double smallest = 1e300;
        for (int k = 0; k <= 12; ++k) {
            const double g = 0.5 * f.alpha() * k;
            smallest = std::min(smallest, std::abs(eval(f, z) - truncation(f, g, z)));
        }
        CHECK(smallest < 1e-9);
    }

    // even q has no cusps
    const StrongMeanProfile smooth(f, a, 12, 2.0, GammaSpec::half_alpha());
    CHECK(smooth.cusps(0.0, hi).empty());
}
