#include "apx/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gsl/gsl_sf_expint.h>

#include "apx/error.hpp"
#include "apx/norms.hpp"
#include "apx/parallel.hpp"
#include "apx/quadrature.hpp"

namespace apx {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double max_horizon = 1e9;
constexpr std::size_t max_panels = std::size_t{1} << 24;

// (b^n - a^n) / (b - a)
double divided_power(double a, double b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += std::pow(b, n - 1 - i) * std::pow(a, i);
    return s;
}

void append_multiples(std::vector<double>& out, double step, double limit) {
    if (!(step > 0.0) || !std::isfinite(step))
        return;
    const auto count = static_cast<std::size_t>(std::floor(limit / step));
    if (count > max_panels)
        throw CapacityError("kernel panel decomposition exceeds panel capacity");
    for (std::size_t m = 1; m <= count; ++m)
        out.push_back(step * static_cast<double>(m));
}

std::vector<double> zero_aligned_breaks(const KernelParams& params, double horizon) {
    std::vector<double> breaks{0.0};
    append_multiples(breaks, 2.0 * pi / params.width(), horizon);
    append_multiples(breaks, 2.0 * pi / (params.hi() + params.lo()), horizon);
    breaks.push_back(horizon);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> out;
    out.reserve(breaks.size());
    for (double b : breaks) {
        if (b > horizon)
            break;
        if (out.empty() || b - out.back() > 1e-12 * std::max(1.0, b))
            out.push_back(b);
    }
    if (out.back() < horizon)
        out.push_back(horizon);
    else
        out.back() = horizon;
    if (out.size() - 1 > max_panels)
        throw CapacityError("kernel panel decomposition exceeds panel capacity");
    return out;
}

// Splits every panel so no piece is wider than max_width.
std::vector<double> refine(const std::vector<double>& breaks, double max_width) {
    if (!(max_width > 0.0))
        return breaks;
    std::vector<double> out{breaks.front()};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto piece = uniform_breaks(breaks[i], breaks[i + 1], max_width);
        out.insert(out.end(), piece.begin() + 1, piece.end());
    }
    return out;
}

double integrand_bandwidth(const SymmetricDifference& phi, const KernelParams& params) {
    double top = 0.0;
    for (double l : phi.frequencies())
        top = std::max(top, l);
    return top + params.hi();
}

// Exact int_T^inf phi_x(t) Psi(t) dt for phi_x = sum_j w_j (cos(l_j t) - 1).
double spectral_tail(const SymmetricDifference& phi, const KernelParams& params, double T) {
    const double a = params.lo(), b = params.hi();
    const auto lambdas = phi.frequencies();
    const auto weights = phi.weights();
    const double Ia = cosine_tail_integral(a, T);
    const double Ib = cosine_tail_integral(b, T);
    NeumaierSum sum;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const double l = lambdas[j];
        const double term = 0.5 * cosine_tail_integral(std::abs(l - a), T) + 0.5 * cosine_tail_integral(l + a, T)
                            - 0.5 * cosine_tail_integral(std::abs(l - b), T) - 0.5 * cosine_tail_integral(l + b, T)
                            - Ia + Ib;
        sum.add(weights[j] * term);
    }
    return sum.value() / (pi * params.width());
}

} // namespace

KernelParams KernelParams::direct(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || !(hi > lo))
        throw InvalidArgument("kernel parameters need 0 <= lo < hi");
    return KernelParams(lo, hi);
}

KernelParams KernelParams::index(int k, double alpha) {
    if (k < 0)
        throw InvalidArgument("kernel index must be nonnegative");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidArgument("kernel gap alpha must be positive");
    return KernelParams(0.5 * alpha * k, 0.5 * alpha * (k + 1));
}

double psi_eval(const KernelParams& params, double t) {
    const double a = params.lo(), b = params.hi();
    if (std::abs(t) < 1e-6) {
        const double t2 = t * t;
        const double series = 0.5 * divided_power(a, b, 2) - divided_power(a, b, 4) * t2 / 24.0
                              + divided_power(a, b, 6) * t2 * t2 / 720.0
                              - divided_power(a, b, 8) * t2 * t2 * t2 / 40320.0;
        return series / pi;
    }
    return 2.0 * std::sin(0.5 * (b - a) * t) * std::sin(0.5 * (b + a) * t) / (pi * (b - a) * t * t);
}

double cosine_tail_integral(double omega, double T) {
    if (!(T > 0.0))
        throw InvalidArgument("tail start must be positive");
    omega = std::abs(omega);
    if (omega == 0.0)
        return 1.0 / T;
    const double z = omega * T;
    return std::cos(z) / T - omega * (0.5 * pi - gsl_sf_Si(z));
}

QuadraturePlan plan_quadrature(const KernelParams& params, double f_bound, double tol) {
    if (!(tol > 0.0))
        throw InvalidArgument("quadrature tolerance must be positive");
    if (!(f_bound >= 0.0) || !std::isfinite(f_bound))
        throw InvalidArgument("function bound must be finite and nonnegative");
    // 8 f_bound / (pi (hi - lo) T) <= tol / 2
    double T = 16.0 * f_bound / (pi * params.width() * tol);
    if (T > max_horizon)
        throw CapacityError("tolerance unattainable: tail horizon exceeds 1e9");
    if (!(T > 0.0))
        T = 2.0 * pi / params.width();
    QuadraturePlan plan;
    plan.params = params;
    plan.tail_start = T;
    plan.tail_bound = 8.0 * f_bound / (pi * params.width() * T);
    plan.breaks = zero_aligned_breaks(params, T);
    return plan;
}

KernelResult kernel_integral(const ApPolynomial& f, const KernelParams& params, double x, const KernelOptions& opt) {
    if (!(opt.tol >= 1e-6))
        throw InvalidArgument("kernel tolerance must be at least 1e-6");
    const SymmetricDifference phi(f, x);
    const double f_bound = f.coefficient_l1();
    KernelResult out;

    std::vector<double> breaks;
    if (opt.tail == TailMode::Discard) {
        if (!(opt.horizon_scale >= 1.0))
            throw InvalidArgument("horizon scale must be >= 1");
        const QuadraturePlan plan = plan_quadrature(params, f_bound, opt.tol);
        out.tail_start = plan.tail_start * opt.horizon_scale;
        breaks = opt.horizon_scale == 1.0 ? plan.breaks : zero_aligned_breaks(params, out.tail_start);
    } else {
        if (opt.horizon_periods < 1)
            throw InvalidArgument("spectral horizon needs at least one period");
        out.tail_start = opt.horizon_periods * 2.0 * pi / params.width();
        breaks = zero_aligned_breaks(params, out.tail_start);
    }
    out.tail_bound = 8.0 * f_bound / (pi * params.width() * out.tail_start);

    if (phi.frequencies().empty())
        return out;

    breaks = refine(breaks, 2.0 * pi / integrand_bandwidth(phi, params));
    out.panels = breaks.size() - 1;
    QuadOptions q;
    q.rel_tol = 0.0;
    q.abs_tol = 0.25 * opt.tol;
    q.max_intervals = std::max<std::size_t>(4 * breaks.size(), 1u << 16);
    const auto r = integrate_panels([&](double t) { return phi(t) * psi_eval(params, t); }, breaks, q);
    if (!r.converged)
        throw QuadratureFailure("kernel integral did not converge", r.worst_panel);
    out.quadrature_error = r.error;

    if (opt.tail == TailMode::Spectral)
        out.tail = spectral_tail(phi, params, out.tail_start);
    out.integral = r.value + out.tail;
    return out;
}

KernelResult partial_sum_via_kernel(const ApPolynomial& f, int k, double x, const KernelOptions& opt) {
    KernelResult out = kernel_integral(f, KernelParams::index(k, f.alpha()), x, opt);
    out.value = f.empty() ? 0.0 : eval(f, x) + out.integral;
    return out;
}

double averaged_difference(const ApPolynomial& f, double x, double delta, double nu) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw InvalidArgument("averaging width delta must be positive");
    if (!std::isfinite(nu))
        throw InvalidArgument("averaging start must be finite");
    const SymmetricDifference phi(f, x);
    if (phi.frequencies().empty())
        return 0.0;
    QuadOptions q;
    q.rel_tol = 1e-8;
    q.abs_tol = 1e-300;
    const double width = 2.0 * pi / std::max(f.max_exponent(), 1e-12);
    auto r = integrate([&](double t) { return phi(t); }, nu, nu + delta, q, width);
    return require_converged(r, "averaged difference").value / delta;
}

std::vector<KernelCheckRow> kernel_check(const ApPolynomial& f, int k_lo, int k_hi, std::size_t x_count,
                                         const KernelOptions& opt) {
    if (k_lo < 0 || k_hi < k_lo)
        throw InvalidArgument("kernel check needs 0 <= k_lo <= k_hi");
    if (x_count == 0)
        throw InvalidArgument("kernel check needs at least one x point");
    const double cover = quasi_period(f);
    const std::size_t ks = static_cast<std::size_t>(k_hi - k_lo + 1);
    return parallel_map(ks * x_count, [&](std::size_t i) {
        KernelCheckRow row;
        row.k = k_lo + static_cast<int>(i / x_count);
        row.x = cover * static_cast<double>(i % x_count) / static_cast<double>(x_count);
        const auto kernel = partial_sum_via_kernel(f, row.k, row.x, opt);
        const auto star = star_partial_sum(f, row.k, row.x);
        row.kernel_value = kernel.value;
        row.truncation_value = star.value;
        row.abs_err = std::abs(kernel.value - star.value);
        row.tail_bound = kernel.tail_bound;
        row.interval_has_exponent = star.interval_has_exponent;
        return row;
    });
}

} // namespace apx
