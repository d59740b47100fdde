#ifndef APX_KERNEL_HPP
#define APX_KERNEL_HPP

#include <span>
#include <utility>
#include <vector>

#include "apx/ap_polynomial.hpp"

namespace apx {

/*
 * Parameters of the kernel
 *
 *     Psi_{lo,hi}(t) = 2 sin((hi - lo) t / 2) sin((hi + lo) t / 2) / (pi (hi - lo) t^2),
 *
 * either given directly (0 <= lo < hi) or in index form, lo = alpha k / 2 and
 * hi = alpha (k + 1) / 2.
 */
class KernelParams {
public:
    static KernelParams direct(double lo, double hi);
    static KernelParams index(int k, double alpha);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double width() const noexcept { return hi_ - lo_; }

private:
    KernelParams(double lo, double hi) : lo_(lo), hi_(hi) {}
    double lo_;
    double hi_;
};

/// Psi(t); below |t| = 1e-6 a four-term even Taylor expansion is used. Psi(0) = (lo + hi) / (2 pi).
double psi_eval(const KernelParams& params, double t);

/// Breakpoints of a zero-aligned panel decomposition of (0, T] and the certified
/// bound on the tail beyond T.
struct QuadraturePlan {
    KernelParams params = KernelParams::direct(0.0, 1.0);
    /// Panel boundaries 0 = b_0 < b_1 < ... < b_n = tail_start.
    std::vector<double> breaks;
    double tail_start = 0.0;
    /// 8 f_bound / (pi (hi - lo) T) >= |int_T^inf phi_x Psi| when |phi_x| <= 4 f_bound.
    double tail_bound = 0.0;

    std::size_t panel_count() const noexcept { return breaks.empty() ? 0 : breaks.size() - 1; }
    std::pair<double, double> panel(std::size_t i) const { return {breaks[i], breaks[i + 1]}; }
};

/// T is the smallest horizon with tail_bound <= tol / 2; panels split at the zeros
/// t = 2 pi m / (hi - lo) and t = 2 pi m / (hi + lo). Throws CapacityError when
/// T > 1e9 or the panel count would exceed 2^24.
QuadraturePlan plan_quadrature(const KernelParams& params, double f_bound, double tol);

enum class TailMode {
    /// Integrate (0, T] of a short zero-aligned horizon numerically and add the
    /// exact integral over [T, inf) of the trigonometric-sum-over-t^2 integrand.
    Spectral,
    /// Integrate the plan from plan_quadrature and drop the certified tail.
    Discard,
};

struct KernelOptions {
    /// Absolute error target, >= 1e-6.
    double tol = 1e-5;
    TailMode tail = TailMode::Spectral;
    /// Spectral mode: numeric horizon in periods 2 pi / (hi - lo).
    int horizon_periods = 4;
    /// Discard mode: multiply the planned horizon (for tail-certificate checks).
    double horizon_scale = 1.0;
};

struct KernelResult {
    /// f(x) + int_0^inf phi_x(t) Psi_k(t) dt.
    double value = 0.0;
    double integral = 0.0;
    /// Contribution of [T, inf) (0 in discard mode).
    double tail = 0.0;
    /// Certified bound on |int_T^inf phi_x Psi_k|.
    double tail_bound = 0.0;
    double tail_start = 0.0;
    double quadrature_error = 0.0;
    std::size_t panels = 0;
};

/// Partial sum through the kernel representation, index form k with the gap alpha of f.
KernelResult partial_sum_via_kernel(const ApPolynomial& f, int k, double x, const KernelOptions& opt = {});

/// int_0^inf phi_x(t) Psi(t) dt for arbitrary kernel parameters.
KernelResult kernel_integral(const ApPolynomial& f, const KernelParams& params, double x, const KernelOptions& opt = {});

/// (1/delta) int_nu^{nu + delta} phi_x(u) du.
double averaged_difference(const ApPolynomial& f, double x, double delta, double nu);

/// int_T^inf cos(omega t) / t^2 dt, T > 0.
double cosine_tail_integral(double omega, double T);

struct KernelCheckRow {
    int k = 0;
    double x = 0.0;
    double kernel_value = 0.0;
    double truncation_value = 0.0;
    double abs_err = 0.0;
    double tail_bound = 0.0;
    /// The interval (alpha k / 2, alpha (k + 1) / 2) holds an exponent.
    bool interval_has_exponent = false;
};

/// Kernel versus truncation for k in [k_lo, k_hi] and x_count points spread over
/// one quasi-period of f. Rows are ordered by k, then x.
std::vector<KernelCheckRow> kernel_check(const ApPolynomial& f, int k_lo, int k_hi, std::size_t x_count,
                                         const KernelOptions& opt = {});

} // namespace apx

#endif
