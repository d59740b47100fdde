#ifndef APX_NORMS_HPP
#define APX_NORMS_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "apx/ap_polynomial.hpp"
#include "apx/modulus_model.hpp"

namespace apx {

enum class NormTag { Stepanov, Sup, Besicovitch };

struct NormKind {
    NormTag tag = NormTag::Stepanov;
    double p = 2.0;

    static NormKind stepanov(double p);
    static NormKind sup();
    static NormKind besicovitch(double p);
};

struct NormOptions {
    /// Relative tolerance of every finite-interval integral.
    double rel_tol = 1e-8;
    /// Minimum number of grid points for the sup over window offsets.
    std::size_t grid = 512;
    /// Golden-section refinement stops when the bracket is narrower than this.
    double step_tol = 1e-4;
    /// For p = 2 integrate the window mean in closed form instead of by quadrature.
    bool exact_p2 = true;
};

/// Length of u-range that covers every window position: one common period when
/// all exponent ratios are rational, else 2 pi (1 + 1 / min gap).
double quasi_period(const ApPolynomial& f);

/// True when all exponents are rational multiples of each other (denominators <= 64).
bool has_common_period(const ApPolynomial& f);

/// sup_u { (1/pi) int_u^{u+pi} |f|^p }^{1/p}, 1 < p < inf.
double stepanov_norm(const ApPolynomial& f, double p, const NormOptions& opt = {});

/// Same functional for phi_x (as a function of t).
double stepanov_norm(const SymmetricDifference& phi, double p, const NormOptions& opt = {});

/// (1/pi) int_u^{u+pi} |f|^p for a single window.
double window_mean(const ApPolynomial& f, double u, double p, const NormOptions& opt = {});

/// Points in [lo, hi] where a callable has a derivative singularity.
using CuspLocator = std::function<std::vector<double>(double lo, double hi)>;

/// Stepanov norm of an arbitrary callable whose windows are all covered by
/// u in [0, cover). `max_width` bounds quadrature panel width (0 = no split).
/// With a cusp locator every window is split at the cusps and each piece is
/// integrated after the substitution t = a + (b - a)(3 s^2 - 2 s^3).
double stepanov_norm(const std::function<double(double)>& g, double cover, double p, std::size_t grid,
                     const NormOptions& opt = {}, double max_width = 0.0, const CuspLocator& cusps = {});

double sup_norm(const ApPolynomial& f, const NormOptions& opt = {});

/// Limit mean value (M |f|^p)^{1/p}. Uses the Fejer-weighted mean over
/// [-L, L], L = 64 quasi-periods, and requires doubling L to move the result
/// by < 1e-4; for p = 2 the value must also agree with Parseval to 1e-4.
double besicovitch_norm(const ApPolynomial& f, double p, const NormOptions& opt = {});

/// (sum over the symmetric spectrum of |A_nu|^2)^{1/2}.
double parseval_norm(const ApPolynomial& f);

double norm(const ApPolynomial& f, const NormKind& kind, const NormOptions& opt = {});

enum class ModulusKind { OmegaStepanov, PointwiseSymmetric };

struct ModulusEstimate {
    double delta = 0.0;
    double value = 0.0;
    ModulusKind kind = ModulusKind::OmegaStepanov;
    /// Center for the pointwise modulus.
    double x = 0.0;
};

/// sup_{|t| <= delta} || f(. + t) - f(.) ||_{S^p}: 129-point grid plus refinement.
double omega_modulus(const ApPolynomial& f, double delta, double p, const NormOptions& opt = {});

/// omega_modulus over ascending deltas; each sup also sees the maximizers of
/// smaller deltas, so the sequence is nondecreasing.
std::vector<ModulusEstimate> omega_modulus_sequence(const ApPolynomial& f, std::span<const double> deltas, double p,
                                                    const NormOptions& opt = {});

/// { (1/delta) int_0^delta |phi_x(t)|^p dt }^{1/p}.
double wx_modulus(const ApPolynomial& f, double x, double delta, double p, const NormOptions& opt = {});

std::vector<ModulusEstimate> wx_modulus_sequence(const ApPolynomial& f, double x, std::span<const double> deltas,
                                                 double p, const NormOptions& opt = {});

struct BestApproxBracket {
    double lower = 0.0;
    double upper = 0.0;
};

/// Computable bounds on E_sigma(f)_{S^p}: lower = largest tail coefficient modulus,
/// upper = Stepanov norm of the spectral tail above sigma.
BestApproxBracket best_approx_bracket(const ApPolynomial& f, double sigma, double p, const NormOptions& opt = {});

struct MembershipResult {
    /// Estimated constant on the 2N x 2N grid.
    double constant = 0.0;
    /// Same estimate on the N x N grid.
    double coarse_constant = 0.0;
    bool pass = false;
};

/// Smallest C with the displaced-difference and pointwise-modulus bounds
/// against C w(.) on log grids over [1e-3, pi] (N = grid, then 2N).
MembershipResult class_membership_check(const ApPolynomial& f, double x, const ModulusModel& w, double p,
                                        std::size_t grid = 32, const NormOptions& opt = {});

/// Log-spaced grid of n points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

} // namespace apx

#endif
