#include "apx/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "apx/error.hpp"
#include "apx/parallel.hpp"
#include "apx/quadrature.hpp"

namespace apx {

namespace {

constexpr double pi = std::numbers::pi;

struct Argmax {
    double arg = 0.0;
    double value = -std::numeric_limits<double>::infinity();
};

/*
 * Grid search over [lo, hi) (periodic) or [lo, hi] followed by golden-section
 * refinement inside one grid step of the best node. Returns the best of all
 * evaluated points.
 */
template <class F, class G>
Argmax maximize(const F& fn, double lo, double hi, std::size_t n, bool periodic, double step_tol, const G& grid_fn) {
    n = std::max<std::size_t>(n, 2);
    const double h = (hi - lo) / static_cast<double>(periodic ? n : n - 1);
    const std::vector<double> values = grid_fn(lo, h, n);
    Argmax best;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] > best.value) {
            best.value = values[i];
            best.arg = lo + h * static_cast<double>(i);
        }
    }

    double a = best.arg - h, b = best.arg + h;
    if (!periodic) {
        a = std::max(a, lo);
        b = std::min(b, hi);
    }
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c), fd = fn(d);
    auto consider = [&](double x, double v) {
        if (v > best.value) {
            best.value = v;
            best.arg = x;
        }
    };
    consider(c, fc);
    consider(d, fd);
    while (b - a > step_tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
            consider(d, fd);
        }
    }
    return best;
}

template <class F>
Argmax maximize(const F& fn, double lo, double hi, std::size_t n, bool periodic, double step_tol) {
    auto grid_fn = [&](double a, double h, std::size_t m) {
        return parallel_map(m, [&](std::size_t i) { return fn(a + h * static_cast<double>(i)); });
    };
    return maximize(fn, lo, hi, n, periodic, step_tol, grid_fn);
}

void require_p(double p, bool allow_one) {
    const bool ok = std::isfinite(p) && (allow_one ? p >= 1.0 : p > 1.0);
    if (!ok)
        throw InvalidArgument(allow_one ? "exponent p must satisfy 1 <= p < inf" : "exponent p must satisfy 1 < p < inf");
}

/// Panel width resolving the oscillation of |f|^p.
double oscillation_width(const ApPolynomial& f) {
    const double top = 2.0 * f.max_exponent();
    return top > 0.0 ? 2.0 * pi / top : 0.0;
}

std::size_t sup_grid(const ApPolynomial& f, double cover, std::size_t minimum) {
    const double per_oscillation = 4.0;
    const double oscillations = cover * 2.0 * f.max_exponent() / (2.0 * pi);
    const auto dense = static_cast<std::size_t>(std::ceil(per_oscillation * oscillations));
    return std::clamp(dense, minimum, std::max<std::size_t>(minimum, 16384));
}

/// Window mean of |f|^2 in closed form: sum_{j,l} c_j conj(c_l) e^{i d u} K(d), d = mu_j - mu_l,
/// stored as C_0 + 2 Re sum_{d > 0} C_d e^{i d u} with equal differences merged.
class ExactSquareWindow {
public:
    explicit ExactSquareWindow(const ApPolynomial& f) {
        std::vector<std::pair<double, complex>> spectrum;
        for (const auto& t : f.terms()) {
            spectrum.push_back({t.lambda, t.coefficient});
            if (t.lambda != 0.0)
                spectrum.push_back({-t.lambda, std::conj(t.coefficient)});
        }
        std::vector<std::pair<double, complex>> pairs;
        for (const auto& [mj, cj] : spectrum) {
            for (const auto& [ml, cl] : spectrum) {
                const double d = mj - ml;
                if (d < 0.0)
                    continue;
                const complex kernel = d == 0.0 ? complex(1.0, 0.0)
                                                : (std::polar(1.0, d * pi) - 1.0) / complex(0.0, d * pi);
                pairs.push_back({d, cj * std::conj(cl) * kernel});
            }
        }
        std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [d, c] : pairs) {
            if (d == 0.0) {
                constant_ += c.real();
                continue;
            }
            if (!freq_.empty() && d - freq_.back() <= 1e-12 * d)
                coef_.back() += c;
            else {
                freq_.push_back(d);
                coef_.push_back(c);
            }
        }
    }

    double operator()(double u) const {
        double s = 0.0;
        for (std::size_t i = 0; i < freq_.size(); ++i)
            s += (coef_[i] * std::polar(1.0, freq_[i] * u)).real();
        return std::max(constant_ + 2.0 * s, 0.0);
    }

    /// Values at lo + h i, i < n, by rotating each exponential along the grid.
    std::vector<double> grid(double lo, double h, std::size_t n) const {
        std::vector<double> acc(n, 0.0);
        constexpr std::size_t resync = 64;
        for (std::size_t j = 0; j < freq_.size(); ++j) {
            const complex rot = std::polar(1.0, freq_[j] * h);
            complex z;
            for (std::size_t i = 0; i < n; ++i) {
                if (i % resync == 0)
                    z = coef_[j] * std::polar(1.0, freq_[j] * (lo + h * static_cast<double>(i)));
                acc[i] += z.real();
                z *= rot;
            }
        }
        for (double& v : acc)
            v = std::max(constant_ + 2.0 * v, 0.0);
        return acc;
    }

private:
    double constant_ = 0.0;
    std::vector<double> freq_;
    std::vector<complex> coef_;
};

double continued_fraction_denominator(double r, int max_den) {
    // Returns q with |r - p/q| <= 1e-9 r, q <= max_den, or 0 when none.
    double x = r;
    long h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    for (int iter = 0; iter < 40; ++iter) {
        const double a = std::floor(x);
        const long ai = static_cast<long>(a);
        const long h2 = ai * h0 + h1;
        const long k2 = ai * k0 + k1;
        if (k2 > max_den)
            return 0;
        if (std::abs(r - static_cast<double>(h2) / static_cast<double>(k2)) <= 1e-9 * std::max(1.0, r))
            return static_cast<double>(k2);
        h1 = h0;
        h0 = h2;
        k1 = k0;
        k0 = k2;
        const double frac = x - a;
        if (frac < 1e-15)
            return 0;
        x = 1.0 / frac;
    }
    return 0;
}

std::vector<double> positive_exponents(const ApPolynomial& f) {
    std::vector<double> out;
    for (const auto& t : f.terms())
        if (t.lambda > 0.0)
            out.push_back(t.lambda);
    return out;
}

// Fundamental frequency of a commensurable spectrum, or 0.
double fundamental_frequency(const ApPolynomial& f) {
    const auto lambdas = positive_exponents(f);
    if (lambdas.empty())
        return 0.0;
    const double base = lambdas.front();
    long lcm = 1;
    std::vector<double> ratios;
    for (double l : lambdas) {
        const double r = l / base;
        const double q = continued_fraction_denominator(r, 64);
        if (q == 0.0)
            return 0.0;
        lcm = std::lcm(lcm, static_cast<long>(q));
        if (lcm > 4096)
            return 0.0;
        ratios.push_back(r);
    }
    long g = 0;
    for (double r : ratios)
        g = std::gcd(g, std::lround(r * static_cast<double>(lcm)));
    return base * static_cast<double>(g) / static_cast<double>(lcm);
}

double pow_abs(double v, double p) {
    const double a = std::abs(v);
    return p == 2.0 ? a * a : std::pow(a, p);
}

} // namespace

NormKind NormKind::stepanov(double p) {
    require_p(p, false);
    return {NormTag::Stepanov, p};
}

NormKind NormKind::sup() { return {NormTag::Sup, std::numeric_limits<double>::infinity()}; }

NormKind NormKind::besicovitch(double p) {
    require_p(p, true);
    return {NormTag::Besicovitch, p};
}

bool has_common_period(const ApPolynomial& f) { return positive_exponents(f).empty() || fundamental_frequency(f) > 0.0; }

double quasi_period(const ApPolynomial& f) {
    const auto lambdas = positive_exponents(f);
    if (lambdas.empty())
        return 2.0 * pi;
    const double fundamental = fundamental_frequency(f);
    if (fundamental > 0.0)
        return 2.0 * pi / fundamental;
    double gap = lambdas.front();
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        gap = std::min(gap, lambdas[i] - lambdas[i - 1]);
    return 2.0 * pi * (1.0 + 1.0 / gap);
}

double window_mean(const ApPolynomial& f, double u, double p, const NormOptions& opt) {
    require_p(p, true);
    if (f.empty())
        return 0.0;
    if (p == 2.0 && opt.exact_p2)
        return ExactSquareWindow(f)(u);
    QuadOptions q;
    q.rel_tol = opt.rel_tol;
    auto r = integrate([&](double t) { return pow_abs(eval(f, t), p); }, u, u + pi, q, oscillation_width(f));
    return require_converged(r, "Stepanov window").value / pi;
}

double stepanov_norm(const ApPolynomial& f, double p, const NormOptions& opt) {
    require_p(p, false);
    if (f.empty())
        return 0.0;
    const double cover = quasi_period(f);
    const std::size_t grid = sup_grid(f, cover, opt.grid);
    Argmax best;
    if (p == 2.0 && opt.exact_p2) {
        const ExactSquareWindow window(f);
        best = maximize(window, 0.0, cover, grid, true, opt.step_tol,
                        [&](double a, double h, std::size_t m) { return window.grid(a, h, m); });
    } else {
        QuadOptions q;
        q.rel_tol = opt.rel_tol;
        const double width = oscillation_width(f);
        auto window = [&](double u) {
            auto r = integrate([&](double t) { return pow_abs(eval(f, t), p); }, u, u + pi, q, width);
            return require_converged(r, "Stepanov window").value / pi;
        };
        best = maximize(window, 0.0, cover, grid, true, opt.step_tol);
    }
    return std::pow(std::max(best.value, 0.0), 1.0 / p);
}

double stepanov_norm(const SymmetricDifference& phi, double p, const NormOptions& opt) {
    return stepanov_norm(phi.as_polynomial(), p, opt);
}

double stepanov_norm(const std::function<double(double)>& g, double cover, double p, std::size_t grid,
                     const NormOptions& opt, double max_width, const CuspLocator& cusps) {
    require_p(p, false);
    if (!(cover > 0.0))
        throw InvalidArgument("window cover must be positive");
    QuadOptions q;
    q.rel_tol = opt.rel_tol;
    auto plain_window = [&](double u) {
        auto r = integrate([&](double t) { return pow_abs(g(t), p); }, u, u + pi, q, max_width);
        return require_converged(r, "Stepanov window").value / pi;
    };
    auto smoothed_window = [&](double u) {
        std::vector<double> ends{u};
        for (double c : cusps(u, u + pi))
            if (c > ends.back() && c < u + pi)
                ends.push_back(c);
        ends.push_back(u + pi);
        // s-panels: each cusp-free piece maps onto [i, i + 1]
        std::vector<double> breaks{0.0};
        for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
            const double len = ends[i + 1] - ends[i];
            const std::size_t m = max_width > 0.0 ? static_cast<std::size_t>(std::ceil(len / max_width)) : 1;
            for (std::size_t j = 1; j <= m; ++j)
                breaks.push_back(static_cast<double>(i) + static_cast<double>(j) / static_cast<double>(m));
        }
        breaks.back() = static_cast<double>(ends.size() - 1);
        auto integrand = [&](double s) {
            const auto i = std::min(static_cast<std::size_t>(s), ends.size() - 2);
            const double tau = s - static_cast<double>(i);
            const double a = ends[i], len = ends[i + 1] - a;
            const double t = a + len * tau * tau * (3.0 - 2.0 * tau);
            return pow_abs(g(t), p) * len * 6.0 * tau * (1.0 - tau);
        };
        auto r = integrate_panels(integrand, breaks, q);
        return require_converged(r, "Stepanov window").value / pi;
    };
    auto window = [&](double u) { return cusps ? smoothed_window(u) : plain_window(u); };
    const Argmax best = maximize(window, 0.0, cover, grid, true, opt.step_tol);
    return std::pow(std::max(best.value, 0.0), 1.0 / p);
}

double sup_norm(const ApPolynomial& f, const NormOptions& opt) {
    if (f.empty())
        return 0.0;
    const double cover = quasi_period(f);
    const std::size_t grid = sup_grid(f, cover, opt.grid);
    const Argmax best = maximize([&](double u) { return std::abs(eval(f, u)); }, 0.0, cover, grid, true,
                                 std::min(opt.step_tol, 1e-6));
    return best.value;
}

double parseval_norm(const ApPolynomial& f) {
    double s = 0.0;
    for (const auto& t : f.terms())
        s += (t.lambda == 0.0 ? 1.0 : 2.0) * std::norm(t.coefficient);
    return std::sqrt(s);
}

double besicovitch_norm(const ApPolynomial& f, double p, const NormOptions& opt) {
    require_p(p, true);
    if (f.empty())
        return 0.0;
    const double half_length = 64.0 * quasi_period(f);
    QuadOptions q;
    q.rel_tol = opt.rel_tol;
    const double width = oscillation_width(f);

    // Fejer-weighted mean (1/L) int_{-L}^{L} (1 - |t|/L) |f(t)|^p dt
    auto fejer_mean = [&](double L) {
        auto g = [&](double t) { return (1.0 - std::abs(t) / L) * pow_abs(eval(f, t), p); };
        auto left = integrate(g, -L, 0.0, q, width);
        auto right = integrate(g, 0.0, L, q, width);
        require_converged(left, "Besicovitch mean");
        require_converged(right, "Besicovitch mean");
        return (left.value + right.value) / L;
    };
    const double coarse = std::pow(std::max(fejer_mean(half_length), 0.0), 1.0 / p);
    const double fine = std::pow(std::max(fejer_mean(2.0 * half_length), 0.0), 1.0 / p);
    if (std::abs(fine - coarse) >= 1e-4)
        throw NumericFailure("Besicovitch mean value did not stabilise under doubling of L");
    if (p == 2.0 && std::abs(fine - parseval_norm(f)) >= 1e-4)
        throw NumericFailure("Besicovitch norm disagrees with Parseval value");
    return fine;
}

double norm(const ApPolynomial& f, const NormKind& kind, const NormOptions& opt) {
    switch (kind.tag) {
    case NormTag::Stepanov: return stepanov_norm(f, kind.p, opt);
    case NormTag::Sup: return sup_norm(f, opt);
    case NormTag::Besicovitch: return besicovitch_norm(f, kind.p, opt);
    }
    throw InvalidArgument("unknown norm kind");
}

namespace {

void require_delta(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw InvalidArgument("delta must be finite and positive");
}

} // namespace

double omega_modulus(const ApPolynomial& f, double delta, double p, const NormOptions& opt) {
    const double d[] = {delta};
    return omega_modulus_sequence(f, d, p, opt).front().value;
}

std::vector<ModulusEstimate> omega_modulus_sequence(const ApPolynomial& f, std::span<const double> deltas, double p,
                                                    const NormOptions& opt) {
    require_p(p, false);
    std::vector<ModulusEstimate> out;
    out.reserve(deltas.size());
    double carried = 0.0;
    double previous_delta = 0.0;
    for (double delta : deltas) {
        require_delta(delta);
        if (delta < previous_delta)
            throw InvalidArgument("deltas must be ascending");
        previous_delta = delta;
        double value = 0.0;
        if (!f.empty()) {
            auto shifted = [&](double t) { return stepanov_norm(f.shifted_difference(t), p, opt); };
            value = maximize(shifted, -delta, delta, 129, false, std::min(opt.step_tol, 1e-3 * delta)).value;
        }
        carried = std::max(carried, value);
        out.push_back({delta, carried, ModulusKind::OmegaStepanov, 0.0});
    }
    return out;
}

double wx_modulus(const ApPolynomial& f, double x, double delta, double p, const NormOptions& opt) {
    const double d[] = {delta};
    return wx_modulus_sequence(f, x, d, p, opt).front().value;
}

std::vector<ModulusEstimate> wx_modulus_sequence(const ApPolynomial& f, double x, std::span<const double> deltas,
                                                 double p, const NormOptions& opt) {
    require_p(p, false);
    const SymmetricDifference phi(f, x);
    QuadOptions q;
    q.rel_tol = opt.rel_tol;
    const double width = oscillation_width(f);
    auto values = parallel_map(deltas.size(), [&](std::size_t i) {
        const double delta = deltas[i];
        require_delta(delta);
        auto r = integrate([&](double t) { return pow_abs(phi(t), p); }, 0.0, delta, q, width);
        require_converged(r, "pointwise modulus");
        return std::pow(std::max(r.value, 0.0) / delta, 1.0 / p);
    });
    std::vector<ModulusEstimate> out;
    for (std::size_t i = 0; i < deltas.size(); ++i)
        out.push_back({deltas[i], values[i], ModulusKind::PointwiseSymmetric, x});
    return out;
}

BestApproxBracket best_approx_bracket(const ApPolynomial& f, double sigma, double p, const NormOptions& opt) {
    if (!(sigma >= 0.0))
        throw InvalidArgument("exponential type sigma must be nonnegative");
    const ApPolynomial tail = f.tail_above(sigma);
    BestApproxBracket b;
    if (tail.empty())
        return b;
    for (const auto& t : tail.terms())
        b.lower = std::max(b.lower, std::abs(t.coefficient));
    b.upper = stepanov_norm(tail, p, opt);
    return b;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi >= lo) || n == 0)
        throw InvalidArgument("log grid needs 0 < lo <= hi and n > 0");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    g.back() = hi;
    return g;
}

namespace {

// max over the grid of the displaced-difference and pointwise-modulus ratios
double membership_constant(const SymmetricDifference& phi, const ModulusModel& w, double p, std::size_t n,
                           double width, const NormOptions& opt) {
    const auto grid = log_grid(1e-3, pi, n);
    QuadOptions q;
    q.rel_tol = opt.rel_tol;
    q.abs_tol = 1e-300;

    for (double g : grid)
        if (!(w.w(g) > 0.0))
            throw DegenerateModulus("modulus vanishes at a positive argument");

    // (1/delta) int_0^delta |h|^p for every delta in the grid via cumulative pieces
    auto running_means = [&](const auto& h) {
        std::vector<double> means(grid.size());
        NeumaierSum acc;
        double prev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto r = integrate([&](double t) { return pow_abs(h(t), p); }, prev, grid[i], q, width);
            acc.add(require_converged(r, "membership integral").value);
            means[i] = std::pow(std::max(acc.value(), 0.0) / grid[i], 1.0 / p);
            prev = grid[i];
        }
        return means;
    };

    // index 2j: gamma_j with +, 2j+1: gamma_j with -, 2n: pointwise modulus
    const auto ratios = parallel_map(2 * grid.size() + 1, [&](std::size_t idx) {
        double worst = 0.0;
        if (idx == 2 * grid.size()) {
            const auto means = running_means(phi);
            for (std::size_t i = 0; i < grid.size(); ++i)
                worst = std::max(worst, means[i] / w.w(grid[i]));
            return worst;
        }
        const double gamma = grid[idx / 2];
        const double shift = (idx % 2 == 0) ? gamma : -gamma;
        const auto means = running_means([&](double t) { return phi(t) - phi(t + shift); });
        const double wg = w.w(gamma);
        for (double m : means)
            worst = std::max(worst, m / wg);
        return worst;
    });
    double c = 0.0;
    for (double r : ratios)
        c = std::max(c, r);
    return c;
}

} // namespace

MembershipResult class_membership_check(const ApPolynomial& f, double x, const ModulusModel& w, double p,
                                        std::size_t grid, const NormOptions& opt) {
    require_p(p, false);
    w.validate();
    if (grid < 2)
        throw InvalidArgument("membership grid needs at least 2 points");
    const SymmetricDifference phi(f, x);
    const double width = oscillation_width(f);
    MembershipResult out;
    out.coarse_constant = membership_constant(phi, w, p, grid, width, opt);
    out.constant = membership_constant(phi, w, p, 2 * grid, width, opt);
    const bool finite = std::isfinite(out.constant) && std::isfinite(out.coarse_constant);
    const bool stable = std::abs(out.constant - out.coarse_constant) <= 0.25 * out.coarse_constant
                        || (out.constant == 0.0 && out.coarse_constant == 0.0);
    out.pass = finite && stable;
    return out;
}

} // namespace apx
