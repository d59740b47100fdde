#ifndef APX_QUADRATURE_HPP
#define APX_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace apx {

struct QuadOptions {
    /// Relative to the integral of |f| over the range.
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    std::size_t max_intervals = 1u << 20;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    /// Integral of |f| (used as the reference for rel_tol).
    double l1 = 0.0;
    std::size_t intervals = 0;
    bool converged = false;
    /// Initial panel holding the worst remaining interval when not converged.
    std::size_t worst_panel = 0;
};

/// Compensated (Neumaier) summation.
class NeumaierSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

struct Segment {
    double a;
    double b;
    double value;
    double error;
    double l1;
    std::size_t panel;
};

template <class F>
Segment gk21(F& f, double a, double b, std::size_t panel) {
    double err = 0.0;
    double l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        [&f](double t) { return f(t); }, a, b, 0, 0.0, &err, &l1);
    return {a, b, v, err, l1, panel};
}

} // namespace detail

/*
 * Globally adaptive Gauss-Kronrod (21-point) quadrature over consecutive panels
 * [breaks[i], breaks[i+1]]. The segment with the largest error estimate is bisected
 * until the summed estimate is below max(abs_tol, rel_tol * int |f|). Results are
 * summed in left-to-right order, so the value depends only on the inputs.
 */
template <class F>
QuadResult integrate_panels(F&& f, std::span<const double> breaks, const QuadOptions& opt = {}) {
    QuadResult out;
    if (breaks.size() < 2)
        return out;

    std::vector<detail::Segment> done;
    auto worse = [](const detail::Segment& x, const detail::Segment& y) {
        if (x.error != y.error)
            return x.error < y.error;
        return x.a > y.a;
    };
    std::priority_queue<detail::Segment, std::vector<detail::Segment>, decltype(worse)> heap(worse);

    double total_err = 0.0;
    double total_l1 = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] <= breaks[i])
            continue;
        auto s = detail::gk21(f, breaks[i], breaks[i + 1], i);
        total_err += s.error;
        total_l1 += s.l1;
        heap.push(s);
    }

    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * total_l1); };
    while (!heap.empty() && total_err > target() && heap.size() + done.size() < opt.max_intervals) {
        detail::Segment s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) {
            done.push_back(s);
            continue;
        }
        auto left = detail::gk21(f, s.a, mid, s.panel);
        auto right = detail::gk21(f, mid, s.b, s.panel);
        total_err += left.error + right.error - s.error;
        total_l1 += left.l1 + right.l1 - s.l1;
        heap.push(left);
        heap.push(right);
    }

    out.converged = total_err <= target() * (1.0 + 1e-12) || heap.empty();
    if (!heap.empty())
        out.worst_panel = heap.top().panel;
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(), [](const auto& x, const auto& y) { return x.a < y.a; });

    NeumaierSum value, err, l1;
    for (const auto& s : done) {
        value.add(s.value);
        err.add(s.error);
        l1.add(s.l1);
    }
    out.value = value.value();
    out.error = err.value();
    out.l1 = l1.value();
    out.intervals = done.size();
    return out;
}

/// Uniform breakpoints on [a, b] with at most `max_width` per panel.
std::vector<double> uniform_breaks(double a, double b, double max_width);

/// Adaptive quadrature on [a, b], pre-split into panels no wider than max_width.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}, double max_width = 0.0) {
    if (b < a) {
        auto r = integrate(f, b, a, opt, max_width);
        r.value = -r.value;
        return r;
    }
    const auto breaks = uniform_breaks(a, b, max_width > 0.0 ? max_width : (b - a));
    return integrate_panels(f, breaks, opt);
}

/// Throws NumericFailure when a result did not converge.
const QuadResult& require_converged(const QuadResult& r, const char* what);

} // namespace apx

#endif
