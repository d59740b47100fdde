#include "apx/modulus_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "apx/error.hpp"

namespace apx {

double PowerLaw::operator()(double t) const {
    if (c == 0.0)
        return 0.0;
    if (t == 0.0)
        return exponent > 0.0 ? 0.0 : (exponent == 0.0 ? c : std::numeric_limits<double>::infinity());
    return c * std::pow(t, exponent);
}

RateFunction RateFunction::power_law(double c, double exponent) {
    if (!std::isfinite(c) || c < 0.0 || !std::isfinite(exponent))
        throw InvalidArgument("rate power law needs finite c >= 0 and finite exponent");
    RateFunction r;
    PowerLaw law{c, exponent};
    r.h_ = law;
    r.power_ = law;
    r.name_ = "power_law";
    return r;
}

RateFunction RateFunction::custom(std::function<double(double)> h, std::string name) {
    RateFunction r;
    r.h_ = std::move(h);
    r.name_ = std::move(name);
    return r;
}

RateFunction RateFunction::zero() { return power_law(0.0, 0.0); }

ModulusModel ModulusModel::power_law(double c, double beta) {
    if (!std::isfinite(c) || c < 0.0)
        throw InvalidArgument("modulus scale c must be finite and nonnegative");
    if (!(beta > 0.0 && beta < 1.0))
        throw InvalidArgument("power-law modulus needs 0 < beta < 1");
    ModulusModel m;
    PowerLaw law{c, beta};
    m.w_ = law;
    m.w_power_ = law;
    m.h_ = RateFunction::power_law(c, beta - 1.0);
    m.name_ = "power_law";
    return m;
}

ModulusModel ModulusModel::tabulated(std::vector<double> deltas, std::vector<double> values, RateFunction h) {
    if (deltas.size() != values.size() || deltas.empty())
        throw InvalidArgument("tabulated modulus needs matching, nonempty delta/value arrays");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0) || !std::isfinite(deltas[i]) || !(values[i] >= 0.0) || !std::isfinite(values[i]))
            throw InvariantViolation("tabulated modulus samples must be finite, delta > 0, value >= 0", i);
        if (i > 0 && deltas[i] <= deltas[i - 1])
            throw InvariantViolation("tabulated deltas must be strictly increasing", i);
    }
    ModulusModel m;
    m.w_ = [d = std::move(deltas), v = std::move(values)](double t) {
        if (t <= 0.0)
            return 0.0;
        if (t <= d.front())
            return v.front() * t / d.front();
        if (t >= d.back())
            return v.back();
        const auto it = std::upper_bound(d.begin(), d.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - d.begin());
        const double t0 = d[i - 1], t1 = d[i], v0 = v[i - 1], v1 = v[i];
        if (v0 <= 0.0 || v1 <= 0.0)
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        const double s = std::log(t / t0) / std::log(t1 / t0);
        return v0 * std::pow(v1 / v0, s);
    };
    m.h_ = std::move(h);
    m.name_ = "tabulated";
    return m;
}

ModulusModel ModulusModel::custom(std::function<double(double)> w, RateFunction h, std::string name) {
    ModulusModel m;
    m.w_ = std::move(w);
    m.h_ = std::move(h);
    m.name_ = std::move(name);
    return m;
}

ModulusModel ModulusModel::zero() {
    ModulusModel m;
    m.w_ = [](double) { return 0.0; };
    m.h_ = RateFunction::zero();
    m.name_ = "zero";
    return m;
}

void ModulusModel::validate() const {
    if (std::abs(w(0.0)) > 1e-15)
        throw ModulusValidationError("modulus must vanish at 0");
    constexpr int grid = 128;
    constexpr double lo = 1e-3, hi = std::numbers::pi;
    auto node = [](int i, int n) { return lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)); };

    double prev = w(0.0);
    for (int i = 0; i < grid; ++i) {
        const double v = w(node(i, grid));
        if (!std::isfinite(v) || v < 0.0)
            throw ModulusValidationError("modulus must be finite and nonnegative");
        if (v < prev - 1e-12 * std::max(1.0, std::abs(prev)))
            throw ModulusValidationError("modulus must be nondecreasing");
        prev = v;
    }
    // 16 x 8 pairs drawn from a log grid
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 8; ++j) {
            const double a = node(i, 16);
            const double b = node(2 * j + 1, 16);
            const double lhs = w(a + b);
            const double rhs = w(a) + w(b);
            if (lhs > rhs + 1e-12 * std::max(1.0, rhs))
                throw ModulusValidationError("modulus must be subadditive");
        }
    }
}

} // namespace apx
