#ifndef APX_MODULUS_MODEL_HPP
#define APX_MODULUS_MODEL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace apx {

/// c * t^exponent.
struct PowerLaw {
    double c = 1.0;
    double exponent = 0.0;

    double operator()(double t) const;
};

/// Nonnegative rate function H paired with a modulus.
class RateFunction {
public:
    static RateFunction power_law(double c, double exponent);
    static RateFunction custom(std::function<double(double)> h, std::string name);
    static RateFunction zero();

    double operator()(double u) const { return h_(u); }
    const std::optional<PowerLaw>& as_power_law() const noexcept { return power_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::function<double(double)> h_;
    std::optional<PowerLaw> power_;
    std::string name_;
};

/*
 * A function w of modulus-of-continuity type (w(0) = 0, nondecreasing,
 * subadditive) together with its companion rate function H.
 */
class ModulusModel {
public:
    /// w(d) = c d^beta, H(u) = c u^{beta - 1}.
    static ModulusModel power_law(double c, double beta);

    /// Piecewise log-log linear interpolation of (delta, value) samples, linear from
    /// the origin below the first sample and flat beyond the last one.
    static ModulusModel tabulated(std::vector<double> deltas, std::vector<double> values, RateFunction h);

    static ModulusModel custom(std::function<double(double)> w, RateFunction h, std::string name);

    /// w == 0 and H == 0.
    static ModulusModel zero();

    double w(double delta) const { return w_(delta); }
    double H(double u) const { return h_(u); }
    const RateFunction& rate() const noexcept { return h_; }
    const std::optional<PowerLaw>& w_power_law() const noexcept { return w_power_; }
    const std::string& name() const noexcept { return name_; }

    /// Checks w(0) = 0, monotonicity on a 128-point grid and subadditivity on
    /// 128 pairs in [1e-3, pi]; throws ModulusValidationError.
    void validate() const;

private:
    std::function<double(double)> w_;
    RateFunction h_;
    std::optional<PowerLaw> w_power_;
    std::string name_;
};

} // namespace apx

#endif
