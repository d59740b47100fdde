#ifndef APX_SUMMABILITY_HPP
#define APX_SUMMABILITY_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "apx/ap_polynomial.hpp"
#include "apx/kernel.hpp"

namespace apx {

/// Lower-triangular matrix (a_{nk}) given by a generator or by explicit rows.
class SummabilityMatrix {
public:
    using Generator = std::function<double(int n, int k)>;

    SummabilityMatrix(std::string name, Generator generator);

    /// Explicit rows; row n may be longer than n + 1 (validate_rows reports it).
    static SummabilityMatrix from_rows(std::string name, std::vector<std::vector<double>> rows);

    const std::string& name() const noexcept { return name_; }

    /// a_{nk}; entries past the stored part of an explicit row are 0.
    double operator()(int n, int k) const;

    /// (a_{n0}, ..., a_{nn}).
    std::vector<double> row(int n) const;

    /// Largest materializable row index (none for generators).
    std::optional<int> last_row() const noexcept;

    /// Number of entries validate_rows inspects in row n.
    int stored_width(int n) const;

private:
    void check_row_index(int n) const;

    std::string name_;
    Generator generator_;
    std::optional<std::vector<std::vector<double>>> rows_;
};

/// Named matrices: cesaro, one_hot, increasing, riesz (p_k = k + 1), riesz:<s> (p_k = (k + 1)^s).
SummabilityMatrix builtin_matrix(const std::string& name);

enum class RowClause { Nonnegative, LowerTriangular, RowSum };

struct RowViolation {
    int n = 0;
    int k = 0;
    RowClause clause = RowClause::RowSum;
};

/// First violation of nonnegativity, a_{nk} = 0 for k > n, or unit row sums (1e-12).
std::optional<RowViolation> validate_rows(const SummabilityMatrix& a, int n_max);

/// sum_{k=m}^{n} |a_{nk} - a_{n,k+1}| / a_{nm}; +inf when a_{nm} = 0 < variation, 0 when both vanish.
double rbvs_constant(const SummabilityMatrix& a, int n, int m);

/// sum_{k=0}^{m-1} |a_{nk} - a_{n,k+1}| / a_{nm}, same conventions.
double hbvs_constant(const SummabilityMatrix& a, int n, int m);

enum class VariationClass { Rbvs, Hbvs, Both, Neither };

const char* variation_class_name(VariationClass c) noexcept;

struct VariationSide {
    /// max over m of the constant for row n, n = 0..n_max (+inf = unbounded).
    std::vector<double> per_row_K;
    double uniform_K = 0.0;
    /// per_row_K(n_max) / per_row_K(n_max / 2).
    double growth = 1.0;
    bool unbounded_trend = false;
    /// Finite uniform constant and no growth trend.
    bool holds = false;
};

struct VariationReport {
    int n_max = 0;
    VariationSide rbvs;
    VariationSide hbvs;
    VariationClass variation_class = VariationClass::Neither;
};

/// Growth ratios above this are read as an unbounded trend.
inline constexpr double growth_trend_threshold = 1.5;

VariationReport classify(const SummabilityMatrix& a, int n_max);

/// Checks a_{n,mu} <= (K + 1) a_{n,m} + 1e-12 for all mu <= m <= n <= n_max.
bool head_inequality_holds(const SummabilityMatrix& a, double K, int n_max);

/// Cut sequence gamma_k for the strong mean.
class GammaSpec {
public:
    /// gamma_k = alpha k / 2.
    static GammaSpec half_alpha();
    /// gamma_k = offset + scale k.
    static GammaSpec linear(double scale, double offset);
    /// Explicit nondecreasing nonnegative values, gamma_k = values[k].
    static GammaSpec explicit_values(std::vector<double> values);

    double at(int k, double alpha) const;
    bool is_half_alpha() const noexcept { return kind_ == Kind::HalfAlpha; }

private:
    enum class Kind { HalfAlpha, Linear, Explicit };
    Kind kind_ = Kind::HalfAlpha;
    double scale_ = 0.0;
    double offset_ = 0.0;
    std::vector<double> values_;
};

enum class PartialSumMode { Direct, Kernel };

struct StrongMeanOptions {
    PartialSumMode mode = PartialSumMode::Direct;
    KernelOptions kernel;
};

/// { sum_{k=0}^{n} a_{nk} |S_{gamma_k} f(x) - f(x)|^q }^{1/q}, q > 0.
double strong_mean(const ApPolynomial& f, const SummabilityMatrix& a, int n, double q, const GammaSpec& gamma,
                   double x, const StrongMeanOptions& opt = {});

/*
 * x -> strong mean for fixed (f, A, n, q, gamma). Rows are grouped by the number
 * of spectral terms each partial sum keeps, so one evaluation costs O(#terms).
 */
class StrongMeanProfile {
public:
    StrongMeanProfile(const ApPolynomial& f, const SummabilityMatrix& a, int n, double q, const GammaSpec& gamma);

    double operator()(double x) const;

    /// Simple zeros in [lo, hi] of the weighted deviations f - S; |.|^q has a
    /// cusp there unless q is an even integer.
    std::vector<double> cusps(double lo, double hi) const;

private:
    ApPolynomial f_;
    double q_;
    /// weight_[c]: total row weight of partial sums keeping the first c terms.
    std::vector<double> weight_;
};

} // namespace apx

#endif
