#include "apx/summability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "apx/error.hpp"
#include "apx/quadrature.hpp"

namespace apx {

namespace {

constexpr double unbounded = std::numeric_limits<double>::infinity();

double ratio_or_unbounded(double variation, double pivot) {
    if (pivot > 0.0)
        return variation / pivot;
    return variation > 0.0 ? unbounded : 0.0;
}

// d_k = |a_{nk} - a_{n,k+1}| for k = 0..n (a_{n,n+1} = 0)
std::vector<double> row_jumps(const std::vector<double>& row) {
    std::vector<double> d(row.size());
    for (std::size_t k = 0; k < row.size(); ++k)
        d[k] = std::abs(row[k] - (k + 1 < row.size() ? row[k + 1] : 0.0));
    return d;
}

void check_cut(int n, int m) {
    if (n < 0 || m < 0 || m > n)
        throw InvalidArgument("variation index out of range: need 0 <= m <= n");
}

VariationSide summarize(std::vector<double> per_row) {
    VariationSide side;
    side.per_row_K = std::move(per_row);
    side.uniform_K = 0.0;
    for (double k : side.per_row_K)
        side.uniform_K = std::max(side.uniform_K, k);
    const int n_max = static_cast<int>(side.per_row_K.size()) - 1;
    const double last = side.per_row_K[static_cast<std::size_t>(n_max)];
    const double half = side.per_row_K[static_cast<std::size_t>(n_max / 2)];
    if (half > 0.0)
        side.growth = last / half;
    else
        side.growth = last > 0.0 ? unbounded : 1.0;
    side.unbounded_trend = side.growth > growth_trend_threshold;
    side.holds = std::isfinite(side.uniform_K) && !side.unbounded_trend;
    return side;
}

} // namespace

SummabilityMatrix::SummabilityMatrix(std::string name, Generator generator)
    : name_(std::move(name)), generator_(std::move(generator)) {
    if (!generator_)
        throw InvalidArgument("summability matrix needs a generator");
}

SummabilityMatrix SummabilityMatrix::from_rows(std::string name, std::vector<std::vector<double>> rows) {
    if (rows.empty())
        throw InvalidArgument("explicit matrix needs at least one row");
    for (std::size_t n = 0; n < rows.size(); ++n) {
        if (rows[n].empty())
            throw InvariantViolation("matrix row must not be empty", n);
        for (double v : rows[n])
            if (!std::isfinite(v))
                throw InvariantViolation("matrix entries must be finite", n);
    }
    SummabilityMatrix m(std::move(name), [](int, int) { return 0.0; });
    m.rows_ = std::move(rows);
    return m;
}

void SummabilityMatrix::check_row_index(int n) const {
    if (n < 0)
        throw InvalidArgument("matrix row index must be nonnegative");
    if (rows_ && static_cast<std::size_t>(n) >= rows_->size())
        throw InvalidArgument("matrix row " + std::to_string(n) + " is not defined (explicit matrix has "
                              + std::to_string(rows_->size()) + " rows)");
}

double SummabilityMatrix::operator()(int n, int k) const {
    check_row_index(n);
    if (k < 0)
        throw InvalidArgument("matrix column index must be nonnegative");
    if (rows_) {
        const auto& r = (*rows_)[static_cast<std::size_t>(n)];
        return static_cast<std::size_t>(k) < r.size() ? r[static_cast<std::size_t>(k)] : 0.0;
    }
    return generator_(n, k);
}

std::vector<double> SummabilityMatrix::row(int n) const {
    check_row_index(n);
    std::vector<double> r(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        r[static_cast<std::size_t>(k)] = (*this)(n, k);
    return r;
}

std::optional<int> SummabilityMatrix::last_row() const noexcept {
    if (rows_)
        return static_cast<int>(rows_->size()) - 1;
    return std::nullopt;
}

int SummabilityMatrix::stored_width(int n) const {
    check_row_index(n);
    if (rows_)
        return std::max(n + 1, static_cast<int>((*rows_)[static_cast<std::size_t>(n)].size()));
    return n + 2;
}

SummabilityMatrix builtin_matrix(const std::string& name) {
    if (name == "cesaro")
        return SummabilityMatrix(name, [](int n, int k) { return k <= n ? 1.0 / (n + 1) : 0.0; });
    if (name == "one_hot")
        return SummabilityMatrix(name, [](int n, int k) { return k == n ? 1.0 : 0.0; });
    if (name == "increasing")
        return SummabilityMatrix(name, [](int n, int k) {
            return k <= n ? 2.0 * (k + 1) / (static_cast<double>(n + 1) * (n + 2)) : 0.0;
        });
    if (name == "riesz" || name.rfind("riesz:", 0) == 0) {
        double s = 1.0;
        if (name.size() > 6) {
            try {
                std::size_t used = 0;
                s = std::stod(name.substr(6), &used);
                if (used != name.size() - 6)
                    throw InvalidArgument("trailing characters");
            } catch (const std::exception&) {
                throw InvalidArgument("riesz exponent must be a number: " + name);
            }
            if (!std::isfinite(s))
                throw InvalidArgument("riesz exponent must be finite: " + name);
        }
        return SummabilityMatrix(name, [s](int n, int k) {
            if (k > n)
                return 0.0;
            double total = 0.0;
            for (int j = 0; j <= n; ++j)
                total += std::pow(j + 1.0, s);
            return std::pow(k + 1.0, s) / total;
        });
    }
    throw InvalidArgument("unknown matrix: " + name);
}

std::optional<RowViolation> validate_rows(const SummabilityMatrix& a, int n_max) {
    if (n_max < 0)
        throw InvalidArgument("n_max must be nonnegative");
    if (const auto last = a.last_row(); last && n_max > *last)
        throw InvalidArgument("matrix has only " + std::to_string(*last + 1) + " rows");
    for (int n = 0; n <= n_max; ++n) {
        const int width = a.stored_width(n);
        NeumaierSum sum;
        for (int k = 0; k < width; ++k) {
            const double v = a(n, k);
            if (v < 0.0)
                return RowViolation{n, k, RowClause::Nonnegative};
            if (k > n && v != 0.0)
                return RowViolation{n, k, RowClause::LowerTriangular};
            if (k <= n)
                sum.add(v);
        }
        if (std::abs(sum.value() - 1.0) > 1e-12)
            return RowViolation{n, n, RowClause::RowSum};
    }
    return std::nullopt;
}

double rbvs_constant(const SummabilityMatrix& a, int n, int m) {
    check_cut(n, m);
    const auto r = a.row(n);
    const auto d = row_jumps(r);
    NeumaierSum variation;
    for (int k = m; k <= n; ++k)
        variation.add(d[static_cast<std::size_t>(k)]);
    return ratio_or_unbounded(variation.value(), r[static_cast<std::size_t>(m)]);
}

double hbvs_constant(const SummabilityMatrix& a, int n, int m) {
    check_cut(n, m);
    const auto r = a.row(n);
    const auto d = row_jumps(r);
    NeumaierSum variation;
    for (int k = 0; k < m; ++k)
        variation.add(d[static_cast<std::size_t>(k)]);
    return ratio_or_unbounded(variation.value(), r[static_cast<std::size_t>(m)]);
}

const char* variation_class_name(VariationClass c) noexcept {
    switch (c) {
    case VariationClass::Rbvs: return "RBVS";
    case VariationClass::Hbvs: return "HBVS";
    case VariationClass::Both: return "both";
    case VariationClass::Neither: return "neither";
    }
    return "neither";
}

VariationReport classify(const SummabilityMatrix& a, int n_max) {
    if (n_max < 0)
        throw InvalidArgument("n_max must be nonnegative");
    std::vector<double> rest(static_cast<std::size_t>(n_max) + 1), head(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const auto r = a.row(n);
        const auto d = row_jumps(r);
        // suffix sums for the rest variation, prefix sums for the head variation
        std::vector<double> suffix(d.size() + 1, 0.0);
        for (std::size_t k = d.size(); k-- > 0;)
            suffix[k] = suffix[k + 1] + d[k];
        double rest_k = 0.0, head_k = 0.0, prefix = 0.0;
        for (int m = 0; m <= n; ++m) {
            const double pivot = r[static_cast<std::size_t>(m)];
            rest_k = std::max(rest_k, ratio_or_unbounded(suffix[static_cast<std::size_t>(m)], pivot));
            head_k = std::max(head_k, ratio_or_unbounded(prefix, pivot));
            prefix += d[static_cast<std::size_t>(m)];
        }
        rest[static_cast<std::size_t>(n)] = rest_k;
        head[static_cast<std::size_t>(n)] = head_k;
    }
    VariationReport report;
    report.n_max = n_max;
    report.rbvs = summarize(std::move(rest));
    report.hbvs = summarize(std::move(head));
    if (report.rbvs.holds && report.hbvs.holds)
        report.variation_class = VariationClass::Both;
    else if (report.rbvs.holds)
        report.variation_class = VariationClass::Rbvs;
    else if (report.hbvs.holds)
        report.variation_class = VariationClass::Hbvs;
    return report;
}

bool head_inequality_holds(const SummabilityMatrix& a, double K, int n_max) {
    for (int n = 0; n <= n_max; ++n) {
        const auto r = a.row(n);
        // a_{n,mu} <= (K+1) a_{n,m} for all mu <= m  <=>  running max of the head <= (K+1) a_{n,m}
        double head_max = 0.0;
        for (int m = 0; m <= n; ++m) {
            head_max = std::max(head_max, r[static_cast<std::size_t>(m)]);
            if (head_max > (K + 1.0) * r[static_cast<std::size_t>(m)] + 1e-12)
                return false;
        }
    }
    return true;
}

GammaSpec GammaSpec::half_alpha() { return GammaSpec{}; }

GammaSpec GammaSpec::linear(double scale, double offset) {
    if (!std::isfinite(scale) || !std::isfinite(offset) || scale < 0.0 || offset < 0.0)
        throw InvalidArgument("invalid gamma spec: linear cuts need scale >= 0 and offset >= 0");
    GammaSpec g;
    g.kind_ = Kind::Linear;
    g.scale_ = scale;
    g.offset_ = offset;
    return g;
}

GammaSpec GammaSpec::explicit_values(std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0)
            throw InvariantViolation("invalid gamma spec: cuts must be finite and nonnegative", i);
        if (i > 0 && values[i] < values[i - 1])
            throw InvariantViolation("invalid gamma spec: cuts must be nondecreasing", i);
    }
    GammaSpec g;
    g.kind_ = Kind::Explicit;
    g.values_ = std::move(values);
    return g;
}

double GammaSpec::at(int k, double alpha) const {
    if (k < 0)
        throw InvalidArgument("gamma index must be nonnegative");
    switch (kind_) {
    case Kind::HalfAlpha: return 0.5 * alpha * k;
    case Kind::Linear: return offset_ + scale_ * k;
    case Kind::Explicit:
        if (static_cast<std::size_t>(k) >= values_.size())
            throw InvalidArgument("invalid gamma spec: explicit cuts shorter than row length");
        return values_[static_cast<std::size_t>(k)];
    }
    return 0.0;
}

double strong_mean(const ApPolynomial& f, const SummabilityMatrix& a, int n, double q, const GammaSpec& gamma,
                   double x, const StrongMeanOptions& opt) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw InvalidArgument("strong mean exponent q must be positive and finite");
    if (n < 0)
        throw InvalidArgument("row index n must be nonnegative");
    if (opt.mode == PartialSumMode::Kernel && !gamma.is_half_alpha())
        throw InvalidArgument("kernel mode needs the cut sequence gamma_k = alpha k / 2");
    const auto row = a.row(n);
    const double fx = f.empty() ? 0.0 : eval(f, x);
    NeumaierSum sum;
    for (int k = 0; k <= n; ++k) {
        const double weight = row[static_cast<std::size_t>(k)];
        double partial = 0.0;
        if (opt.mode == PartialSumMode::Direct) {
            partial = partial_sum_direct(f, gamma.at(k, f.alpha()), x);
        } else {
            if (star_partial_sum(f, k, x).interval_has_exponent)
                throw InvalidArgument("kernel mode: interval for k = " + std::to_string(k)
                                      + " contains an exponent, so the kernel does not reproduce the partial sum");
            partial = partial_sum_via_kernel(f, k, x, opt.kernel).value;
        }
        const double dev = std::abs(partial - fx);
        sum.add(weight * (q == 1.0 ? dev : std::pow(dev, q)));
    }
    return q == 1.0 ? sum.value() : std::pow(std::max(sum.value(), 0.0), 1.0 / q);
}

StrongMeanProfile::StrongMeanProfile(const ApPolynomial& f, const SummabilityMatrix& a, int n, double q,
                                     const GammaSpec& gamma)
    : f_(f), q_(q) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw InvalidArgument("strong mean exponent q must be positive and finite");
    if (n < 0)
        throw InvalidArgument("row index n must be nonnegative");
    const auto row = a.row(n);
    const auto terms = f.terms();
    weight_.assign(terms.size() + 1, 0.0);
    std::size_t kept = 0;
    for (int k = 0; k <= n; ++k) {
        const double g = gamma.at(k, f.alpha());
        if (!(g >= 0.0))
            throw InvalidArgument("partial sum cut gamma must be nonnegative");
        kept = 0;
        while (kept < terms.size() && terms[kept].lambda <= g)
            ++kept;
        weight_[kept] += row[static_cast<std::size_t>(k)];
    }
}

double StrongMeanProfile::operator()(double x) const {
    const auto terms = f_.terms();
    // tail_c = f(x) - S(x) keeping the first c terms, accumulated from the top
    double tail = 0.0;
    double total = 0.0;
    for (std::size_t c = terms.size() + 1; c-- > 0;) {
        if (c < terms.size()) {
            const auto& t = terms[c];
            tail += t.lambda == 0.0 ? t.coefficient.real() : 2.0 * (t.coefficient * std::polar(1.0, t.lambda * x)).real();
        }
        if (weight_[c] != 0.0)
            total += weight_[c] * std::pow(std::abs(tail), q_);
    }
    return std::pow(std::max(total, 0.0), 1.0 / q_);
}

std::vector<double> StrongMeanProfile::cusps(double lo, double hi) const {
    std::vector<double> out;
    const auto terms = f_.terms();
    if (terms.empty() || !(hi > lo) || (std::fmod(q_, 2.0) == 0.0))
        return out;
    auto tails = [&](double x) {
        std::vector<double> t(terms.size() + 1, 0.0);
        for (std::size_t c = terms.size(); c-- > 0;) {
            const auto& term = terms[c];
            t[c] = t[c + 1] + (term.lambda == 0.0 ? term.coefficient.real()
                                                   : 2.0 * (term.coefficient * std::polar(1.0, term.lambda * x)).real());
        }
        return t;
    };
    auto tail_at = [&](std::size_t c, double x) { return tails(x)[c]; };

    const double h = std::numbers::pi / (8.0 * std::max(f_.max_exponent(), 1.0));
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    const double step = (hi - lo) / static_cast<double>(steps);
    auto prev = tails(lo);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double a = lo + step * static_cast<double>(i - 1);
        const double b = i == steps ? hi : lo + step * static_cast<double>(i);
        const auto cur = tails(b);
        for (std::size_t c = 0; c < terms.size(); ++c) {
            if (weight_[c] == 0.0)
                continue;
            if (cur[c] == 0.0) {
                out.push_back(b);
            } else if ((prev[c] < 0.0) != (cur[c] < 0.0) && prev[c] != 0.0) {
                std::uintmax_t iters = 64;
                const auto root = boost::math::tools::toms748_solve(
                    [&](double x) { return tail_at(c, x); }, a, b, prev[c], cur[c],
                    boost::math::tools::eps_tolerance<double>(50), iters);
                out.push_back(0.5 * (root.first + root.second));
            }
        }
        prev = cur;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return y - x <= 1e-13 * std::max(1.0, std::abs(y)); }),
              out.end());
    return out;
}

} // namespace apx
