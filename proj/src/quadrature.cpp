#include "apx/quadrature.hpp"

#include <string>

#include "apx/error.hpp"

namespace apx {

std::vector<double> uniform_breaks(double a, double b, double max_width) {
    if (!(b > a))
        return {a, b};
    const double width = b - a;
    std::size_t count = 1;
    if (max_width > 0.0 && width > max_width)
        count = static_cast<std::size_t>(std::ceil(width / max_width));
    std::vector<double> breaks(count + 1);
    for (std::size_t i = 0; i <= count; ++i)
        breaks[i] = a + width * static_cast<double>(i) / static_cast<double>(count);
    breaks.back() = b;
    return breaks;
}

const QuadResult& require_converged(const QuadResult& r, const char* what) {
    if (!r.converged)
        throw QuadratureFailure(std::string(what) + ": adaptive quadrature did not converge", r.worst_panel);
    return r;
}

} // namespace apx
