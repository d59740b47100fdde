#ifndef APX_SUITE_HPP
#define APX_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "apx/ap_polynomial.hpp"

namespace apx {

/// Outcome of one regression check. `values` holds only deterministic,
/// 6-significant-digit strings so the serialized suite is byte-stable.
struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
};

/// sum_nu A_nu m(lambda_nu) e^{i lambda_nu x} with the trapezoid multiplier
/// m = 1 on [0, lo], linear down to 0 at hi: the closed form of the kernel
/// representation, exact also when (lo, hi) holds an exponent.
double multiplier_sum(const ApPolynomial& f, double lo, double hi, double x);

CheckResult check_kernel_equivalence(std::uint64_t seed);
CheckResult check_closed_form_norms();
CheckResult check_classifier();
CheckResult check_strong_mean_arithmetic();
CheckResult check_condition_oracles();
CheckResult check_pointwise_theorems(std::uint64_t seed);
CheckResult check_norm_theorems(std::uint64_t seed);
CheckResult check_power_mean(std::uint64_t seed);

/// Checks 1 through 8 in order.
std::vector<CheckResult> run_suite(std::uint64_t seed);

nlohmann::ordered_json suite_summary(std::uint64_t seed, const std::vector<CheckResult>& results);

} // namespace apx

#endif
