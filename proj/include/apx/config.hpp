#ifndef APX_CONFIG_HPP
#define APX_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "apx/ap_polynomial.hpp"
#include "apx/summability.hpp"
#include "apx/verify.hpp"

namespace apx {

/// `{ "alpha": a, "terms": [ { "lambda": l, "re": r, "im": i } ] }`; "im" defaults to 0.
/// Throws ConfigError naming the first violated invariant and its term index.
ApPolynomial function_from_json(const nlohmann::json& j);

ApPolynomial load_function_file(const std::filesystem::path& path);

/// "corpus:<name>" or a path (relative paths resolve against base_dir).
NamedFunction resolve_function(const std::string& ref, std::uint64_t seed, const std::filesystem::path& base_dir = {});

/// `{ "rows": [[...], ...] }`.
SummabilityMatrix matrix_from_json(const nlohmann::json& j, std::string name);

/// Built-in name (see builtin_matrix) or a matrix file path.
SummabilityMatrix resolve_matrix(const std::string& ref, const std::filesystem::path& base_dir = {});

struct ExperimentConfig {
    TheoremKind kind = TheoremKind::T1;
    ExperimentSetup setup;
    std::vector<int> n_list = default_n_list();
};

/*
 * Experiment file keys: kind (T1..T4), function (ref or inline object), matrix
 * (name, path or inline rows), p, q, q_prime, p_tilde, beta, c, n_list, x,
 * x_grid, gamma ("half_alpha", {"scale", "offset"} or a value list), seed.
 * Unknown keys are rejected.
 */
ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

ExperimentConfig load_experiment_file(const std::filesystem::path& path);

/// "lo:hi:N" (linear) or "lo:hi:Nlog" (log-spaced), 0 < lo < hi.
std::vector<double> parse_deltas(const std::string& spec);

/// "a..b" or a single integer.
std::pair<int, int> parse_int_range(const std::string& spec);

/// Fixed 6-significant-digit rendering used by every CSV column.
std::string format_value(double v);

nlohmann::json to_json(const VariationReport& r);

} // namespace apx

#endif
