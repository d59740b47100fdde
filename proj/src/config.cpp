#include "apx/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "apx/error.hpp"

namespace apx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object())
        throw ConfigError(where + ": expected a JSON object");
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key))
            throw ConfigError(where + ": unknown key \"" + key + "\"");
}

double number(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(where + ": missing \"" + key + "\"");
    if (!it->is_number())
        throw ConfigError(where + ": \"" + key + "\" must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v))
        throw ConfigError(where + ": \"" + key + "\" must be finite");
    return v;
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

fs::path resolve_path(const std::string& ref, const fs::path& base_dir) {
    fs::path p(ref);
    if (p.is_relative() && !base_dir.empty())
        p = base_dir / p;
    return p;
}

GammaSpec gamma_from_json(const json& j) {
    const std::string where = "gamma";
    if (j.is_string()) {
        if (j.get<std::string>() != "half_alpha")
            throw ConfigError(where + ": unknown cut sequence \"" + j.get<std::string>() + "\"");
        return GammaSpec::half_alpha();
    }
    if (j.is_array()) {
        std::vector<double> values;
        for (const auto& v : j) {
            if (!v.is_number())
                throw ConfigError(where + ": values must be numbers");
            values.push_back(v.get<double>());
        }
        return GammaSpec::explicit_values(std::move(values));
    }
    reject_unknown(j, {"scale", "offset"}, where);
    return GammaSpec::linear(number(j, "scale", where), number_or(j, "offset", 0.0, where));
}

TheoremKind kind_from_string(const std::string& s) {
    if (s == "T1")
        return TheoremKind::T1;
    if (s == "T2")
        return TheoremKind::T2;
    if (s == "T3")
        return TheoremKind::T3;
    if (s == "T4")
        return TheoremKind::T4;
    throw ConfigError("kind must be one of T1, T2, T3, T4");
}

json side_json(const VariationSide& s) {
    auto value = [](double v) -> json {
        if (std::isinf(v))
            return "UNBOUNDED";
        return v;
    };
    json per_row = json::array();
    for (double k : s.per_row_K)
        per_row.push_back(value(k));
    return {{"uniform_K", value(s.uniform_K)},
            {"growth", value(s.growth)},
            {"unbounded_trend", s.unbounded_trend},
            {"holds", s.holds},
            {"per_row_K", per_row}};
}

} // namespace

ApPolynomial function_from_json(const json& j) {
    reject_unknown(j, {"alpha", "terms", "name"}, "function");
    const double alpha = number(j, "alpha", "function");
    const auto it = j.find("terms");
    if (it == j.end() || !it->is_array())
        throw ConfigError("function: \"terms\" must be an array");
    std::vector<ApPolynomial::Term> terms;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const json& t = (*it)[i];
        const std::string where = "function term " + std::to_string(i);
        reject_unknown(t, {"lambda", "re", "im"}, where);
        terms.push_back({number(t, "lambda", where), complex(number(t, "re", where), number_or(t, "im", 0.0, where))});
    }
    try {
        return ApPolynomial(std::move(terms), alpha);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("function: ") + e.what());
    }
}

ApPolynomial load_function_file(const fs::path& path) {
    try {
        return function_from_json(read_json(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

NamedFunction resolve_function(const std::string& ref, std::uint64_t seed, const fs::path& base_dir) {
    constexpr std::string_view prefix = "corpus:";
    if (ref.starts_with(prefix)) {
        const std::string name = ref.substr(prefix.size());
        auto f = corpus_member(name, seed);
        if (!f)
            throw ConfigError("unknown corpus member \"" + name + "\"");
        return {name, *f};
    }
    const fs::path p = resolve_path(ref, base_dir);
    return {p.stem().string(), load_function_file(p)};
}

SummabilityMatrix matrix_from_json(const json& j, std::string name) {
    reject_unknown(j, {"rows", "name"}, "matrix");
    const auto it = j.find("rows");
    if (it == j.end() || !it->is_array())
        throw ConfigError("matrix: \"rows\" must be an array of arrays");
    std::vector<std::vector<double>> rows;
    for (std::size_t n = 0; n < it->size(); ++n) {
        const json& r = (*it)[n];
        if (!r.is_array())
            throw ConfigError("matrix: row " + std::to_string(n) + " must be an array");
        std::vector<double> row;
        for (const auto& v : r) {
            if (!v.is_number() || !std::isfinite(v.get<double>()))
                throw ConfigError("matrix: row " + std::to_string(n) + " holds a non-numeric entry");
            row.push_back(v.get<double>());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ConfigError("matrix: no rows");
    if (j.contains("name") && j["name"].is_string())
        name = j["name"].get<std::string>();
    return SummabilityMatrix::from_rows(std::move(name), std::move(rows));
}

SummabilityMatrix resolve_matrix(const std::string& ref, const fs::path& base_dir) {
    const fs::path p = resolve_path(ref, base_dir);
    if (ref.ends_with(".json") || fs::exists(p)) {
        try {
            return matrix_from_json(read_json(p), p.stem().string());
        } catch (const ConfigError& e) {
            throw ConfigError(p.string() + ": " + e.what());
        }
    }
    try {
        return builtin_matrix(ref);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

ExperimentConfig experiment_from_json(const json& j, const fs::path& base_dir) {
    const std::string where = "experiment";
    reject_unknown(j,
                   {"kind", "function", "matrix", "p", "q", "q_prime", "p_tilde", "beta", "c", "n_list", "x",
                    "x_grid", "gamma", "seed"},
                   where);
    ExperimentConfig cfg;
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ConfigError(where + ": \"kind\" must be a string");
    cfg.kind = kind_from_string(j["kind"].get<std::string>());

    std::uint64_t seed = 0;
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw ConfigError(where + ": \"seed\" must be a nonnegative integer");
        seed = j["seed"].get<std::uint64_t>();
    }

    ExperimentSetup& s = cfg.setup;
    const auto fn = j.find("function");
    if (fn == j.end())
        throw ConfigError(where + ": missing \"function\"");
    if (fn->is_string()) {
        auto named = resolve_function(fn->get<std::string>(), seed, base_dir);
        s.function_name = named.name;
        s.f = std::move(named.function);
    } else {
        s.f = function_from_json(*fn);
        s.function_name = fn->value("name", std::string("inline"));
    }

    const auto mx = j.find("matrix");
    if (mx == j.end())
        throw ConfigError(where + ": missing \"matrix\"");
    s.matrix = mx->is_string() ? resolve_matrix(mx->get<std::string>(), base_dir) : matrix_from_json(*mx, "inline");

    s.p = number_or(j, "p", 2.0, where);
    s.q = number_or(j, "q", 2.0, where);
    s.q_prime = number_or(j, "q_prime", s.q, where);
    s.p_tilde = number_or(j, "p_tilde", 2.0, where);
    s.x = number_or(j, "x", 0.0, where);
    const double beta = number_or(j, "beta", 0.25, where);
    const double c = number_or(j, "c", 1.0, where);
    try {
        s.w = ModulusModel::power_law(c, beta);
    } catch (const InvalidArgument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    if (j.contains("x_grid")) {
        if (!j["x_grid"].is_number_unsigned() || j["x_grid"].get<std::size_t>() < 2)
            throw ConfigError(where + ": \"x_grid\" must be an integer >= 2");
        s.x_grid = j["x_grid"].get<std::size_t>();
    }
    if (j.contains("gamma")) {
        try {
            s.gamma = gamma_from_json(j["gamma"]);
        } catch (const ConfigError&) {
            throw;
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("gamma: ") + e.what());
        }
    }
    if (j.contains("n_list")) {
        const json& nl = j["n_list"];
        if (!nl.is_array() || nl.empty())
            throw ConfigError(where + ": \"n_list\" must be a nonempty array");
        cfg.n_list.clear();
        for (const auto& v : nl) {
            if (!v.is_number_unsigned())
                throw ConfigError(where + ": \"n_list\" entries must be nonnegative integers");
            cfg.n_list.push_back(v.get<int>());
        }
    }
    return cfg;
}

ExperimentConfig load_experiment_file(const fs::path& path) {
    try {
        return experiment_from_json(read_json(path), path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::vector<double> parse_deltas(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    unsigned n = 0;
    char tail[8] = {};
    const int got = std::sscanf(spec.c_str(), "%lf:%lf:%u%7s", &lo, &hi, &n, tail);
    const bool log_spaced = got == 4 && std::string(tail) == "log";
    if (!(got == 3 || log_spaced) || n < 1 || !(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
        throw ConfigError("deltas must look like lo:hi:N or lo:hi:Nlog with 0 < lo < hi");
    if (log_spaced)
        return log_grid(lo, hi, n);
    std::vector<double> out;
    for (unsigned i = 0; i < n; ++i)
        out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

std::pair<int, int> parse_int_range(const std::string& spec) {
    int a = 0, b = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%d..%d%c", &a, &b, &extra) == 2 && a <= b)
        return {a, b};
    if (std::sscanf(spec.c_str(), "%d%c", &a, &extra) == 1)
        return {a, a};
    throw ConfigError("range must look like a..b");
}

std::string format_value(double v) {
    if (v == 0.0)
        v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

json to_json(const VariationReport& r) {
    auto value = [](double v) -> json {
        if (std::isinf(v))
            return "UNBOUNDED";
        return v;
    };
    return {{"n_max", r.n_max},
            {"class", variation_class_name(r.variation_class)},
            {"uniform_K_rbvs", value(r.rbvs.uniform_K)},
            {"uniform_K_hbvs", value(r.hbvs.uniform_K)},
            {"rbvs", side_json(r.rbvs)},
            {"hbvs", side_json(r.hbvs)}};
}

} // namespace apx
