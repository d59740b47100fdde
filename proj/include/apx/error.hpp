#ifndef APX_ERROR_HPP
#define APX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace apx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or precondition (out-of-range parameter, malformed config).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed or invalid configuration file.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A stored value breaks a type invariant; `index` names the offending entry.
class InvariantViolation : public InvalidArgument {
public:
    InvariantViolation(std::string what, std::size_t index)
        : InvalidArgument(what + " (index " + std::to_string(index) + ")"), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Numerical procedure failed to reach its tolerance.
class NumericFailure : public Error {
public:
    using Error::Error;
};

/// Quadrature on a specific panel did not converge.
class QuadratureFailure : public NumericFailure {
public:
    QuadratureFailure(const std::string& what, std::size_t panel)
        : NumericFailure(what + " (panel " + std::to_string(panel) + ")"), panel_(panel) {}

    std::size_t panel() const noexcept { return panel_; }

private:
    std::size_t panel_;
};

/// A requested tolerance cannot be met within the configured resource caps.
class CapacityError : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

/// A user-supplied modulus is not of modulus-of-continuity type.
class ModulusValidationError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Modulus vanishes at a positive argument, so ratios against it are undefined.
class DegenerateModulus : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Named theorem hypotheses checked before a rate experiment runs.
enum class Hypothesis {
    RowNormalization,       // nonnegative, lower triangular, rows sum to one
    ExponentRange,          // 1 < q/(q-1) <= p <= q (and q <= p_tilde for norm estimates)
    RestBoundedVariation,   // RBVS rows with bounded constant
    HeadBoundedVariation,   // HBVS rows with bounded constant
    ModulusIntegral,        // the u^{p/q} int_u^pi w^p / t^{1+p/q} = O(u H(u)) condition
    RateIntegral,           // int_0^t H = O(t H(t))
    ClassMembership,        // f belongs to the modulus class at x
    SecondaryExponent,      // q' in (0, q]
};

const char* hypothesis_name(Hypothesis h) noexcept;

/// A theorem harness refused to run because a hypothesis failed.
class HypothesisRefused : public Error {
public:
    HypothesisRefused(Hypothesis h, const std::string& detail)
        : Error(std::string("hypothesis refused: ") + hypothesis_name(h) + ": " + detail), hypothesis_(h) {}

    Hypothesis hypothesis() const noexcept { return hypothesis_; }

private:
    Hypothesis hypothesis_;
};

inline const char* hypothesis_name(Hypothesis h) noexcept {
    switch (h) {
    case Hypothesis::RowNormalization: return "row normalization (nonnegative lower-triangular rows summing to 1)";
    case Hypothesis::ExponentRange: return "exponent chain 1 < q/(q-1) <= p <= q";
    case Hypothesis::RestBoundedVariation: return "rest bounded variation (RBVS) of matrix rows";
    case Hypothesis::HeadBoundedVariation: return "head bounded variation (HBVS) of matrix rows";
    case Hypothesis::ModulusIntegral: return "modulus integral condition against u*H(u)";
    case Hypothesis::RateIntegral: return "rate integral condition int_0^t H = O(t H(t))";
    case Hypothesis::ClassMembership: return "class membership of f for the modulus w_x";
    case Hypothesis::SecondaryExponent: return "secondary exponent q' in (0, q]";
    }
    return "unknown";
}

} // namespace apx

#endif
