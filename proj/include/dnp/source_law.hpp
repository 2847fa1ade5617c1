#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "dnp/monotone_graph.hpp"

namespace dnp {

enum class SourceKind { zero, linear, power, square, sine, neg_cubic, custom };

std::string to_string(SourceKind kind);

/// Parameters for the shipped source terms:
/// linear lambda*s, power lambda*|s|^{r-2}s, square s^2, sine sin(s), neg_cubic -s^3.
struct SourceDescriptor {
    SourceKind kind = SourceKind::zero;
    double lambda = 1.0;
    double r = 2.0;

    bool operator==(const SourceDescriptor&) const = default;
};

/// A Lipschitz constant that holds on [lo, hi].
struct LipschitzBound {
    double constant = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Continuous source F with an optional truncation level M. Immutable; the
/// truncated copy is produced by with_truncation.
class SourceLaw {
public:
    static SourceLaw zero();
    static SourceLaw from_descriptor(const SourceDescriptor& d);
    static SourceLaw custom(std::function<double(double)> f, bool monotone,
                            std::optional<LipschitzBound> lipschitz = std::nullopt);

    SourceLaw with_truncation(double M) const;
    /// Copy that no longer claims monotonicity (disables the checks that need it).
    SourceLaw without_monotone() const;

    SourceKind kind() const { return kind_; }
    const SourceDescriptor& descriptor() const { return desc_; }
    bool monotone() const { return monotone_; }
    bool is_zero() const { return kind_ == SourceKind::zero; }
    bool has_truncation() const { return M_.has_value(); }
    /// Throws InvalidParameter when no truncation level has been set.
    double truncation_level() const;
    std::string describe() const;

    double operator()(double s) const { return eval(s); }
    double eval(double s) const;
    /// clamp(F(s), -M, M).
    double truncated(double s) const;

    /// Lipschitz constant of F on [lo, hi]: the supplied bound when it covers the
    /// interval, closed form for zero and linear sources, otherwise sampled
    /// difference quotients.
    double lipschitz_on(double lo, double hi) const;

private:
    SourceLaw() = default;

    SourceKind kind_ = SourceKind::zero;
    SourceDescriptor desc_;
    bool monotone_ = true;
    std::optional<double> M_;
    std::optional<LipschitzBound> lipschitz_;
    std::shared_ptr<const std::function<double(double)>> custom_;
};

double truncate_source(const SourceLaw& F, double s);

/// psi^M(s) = integral over [0, s] of F^M(beta(sigma)) d sigma, by adaptive quadrature.
/// s must lie in the closure of D(beta).
double psi_truncated_primitive(const SourceLaw& F, const MonotoneGraph& g, double s);

}  // namespace dnp
