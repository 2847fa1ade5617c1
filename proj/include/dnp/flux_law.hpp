#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dnp/types.hpp"

namespace dnp {

/// One weighted p-Laplacian contribution w * |z|^{p-2} z.
struct FluxTerm {
    double p = 2.0;
    double weight = 1.0;

    bool operator==(const FluxTerm&) const = default;
};

/// Spatial coefficient kappa(x) multiplying the whole flux, with bounds
/// kappa_lo <= kappa <= kappa_hi used for the structure constants.
struct FluxCoefficient {
    std::function<double(const Vec2&)> kappa;
    double lo = 1.0;
    double hi = 1.0;
};

/// The pair (a, alpha = D_z a): a sum of weighted p_i-Laplacian potentials,
/// optionally scaled by kappa(x). Terms with p < 2 are regularized as
/// a_eps(z) = ((|z|^2 + eps^2)^{p/2} - eps^p) / p. Immutable.
class FluxLaw {
public:
    static FluxLaw p_laplacian(double p, double epsilon = 1e-8);
    static FluxLaw sum_of_p_laplacians(std::vector<FluxTerm> terms, double epsilon = 1e-8);

    FluxLaw with_coefficient(FluxCoefficient coefficient) const;
    FluxLaw with_epsilon(double epsilon) const;

    /// Effective exponent max_i p_i.
    double exponent() const { return p_; }
    double epsilon() const { return eps_; }
    /// Coercivity constant c of the structure conditions.
    double coercivity() const { return c_; }
    /// Growth constant C of the structure conditions.
    double growth() const { return C_; }
    bool homogeneous() const { return !coefficient_; }
    /// alpha is linear in z (every term has p = 2).
    bool quadratic() const;
    bool singular() const { return p_min_ < 2.0; }
    const std::vector<FluxTerm>& terms() const { return terms_; }
    std::string describe() const;

    double potential(const Vec2& x, const Vec2& z) const;
    Vec2 flux(const Vec2& x, const Vec2& z) const;
    /// D_z alpha(x, z), row-major.
    Mat2 jacobian(const Vec2& x, const Vec2& z) const;
    /// Jacobian with every p < 2 term replaced by its secant curvature
    /// (|z|^2 + eps^2)^{(p-2)/2} I, an upper bound of its Hessian.
    Mat2 secant_curvature(const Vec2& x, const Vec2& z) const;

    /// Right-hand side of the strong monotonicity condition for the pair (z1, z2):
    /// c|z1 - z2|^p for p >= 2, c|z1 - z2|^2 / (|z1|^{2-p} + |z2|^{2-p}) for p < 2
    /// (with |z| replaced by sqrt(|z|^2 + eps^2) when eps > 0).
    double monotonicity_bound(const Vec2& z1, const Vec2& z2) const;

private:
    FluxLaw() = default;
    void compute_constants();
    double kappa(const Vec2& x) const;
    double term_eps(const FluxTerm& t) const { return t.p < 2.0 ? eps_ : 0.0; }

    std::vector<FluxTerm> terms_;
    double eps_ = 0.0;
    double p_ = 2.0;
    double p_min_ = 2.0;
    double c_ = 0.0;
    double C_ = 0.0;
    std::shared_ptr<const FluxCoefficient> coefficient_;
};

Vec2 flux_eval(const FluxLaw& law, const Vec2& x, const Vec2& z);
double potential_eval(const FluxLaw& law, const Vec2& x, const Vec2& z);

}  // namespace dnp
