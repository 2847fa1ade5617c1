#include "dnp/flux_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dnp/errors.hpp"
#include "dnp/numerics.hpp"

namespace dnp {

namespace {

// Structure constants of a single unweighted regularized p-Laplacian (eps <= 1).
double term_coercivity(double p) {
    if (p >= 2.0) return std::min(1.0 / p, std::pow(2.0, 2.0 - p) / (p - 1.0));
    return std::min(1.0 / p, p - 1.0);
}

double term_growth(double p) { return std::max(1.0, std::pow(2.0, p / 2.0)); }

}  // namespace

FluxLaw FluxLaw::p_laplacian(double p, double epsilon) {
    return sum_of_p_laplacians({FluxTerm{p, 1.0}}, epsilon);
}

FluxLaw FluxLaw::sum_of_p_laplacians(std::vector<FluxTerm> terms, double epsilon) {
    if (terms.empty()) throw InvalidParameter("flux law needs at least one term");
    for (const auto& t : terms) {
        if (!(t.p > 1.0) || !std::isfinite(t.p)) {
            std::ostringstream msg;
            msg << "flux exponent must satisfy p > 1 (got p = " << t.p << ")";
            throw InvalidParameter(msg.str());
        }
        if (!(t.weight > 0.0)) throw InvalidParameter("flux term weights must be positive");
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw InvalidParameter("flux regularization eps must lie in [0, 1]");
    FluxLaw law;
    law.terms_ = std::move(terms);
    law.eps_ = epsilon;
    law.compute_constants();
    return law;
}

FluxLaw FluxLaw::with_coefficient(FluxCoefficient coefficient) const {
    if (!coefficient.kappa) throw InvalidParameter("flux coefficient needs an evaluator");
    if (!(coefficient.lo > 0.0 && coefficient.hi >= coefficient.lo))
        throw InvalidParameter("flux coefficient bounds must satisfy 0 < lo <= hi");
    FluxLaw law = *this;
    law.coefficient_ = std::make_shared<const FluxCoefficient>(std::move(coefficient));
    law.compute_constants();
    return law;
}

FluxLaw FluxLaw::with_epsilon(double epsilon) const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw InvalidParameter("flux regularization eps must lie in [0, 1]");
    FluxLaw law = *this;
    law.eps_ = epsilon;
    return law;
}

void FluxLaw::compute_constants() {
    p_ = 0.0;
    p_min_ = terms_.front().p;
    double w_top = 0.0;
    double growth_sum = 0.0;
    for (const auto& t : terms_) {
        p_min_ = std::min(p_min_, t.p);
        growth_sum += t.weight * term_growth(t.p);
        if (t.p > p_) {
            p_ = t.p;
            w_top = t.weight;
        } else if (t.p == p_) {
            w_top += t.weight;
        }
    }
    const double klo = coefficient_ ? coefficient_->lo : 1.0;
    const double khi = coefficient_ ? coefficient_->hi : 1.0;
    c_ = klo * w_top * term_coercivity(p_);
    C_ = terms_.size() == 1 ? khi * growth_sum : 2.0 * khi * growth_sum;
}

bool FluxLaw::quadratic() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const FluxTerm& t) { return t.p == 2.0; });
}

std::string FluxLaw::describe() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) out << " + ";
        if (terms_[i].weight != 1.0) out << format_real(terms_[i].weight) << "*";
        out << "p_laplacian(p=" << format_real(terms_[i].p) << ")";
    }
    if (singular()) out << " eps=" << format_real(eps_);
    if (coefficient_) out << " with kappa(x)";
    return out.str();
}

double FluxLaw::kappa(const Vec2& x) const { return coefficient_ ? coefficient_->kappa(x) : 1.0; }

double FluxLaw::potential(const Vec2& x, const Vec2& z) const {
    const double z2 = dot(z, z);
    double sum = 0.0;
    for (const auto& t : terms_) {
        const double e = term_eps(t);
        if (e == 0.0) {
            sum += t.weight * std::pow(z2, t.p / 2.0) / t.p;
        } else {
            const double ep = std::pow(e, t.p);
            sum += t.weight * (std::pow(z2 + e * e, t.p / 2.0) - ep) / t.p;
        }
    }
    return kappa(x) * sum;
}

Vec2 FluxLaw::flux(const Vec2& x, const Vec2& z) const {
    const double z2 = dot(z, z);
    double scale = 0.0;
    for (const auto& t : terms_) {
        if (t.p == 2.0) {
            scale += t.weight;
            continue;
        }
        const double s = z2 + term_eps(t) * term_eps(t);
        if (s == 0.0) continue;
        scale += t.weight * std::pow(s, (t.p - 2.0) / 2.0);
    }
    scale *= kappa(x);
    return {scale * z[0], scale * z[1]};
}

Mat2 FluxLaw::jacobian(const Vec2& x, const Vec2& z) const {
    const double z2 = dot(z, z);
    double diag = 0.0;
    double outer = 0.0;
    for (const auto& t : terms_) {
        if (t.p == 2.0) {
            diag += t.weight;
            continue;
        }
        const double s = z2 + term_eps(t) * term_eps(t);
        if (s == 0.0) {
            diag += t.p > 2.0 ? 0.0 : std::numeric_limits<double>::infinity();
            continue;
        }
        const double base = std::pow(s, (t.p - 2.0) / 2.0);
        diag += t.weight * base;
        outer += t.weight * (t.p - 2.0) * base / s;
    }
    const double k = kappa(x);
    diag *= k;
    outer *= k;
    return {diag + outer * z[0] * z[0], outer * z[0] * z[1], outer * z[1] * z[0],
            diag + outer * z[1] * z[1]};
}

Mat2 FluxLaw::secant_curvature(const Vec2& x, const Vec2& z) const {
    const double z2 = dot(z, z);
    double diag = 0.0;
    double outer = 0.0;
    for (const auto& t : terms_) {
        if (t.p == 2.0) {
            diag += t.weight;
            continue;
        }
        const double s = z2 + term_eps(t) * term_eps(t);
        if (s == 0.0) {
            diag += t.p > 2.0 ? 0.0 : std::numeric_limits<double>::infinity();
            continue;
        }
        const double base = std::pow(s, (t.p - 2.0) / 2.0);
        diag += t.weight * base;
        if (t.p > 2.0) outer += t.weight * (t.p - 2.0) * base / s;
    }
    const double k = kappa(x);
    diag *= k;
    outer *= k;
    return {diag + outer * z[0] * z[0], outer * z[0] * z[1], outer * z[1] * z[0],
            diag + outer * z[1] * z[1]};
}

double FluxLaw::monotonicity_bound(const Vec2& z1, const Vec2& z2) const {
    const double dz = norm(z1 - z2);
    if (p_ >= 2.0) return c_ * std::pow(dz, p_);
    const double e2 = eps_ * eps_;
    const double n1 = std::pow(dot(z1, z1) + e2, (2.0 - p_) / 2.0);
    const double n2 = std::pow(dot(z2, z2) + e2, (2.0 - p_) / 2.0);
    if (n1 + n2 == 0.0) return 0.0;
    return c_ * dz * dz / (n1 + n2);
}

Vec2 flux_eval(const FluxLaw& law, const Vec2& x, const Vec2& z) { return law.flux(x, z); }
double potential_eval(const FluxLaw& law, const Vec2& x, const Vec2& z) { return law.potential(x, z); }

}  // namespace dnp
