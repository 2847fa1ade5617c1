#include "dnp/monotone_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dnp/errors.hpp"
#include "dnp/numerics.hpp"

namespace dnp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfPi = std::numbers::pi / 2.0;

double signed_pow(double s, double e) {
    if (s == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(s), e), s);
}

// Pushes `b` away from 0 (in the direction of `dir`) until beta(b) passes sigma
// or the domain edge is approached. Returns the last point tried.
double expand_bracket(const MonotoneGraph& g, double sigma, double dir) {
    const double edge = dir > 0 ? g.domain_hi() : g.domain_lo();
    double prev = 0.0;
    double b = dir;
    for (int k = 0; k < 400; ++k) {
        if (!g.in_domain(b)) b = 0.5 * (prev + edge);
        const double v = g.beta(b);
        if ((dir > 0 && v >= sigma) || (dir < 0 && v <= sigma)) return b;
        prev = b;
        b = std::isfinite(edge) ? 0.5 * (b + edge) : 2.0 * b;
        if (b == prev) return b;
    }
    return b;
}

}  // namespace

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::power: return "power";
        case GraphKind::tan: return "tan";
        case GraphKind::log1p: return "log1p";
        case GraphKind::rational: return "rational";
        case GraphKind::custom: return "custom";
    }
    return "unknown";
}

MonotoneGraph MonotoneGraph::power(double q) {
    if (!(q > 1.0) || !std::isfinite(q)) {
        std::ostringstream msg;
        msg << "power graph requires q > 1 (got q = " << q << ")";
        throw InvalidParameter(msg.str());
    }
    MonotoneGraph g;
    g.kind_ = GraphKind::power;
    g.q_ = q;
    return g;
}

MonotoneGraph MonotoneGraph::tangent() {
    MonotoneGraph g;
    g.kind_ = GraphKind::tan;
    g.lo_ = -kHalfPi;
    g.hi_ = kHalfPi;
    return g;
}

MonotoneGraph MonotoneGraph::log1p() {
    MonotoneGraph g;
    g.kind_ = GraphKind::log1p;
    g.lo_ = -1.0;
    return g;
}

MonotoneGraph MonotoneGraph::rational() {
    MonotoneGraph g;
    g.kind_ = GraphKind::rational;
    g.lo_ = -1.0;
    return g;
}

MonotoneGraph MonotoneGraph::custom(CustomGraphHooks hooks) {
    if (!hooks.beta || !hooks.primitive)
        throw InvalidParameter("custom graph requires beta and its primitive j");
    if (!(hooks.domain_lo < 0.0 && hooks.domain_hi > 0.0))
        throw InvalidParameter("custom graph domain must contain 0 in its interior");
    MonotoneGraph g;
    g.kind_ = GraphKind::custom;
    g.lo_ = hooks.domain_lo;
    g.hi_ = hooks.domain_hi;
    g.hooks_ = std::make_shared<const CustomGraphHooks>(std::move(hooks));
    return g;
}

MonotoneGraph make_graph(const GraphDescriptor& d) {
    switch (d.kind) {
        case GraphKind::power: return MonotoneGraph::power(d.q);
        case GraphKind::tan: return MonotoneGraph::tangent();
        case GraphKind::log1p: return MonotoneGraph::log1p();
        case GraphKind::rational: return MonotoneGraph::rational();
        case GraphKind::custom: break;
    }
    throw InvalidParameter("custom graphs are built from hooks, not descriptors");
}

std::string MonotoneGraph::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case GraphKind::power: out << "power(q=" << format_real(q_) << ")"; break;
        case GraphKind::tan: out << "tan"; break;
        case GraphKind::log1p: out << "log1p"; break;
        case GraphKind::rational: out << "rational"; break;
        case GraphKind::custom: out << "custom"; break;
    }
    return out.str();
}

double MonotoneGraph::range_lo() const {
    if (kind_ == GraphKind::custom) return hooks_->range_lo;
    return -kInf;
}

double MonotoneGraph::range_hi() const {
    if (kind_ == GraphKind::custom) return hooks_->range_hi;
    if (kind_ == GraphKind::rational) return 1.0;
    return kInf;
}

void MonotoneGraph::require_domain(double s, const char* what) const {
    if (!in_domain(s)) {
        std::ostringstream msg;
        msg << what << ": s = " << s << " outside D(beta) = (" << lo_ << ", " << hi_ << ")";
        throw DomainError(msg.str());
    }
}

double MonotoneGraph::beta(double s) const {
    require_domain(s, "beta");
    switch (kind_) {
        case GraphKind::power: return signed_pow(s, q_ - 1.0);
        case GraphKind::tan: return std::tan(s);
        case GraphKind::log1p: return std::log1p(s);
        case GraphKind::rational: return s / (s + 1.0);
        case GraphKind::custom: return hooks_->beta(s);
    }
    return 0.0;
}

double MonotoneGraph::primitive(double s) const {
    if (kind_ == GraphKind::log1p && s == -1.0) return 1.0;
    require_domain(s, "j");
    switch (kind_) {
        case GraphKind::power: return std::pow(std::abs(s), q_) / q_;
        case GraphKind::tan: return -std::log(std::cos(s));
        case GraphKind::log1p: return (1.0 + s) * std::log1p(s) - s;
        case GraphKind::rational: return s - std::log1p(s);
        case GraphKind::custom: return hooks_->primitive(s);
    }
    return 0.0;
}

double MonotoneGraph::conjugate(double sigma) const {
    if (std::isnan(sigma) || sigma < range_lo() || sigma > range_hi()) {
        std::ostringstream msg;
        msg << "j*: sigma = " << sigma << " outside closure of range(beta)";
        throw OutOfRangeError(msg.str());
    }
    switch (kind_) {
        case GraphKind::power: {
            const double qc = q_ / (q_ - 1.0);
            return std::pow(std::abs(sigma), qc) / qc;
        }
        case GraphKind::tan: return sigma * std::atan(sigma) - 0.5 * std::log1p(sigma * sigma);
        case GraphKind::log1p: return std::expm1(sigma) - sigma;
        case GraphKind::rational:
            if (sigma == 1.0) return kInf;
            return -sigma - std::log1p(-sigma);
        case GraphKind::custom:
            if (hooks_->conjugate) return hooks_->conjugate(sigma);
            return conjugate_by_maximization(*this, sigma);
    }
    return 0.0;
}

double MonotoneGraph::inverse(double sigma) const {
    if (std::isnan(sigma) || !(sigma > range_lo() && sigma < range_hi())) {
        std::ostringstream msg;
        msg << "beta^{-1}: sigma = " << sigma << " outside range(beta)";
        throw OutOfRangeError(msg.str());
    }
    switch (kind_) {
        case GraphKind::power: return signed_pow(sigma, 1.0 / (q_ - 1.0));
        case GraphKind::tan: return std::atan(sigma);
        case GraphKind::log1p: return std::expm1(sigma);
        case GraphKind::rational: return sigma / (1.0 - sigma);
        case GraphKind::custom: break;
    }
    if (hooks_->inverse) return hooks_->inverse(sigma);
    if (sigma == 0.0) return 0.0;
    // Minimal-norm selection: the end of the level set {beta = sigma} nearest to 0.
    const double dir = sigma > 0 ? 1.0 : -1.0;
    double near = 0.0;
    double far = expand_bracket(*this, sigma, dir);
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (near + far);
        if (mid == near || mid == far) break;
        const double v = beta(mid);
        const bool reached = dir > 0 ? v >= sigma : v <= sigma;
        (reached ? far : near) = mid;
    }
    return far;
}

double MonotoneGraph::derivative(double s) const {
    require_domain(s, "beta'");
    switch (kind_) {
        case GraphKind::power:
            if (s == 0.0) return q_ < 2.0 ? kInf : (q_ == 2.0 ? 1.0 : 0.0);
            return (q_ - 1.0) * std::pow(std::abs(s), q_ - 2.0);
        case GraphKind::tan: {
            const double t = std::tan(s);
            return 1.0 + t * t;
        }
        case GraphKind::log1p: return 1.0 / (1.0 + s);
        case GraphKind::rational: return 1.0 / ((1.0 + s) * (1.0 + s));
        case GraphKind::custom: break;
    }
    if (hooks_->derivative) return hooks_->derivative(s);
    double h = 1e-6 * std::max(1.0, std::abs(s));
    h = std::min({h, 0.5 * (s - lo_), 0.5 * (hi_ - s)});
    return (hooks_->beta(s + h) - hooks_->beta(s - h)) / (2.0 * h);
}

bool MonotoneGraph::locally_lipschitz() const {
    switch (kind_) {
        case GraphKind::power: return q_ >= 2.0;
        case GraphKind::custom: return hooks_->locally_lipschitz;
        default: return true;
    }
}

bool MonotoneGraph::inverse_locally_lipschitz() const {
    switch (kind_) {
        case GraphKind::power: return q_ <= 2.0;
        case GraphKind::custom: return hooks_->inverse_locally_lipschitz;
        default: return true;
    }
}

bool MonotoneGraph::full_domain() const { return std::isinf(lo_) && std::isinf(hi_); }

double conjugate_by_maximization(const MonotoneGraph& g, double sigma, double tol) {
    if (std::isnan(sigma) || sigma < g.range_lo() || sigma > g.range_hi())
        throw OutOfRangeError("j*: sigma outside closure of range(beta)");
    if (sigma == 0.0) return 0.0;
    if (sigma == g.range_lo() || sigma == g.range_hi()) return kInf;

    const double dir = sigma > 0 ? 1.0 : -1.0;
    const double far = expand_bracket(g, sigma, dir);
    const double lo = std::min(0.0, far);
    const double hi = std::max(0.0, far);
    const auto objective = [&](double s) { return sigma * s - g.primitive(s); };

    double s = golden_section_argmax(objective, lo, hi, std::min(tol, 1e-12));
    for (int k = 0; k < 8; ++k) {
        const double slope = g.derivative(s);
        if (!(slope > 0.0) || !std::isfinite(slope)) break;
        const double next = s - (g.beta(s) - sigma) / slope;
        if (!(next >= lo && next <= hi) || !g.in_domain(next)) break;
        if (std::abs(next - s) <= 1e-16 * std::max(1.0, std::abs(s))) {
            s = next;
            break;
        }
        s = next;
    }
    return objective(s);
}

double graph_conjugate_eval(const MonotoneGraph& g, double sigma) { return g.conjugate(sigma); }

}  // namespace dnp
