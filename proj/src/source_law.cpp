#include "dnp/source_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dnp/errors.hpp"
#include "dnp/numerics.hpp"

namespace dnp {

std::string to_string(SourceKind kind) {
    switch (kind) {
        case SourceKind::zero: return "zero";
        case SourceKind::linear: return "linear";
        case SourceKind::power: return "power";
        case SourceKind::square: return "square";
        case SourceKind::sine: return "sine";
        case SourceKind::neg_cubic: return "neg_cubic";
        case SourceKind::custom: return "custom";
    }
    return "unknown";
}

SourceLaw SourceLaw::zero() { return SourceLaw{}; }

SourceLaw SourceLaw::from_descriptor(const SourceDescriptor& d) {
    SourceLaw F;
    F.kind_ = d.kind;
    F.desc_ = d;
    switch (d.kind) {
        case SourceKind::zero:
        case SourceKind::custom:
            if (d.kind == SourceKind::custom)
                throw InvalidParameter("custom sources are built from a callable");
            break;
        case SourceKind::linear: F.monotone_ = d.lambda >= 0.0; break;
        case SourceKind::power:
            if (!(d.r > 1.0)) {
                std::ostringstream msg;
                msg << "power source requires r > 1 (got r = " << d.r << ")";
                throw InvalidParameter(msg.str());
            }
            F.monotone_ = d.lambda >= 0.0;
            break;
        case SourceKind::square:
        case SourceKind::sine:
        case SourceKind::neg_cubic: F.monotone_ = false; break;
    }
    if (!std::isfinite(d.lambda)) throw InvalidParameter("source lambda must be finite");
    return F;
}

SourceLaw SourceLaw::custom(std::function<double(double)> f, bool monotone,
                            std::optional<LipschitzBound> lipschitz) {
    if (!f) throw InvalidParameter("custom source needs an evaluator");
    SourceLaw F;
    F.kind_ = SourceKind::custom;
    F.desc_.kind = SourceKind::custom;
    F.monotone_ = monotone;
    F.lipschitz_ = lipschitz;
    F.custom_ = std::make_shared<const std::function<double(double)>>(std::move(f));
    return F;
}

SourceLaw SourceLaw::without_monotone() const {
    SourceLaw F = *this;
    F.monotone_ = false;
    return F;
}

SourceLaw SourceLaw::with_truncation(double M) const {
    if (!(M > 0.0) || !std::isfinite(M)) {
        std::ostringstream msg;
        msg << "truncation level must be a finite M > 0 (got " << M << ")";
        throw InvalidParameter(msg.str());
    }
    SourceLaw F = *this;
    F.M_ = M;
    return F;
}

double SourceLaw::truncation_level() const {
    if (!M_) throw InvalidParameter("source has no truncation level");
    return *M_;
}

std::string SourceLaw::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case SourceKind::zero: out << "0"; break;
        case SourceKind::linear: out << format_real(desc_.lambda) << "*s"; break;
        case SourceKind::power:
            out << format_real(desc_.lambda) << "*|s|^" << format_real(desc_.r - 2.0) << "*s";
            break;
        case SourceKind::square: out << "s^2"; break;
        case SourceKind::sine: out << "sin(s)"; break;
        case SourceKind::neg_cubic: out << "-s^3"; break;
        case SourceKind::custom: out << "custom"; break;
    }
    return out.str();
}

double SourceLaw::eval(double s) const {
    switch (kind_) {
        case SourceKind::zero: return 0.0;
        case SourceKind::linear: return desc_.lambda * s;
        case SourceKind::power:
            if (s == 0.0) return 0.0;
            return desc_.lambda * std::copysign(std::pow(std::abs(s), desc_.r - 1.0), s);
        case SourceKind::square: return s * s;
        case SourceKind::sine: return std::sin(s);
        case SourceKind::neg_cubic: return -s * s * s;
        case SourceKind::custom: return (*custom_)(s);
    }
    return 0.0;
}

double SourceLaw::truncated(double s) const {
    const double M = truncation_level();
    return std::clamp(eval(s), -M, M);
}

double SourceLaw::lipschitz_on(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    if (lipschitz_ && lipschitz_->lo <= lo && lipschitz_->hi >= hi) return lipschitz_->constant;
    switch (kind_) {
        case SourceKind::zero: return 0.0;
        case SourceKind::linear: return std::abs(desc_.lambda);
        default: break;
    }
    if (lo == hi) return 0.0;
    return estimate_lipschitz([this](double s) { return eval(s); }, lo, hi);
}

double truncate_source(const SourceLaw& F, double s) { return F.truncated(s); }

double psi_truncated_primitive(const SourceLaw& F, const MonotoneGraph& g, double s) {
    if (!std::isfinite(s) || s < g.domain_lo() || s > g.domain_hi()) {
        std::ostringstream msg;
        msg << "psi^M: s = " << s << " outside the closure of D(beta)";
        throw DomainError(msg.str());
    }
    if (s == 0.0) return 0.0;
    const double M = F.truncation_level();
    return integrate([&](double sigma) { return std::clamp(F.eval(g.beta(sigma)), -M, M); }, 0.0, s,
                     1e-12);
}

}  // namespace dnp
