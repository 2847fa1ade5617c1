#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

namespace dnp {

enum class GraphKind { power, tan, log1p, rational, custom };

std::string to_string(GraphKind kind);

/// Parameters for building one of the shipped graphs.
struct GraphDescriptor {
    GraphKind kind = GraphKind::power;
    double q = 2.0;  ///< exponent of the power graph |s|^{q-2}s; ignored otherwise

    bool operator==(const GraphDescriptor&) const = default;
};

/// User-supplied nonlinearity. beta and j are required; missing hooks are
/// recovered numerically (j* by concave maximization, beta^{-1} by bisection,
/// beta' by central differences).
struct CustomGraphHooks {
    std::function<double(double)> beta;
    std::function<double(double)> primitive;
    std::function<double(double)> conjugate;
    std::function<double(double)> inverse;
    std::function<double(double)> derivative;
    double domain_lo = -std::numeric_limits<double>::infinity();
    double domain_hi = std::numeric_limits<double>::infinity();
    double range_lo = -std::numeric_limits<double>::infinity();
    double range_hi = std::numeric_limits<double>::infinity();
    bool locally_lipschitz = true;
    bool inverse_locally_lipschitz = true;
};

/// A maximal monotone graph beta = j' with beta(0) = 0, together with its
/// primitive j, conjugate j*, and inverse. Immutable after construction.
///
/// The open domain (domain_lo, domain_hi) may be a proper interval; evaluating
/// beta outside it raises DomainError. j is also accepted on the closure when it
/// stays finite there (log1p at s = -1).
class MonotoneGraph {
public:
    static MonotoneGraph power(double q);
    static MonotoneGraph tangent();
    static MonotoneGraph log1p();
    /// s / (s + 1) on (-1, inf).
    static MonotoneGraph rational();
    static MonotoneGraph custom(CustomGraphHooks hooks);

    GraphKind kind() const { return kind_; }
    double exponent() const { return q_; }
    std::string describe() const;

    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }
    bool in_domain(double s) const { return s > lo_ && s < hi_; }

    /// Closure of range(beta).
    double range_lo() const;
    double range_hi() const;

    double beta(double s) const;
    double primitive(double s) const;
    double conjugate(double sigma) const;
    double inverse(double sigma) const;
    double derivative(double s) const;

    bool locally_lipschitz() const;
    bool inverse_locally_lipschitz() const;
    bool full_domain() const;

private:
    MonotoneGraph() = default;
    void require_domain(double s, const char* what) const;

    GraphKind kind_ = GraphKind::power;
    double q_ = 2.0;
    double lo_ = -std::numeric_limits<double>::infinity();
    double hi_ = std::numeric_limits<double>::infinity();
    std::shared_ptr<const CustomGraphHooks> hooks_;
};

MonotoneGraph make_graph(const GraphDescriptor& descriptor);

/// j*(sigma) = sup_s (sigma s - j(s)), by golden section on the concave
/// objective followed by a Newton polish on sigma - beta(s) = 0.
double conjugate_by_maximization(const MonotoneGraph& g, double sigma, double tol = 1e-10);

/// j*(sigma) with the closed form when available; throws OutOfRangeError when
/// sigma lies outside the closure of range(beta).
double graph_conjugate_eval(const MonotoneGraph& g, double sigma);

}  // namespace dnp
