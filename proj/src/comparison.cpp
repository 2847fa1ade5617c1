#include "dnp/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace dnp {

namespace {

constexpr double kOrderSlack = 1e-12;

double excess_tolerance(double bound) { return 1e-6 + 0.01 * bound; }

int order_of(const GridField& a, const GridField& b) {
    const bool le = (a.values.array() <= b.values.array()).all();
    const bool ge = (a.values.array() >= b.values.array()).all();
    if (le) return 1;
    if (ge) return -1;
    return 0;
}

void summarize(MonitorReport& r, const std::vector<double>& excess_allowance) {
    r.violations = 0;
    r.worst_slack = std::numeric_limits<double>::infinity();
    r.worst_index = -1;
    for (std::size_t k = 0; k < r.slack.size(); ++k) {
        if (r.slack[k] < -excess_allowance[k]) ++r.violations;
        // n = 0 compares D0 with itself; the informative slack starts at n = 1
        if (k > 0 && r.slack[k] < r.worst_slack) {
            r.worst_slack = r.slack[k];
            r.worst_index = static_cast<int>(k);
        }
    }
    if (r.worst_index < 0) r.worst_slack = r.slack.empty() ? 0.0 : r.slack.front();
}

MonitorReport envelope(const ComparisonRun& cr, const std::vector<double>& dist,
                       const std::vector<double>& forcing, const char* name, const char* statement) {
    MonitorReport r;
    r.name = name;
    r.statement = statement;
    r.tolerance = -1e-6;
    const double tau = cr.first.tau;
    std::vector<double> allowance;
    std::vector<double> bound_log;
    for (int n = 0; n <= cr.steps(); ++n) {
        const double t = n * tau;
        double bound = std::exp(cr.L * t) * dist.front();
        for (int k = 1; k <= n; ++k) bound += std::exp(cr.L * (t - k * tau)) * tau * forcing[k - 1];
        r.slack.push_back(bound - dist[n]);
        allowance.push_back(excess_tolerance(bound));
        bound_log.push_back(bound);
    }
    summarize(r, allowance);
    r.summary = {{"L", cr.L}, {"R", cr.R}, {"initial_distance", dist.front()},
                 {"final_distance", dist.back()}, {"final_bound", bound_log.back()}};
    return r;
}

}  // namespace

ComparisonRun run_pair(const EvolutionConfig& first, const GridField& u02, const Forcing& f2) {
    if (!(u02.grid == first.u0.grid)) throw ConfigError("both initial data must live on the same grid");
    EvolutionConfig a = first;
    EvolutionConfig b = first;
    b.u0 = u02;
    b.forcing = f2;
    validate(a);
    validate(b);
    if (!a.truncation_override) {
        double b1 = 0.0, b2 = 0.0;
        for (int i = 0; i < a.u0.size(); ++i) {
            b1 = std::max(b1, std::abs(a.graph.beta(a.u0[i])));
            b2 = std::max(b2, std::abs(a.graph.beta(u02[i])));
        }
        const double M = select_truncation_level(a.source, a.graph, b1 >= b2 ? a.u0 : u02);
        a.truncation_override = M;
        b.truncation_override = M;
    }

    auto second = std::async(std::launch::async, [&b] { return run_evolution(b); });
    ComparisonRun cr;
    cr.first = run_evolution(a);
    cr.second = second.get();

    const int steps = std::min(cr.first.steps(), cr.second.steps());
    const double hw = cr.first.grid.node_weight();
    for (int n = 0; n <= steps; ++n) {
        const Eigen::ArrayXd d = cr.first.beta_u[n].values.array() - cr.second.beta_u[n].values.array();
        cr.l1_distance.push_back(d.abs().sum() * hw);
        cr.positive_distance.push_back(d.max(0.0).sum() * hw);
        cr.negative_distance.push_back((-d).max(0.0).sum() * hw);
        cr.R = std::max({cr.R, norm(cr.first.beta_u[n], NormSpec::Linf()),
                         norm(cr.second.beta_u[n], NormSpec::Linf())});
    }
    for (int k = 0; k < steps; ++k) {
        const Eigen::ArrayXd d = cr.first.forcing[k].values.array() - cr.second.forcing[k].values.array();
        cr.forcing_l1.push_back(d.abs().sum() * hw);
        cr.forcing_positive.push_back(d.max(0.0).sum() * hw);
    }
    cr.L = a.source.lipschitz_on(-cr.R, cr.R);

    int order = order_of(cr.first.beta_u[0], cr.second.beta_u[0]);
    for (int k = 0; k < steps && order != 0; ++k) {
        const int fo = order_of(cr.first.forcing[k], cr.second.forcing[k]);
        if (fo == 0 || (fo != order && !(cr.first.forcing[k].values == cr.second.forcing[k].values)))
            order = 0;
    }
    cr.data_order = order;
    for (int n = 0; n <= steps; ++n) {
        const Eigen::ArrayXd d = cr.first.beta_u[n].values.array() - cr.second.beta_u[n].values.array();
        const Eigen::ArrayXd oriented = order >= 0 ? d : -d;
        cr.ordering_violations.push_back(static_cast<int>((oriented > kOrderSlack).count()));
    }
    return cr;
}

MonitorReport check_gronwall_l1(const ComparisonRun& cr) {
    return envelope(cr, cr.l1_distance, cr.forcing_l1, "gronwall_l1",
                    "||beta(u1(t)) - beta(u2(t))||_1 <= e^{Lt} ||beta(u01) - beta(u02)||_1 + "
                    "sum_k e^{L(t-k tau)} tau ||f1 - f2||_1");
}

MonitorReport check_positive_part(const ComparisonRun& cr) {
    if (!cr.first.source.monotone())
        throw ConfigError("the positive-part comparison requires a monotone source F");
    return envelope(cr, cr.positive_distance, cr.forcing_positive, "positive_part",
                    "int (beta(u1(t)) - beta(u2(t)))_+ <= e^{Lt} int (beta(u01) - beta(u02))_+ + "
                    "sum_k e^{L(t-k tau)} tau int (f1 - f2)_+");
}

MonitorReport check_ordering(const ComparisonRun& cr) {
    if (!cr.first.source.monotone())
        throw ConfigError("the ordering check requires a monotone source F");
    MonitorReport r;
    r.name = "ordering";
    r.statement = cr.data_order >= 0 ? "beta(u1^n) <= beta(u2^n) at every node and step"
                                     : "beta(u2^n) <= beta(u1^n) at every node and step";
    r.tolerance = 0.0;
    int total = 0;
    for (int v : cr.ordering_violations) {
        r.slack.push_back(-static_cast<double>(v));
        total += v;
    }
    if (cr.data_order == 0) {
        r.statement = "data not ordered; ordering check not applicable";
        r.slack.clear();
        total = 0;
    }
    r.violations = total;
    r.worst_slack = r.slack.empty() ? 0.0 : *std::min_element(r.slack.begin(), r.slack.end());
    r.summary = {{"data_order", cr.data_order}, {"violating_nodes", total}};
    return r;
}

MonitorReport check_l1_contraction(const ComparisonRun& cr) {
    MonitorReport r;
    r.name = "l1_contraction";
    r.statement = "||beta(u1^{n+1}) - beta(u2^{n+1})||_1 <= ||beta(u1^n) - beta(u2^n)||_1";
    r.tolerance = 0.0;
    const double tau = cr.first.tau;
    const double root = std::sqrt(cr.first.grid.volume());
    std::vector<double> allowance;
    for (int n = 0; n < cr.steps(); ++n) {
        r.slack.push_back(cr.l1_distance[n] - cr.l1_distance[n + 1]);
        allowance.push_back(tau * root * (cr.first.residuals[n] + cr.second.residuals[n]) +
                            1e-14 * std::max(1.0, cr.l1_distance[n]));
    }
    r.violations = 0;
    r.worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.slack.size(); ++k) {
        if (r.slack[k] < -allowance[k]) ++r.violations;
        if (r.slack[k] < r.worst_slack) {
            r.worst_slack = r.slack[k];
            r.worst_index = static_cast<int>(k);
        }
    }
    if (r.slack.empty()) r.worst_slack = 0.0;
    return r;
}

std::vector<MonitorReport> run_comparison_checks(const ComparisonRun& cr) {
    std::vector<MonitorReport> out{check_gronwall_l1(cr)};
    if (cr.first.source.monotone()) {
        out.push_back(check_positive_part(cr));
        out.push_back(check_ordering(cr));
    }
    const bool same_forcing = std::all_of(cr.forcing_l1.begin(), cr.forcing_l1.end(),
                                          [](double d) { return d == 0.0; });
    if (cr.first.source.is_zero() && same_forcing) out.push_back(check_l1_contraction(cr));
    return out;
}

}  // namespace dnp
