#include "dnp/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dnp {

namespace {

// Marks slack[k] < tolerance * max(1, scale[k]) as a violation.
void finalize(MonitorReport& r, const std::vector<double>& scale) {
    r.violations = 0;
    r.worst_index = -1;
    r.worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.slack.size(); ++k) {
        const double s = scale.empty() ? 1.0 : std::max(1.0, std::abs(scale[k]));
        if (r.slack[k] < r.tolerance * s) ++r.violations;
        if (r.slack[k] < r.worst_slack) {
            r.worst_slack = r.slack[k];
            r.worst_index = static_cast<int>(k);
        }
    }
    if (r.slack.empty()) r.worst_slack = 0.0;
}

double sum_hw(const Eigen::VectorXd& v, double hw) { return v.sum() * hw; }

Eigen::VectorXd conj_values(const Trajectory& traj, int n) {
    const GridField& b = traj.beta_u[n];
    Eigen::VectorXd out(b.size());
    for (int i = 0; i < b.size(); ++i) out[i] = traj.graph.conjugate(b[i]);
    return out;
}

double gradient_power(const FaceCalculus& calc, const Eigen::VectorXd& u, double p) {
    const Eigen::VectorXd z = calc.gradient_stacked(u);
    double s = 0.0;
    for (int f = 0; f < calc.face_count(); ++f)
        s += calc.weights()[f] * std::pow(std::hypot(z[2 * f], z[2 * f + 1]), p);
    return s;
}

double linf_bound(const Trajectory& traj) {
    return norm(traj.beta_u.front(), NormSpec::Linf()) + traj.T * (traj.M + traj.forcing_sup());
}

std::pair<double, double> realized_range(const std::vector<GridField>& w) {
    double lo = 0.0, hi = 0.0;
    for (const auto& f : w) {
        if (f.size() == 0) continue;
        lo = std::min(lo, f.values.minCoeff());
        hi = std::max(hi, f.values.maxCoeff());
    }
    return {lo, hi};
}

}  // namespace

double MonitorReport::value(const std::string& key) const {
    for (const auto& [k, v] : summary)
        if (k == key) return v;
    return std::numeric_limits<double>::quiet_NaN();
}

double lipschitz_with_derivative(const ScalarFn& f, const ScalarFn& df, double lo, double hi) {
    if (!(hi > lo)) return std::abs(df(lo));
    double lip = estimate_lipschitz(f, lo, hi);
    const int samples = 4097;
    for (int k = 0; k < samples; ++k) {
        const double s = k == samples - 1 ? hi : lo + (hi - lo) * k / (samples - 1);
        lip = std::max(lip, std::abs(df(s)));
    }
    return lip;
}

MonitorReport monitor_linf_step(const Trajectory& traj) {
    MonitorReport r;
    r.name = "linf_step";
    r.statement = "||beta(u^{n+1})||_inf <= ||beta(u^n) + tau F^M(beta(u^n)) + tau f^n||_inf";
    r.tolerance = -traj.monitors.linf_tolerance;
    std::vector<double> scale;
    for (int n = 0; n < traj.steps(); ++n) {
        const GridField& b = traj.beta_u[n];
        double rhs = 0.0;
        for (int i = 0; i < b.size(); ++i)
            rhs = std::max(rhs, std::abs(b[i] + traj.tau * traj.source.truncated(b[i]) +
                                         traj.tau * traj.forcing[n][i]));
        r.slack.push_back(rhs - norm(traj.beta_u[n + 1], NormSpec::Linf()));
        scale.push_back(rhs);
    }
    finalize(r, scale);
    return r;
}

MonitorReport monitor_linf_telescoped(const Trajectory& traj) {
    MonitorReport r;
    r.name = "linf_telescoped";
    r.statement = "max_n ||beta(u^n)||_inf <= ||beta(u0)||_inf + T (M + ||f||_inf)";
    r.tolerance = -traj.monitors.linf_tolerance;
    const double bound = linf_bound(traj);
    double peak = 0.0;
    for (int n = 0; n <= traj.steps(); ++n) {
        const double v = norm(traj.beta_u[n], NormSpec::Linf());
        peak = std::max(peak, v);
        r.slack.push_back(bound - v);
    }
    finalize(r, std::vector<double>(r.slack.size(), bound));
    r.summary = {{"bound", bound}, {"max_linf_beta", peak}, {"M", traj.M}, {"forcing_sup", traj.forcing_sup()}};
    return r;
}

MonitorReport monitor_linf_space_time(const Trajectory& traj) {
    MonitorReport r;
    r.name = "linf_space_time";
    r.statement = "||Pi_tau beta(u)||_{L^inf(Q)} <= ||beta(u0)||_inf + T (M + ||f||_inf)";
    r.tolerance = -traj.monitors.linf_tolerance;
    const double bound = linf_bound(traj);
    // Pi_tau beta(u) takes the values beta(u^0), ..., beta(u^n) on [0, n tau]
    double sup = 0.0;
    for (const auto& b : traj.beta_u) sup = std::max(sup, norm(b, NormSpec::Linf()));
    r.slack.push_back(bound - sup);
    finalize(r, {bound});
    r.summary = {{"bound", bound}, {"sup_Q", sup}};
    return r;
}

std::vector<MonitorReport> monitor_linf_chain(const Trajectory& traj) {
    return {monitor_linf_step(traj), monitor_linf_telescoped(traj), monitor_linf_space_time(traj)};
}

MonitorReport monitor_energy_chain(const Trajectory& traj) {
    MonitorReport r;
    r.name = "energy_chain";
    r.statement = "(1/tau)[int j*(beta(u^{n+1})) - int j*(beta(u^n))] + int a(grad u^{n+1}) <= "
                  "int (F^M(beta(u^n)) + f^n) u^{n+1}";
    r.tolerance = -traj.monitors.chain_tolerance;
    const StepSolver solver(traj.graph, traj.flux, traj.grid);
    const double hw = traj.grid.node_weight();
    const double p = traj.flux.exponent();

    Eigen::VectorXd jprev = conj_values(traj, 0);
    double max_conj = sum_hw(jprev, hw);
    double cumulative = 0.0;
    for (int n = 0; n < traj.steps(); ++n) {
        const Eigen::VectorXd jnext = conj_values(traj, n + 1);
        const double lhs = (sum_hw(jnext, hw) - sum_hw(jprev, hw)) / traj.tau +
                           solver.flux_energy(traj.u[n + 1]);
        double rhs = 0.0;
        const GridField& b = traj.beta_u[n];
        for (int i = 0; i < b.size(); ++i)
            rhs += (traj.source.truncated(b[i]) + traj.forcing[n][i]) * traj.u[n + 1][i];
        rhs *= hw;
        r.slack.push_back(rhs - lhs);
        max_conj = std::max(max_conj, sum_hw(jnext, hw));
        cumulative += traj.tau * gradient_power(solver.calculus(), traj.u[n + 1].values, p);
        jprev = jnext;
    }
    finalize(r, {});
    r.summary = {{"max_conjugate_energy", max_conj}, {"cumulative_gradient_energy", cumulative}};
    return r;
}

MonitorReport monitor_dissipation(const Trajectory& traj) {
    if (!traj.modes.th1) throw ConfigError("the dissipation monitor requires mode Th1");
    MonitorReport r;
    r.name = "dissipation_chain";
    r.statement = "(c/tau)||u^{n+1}-u^n||^2 + int a(grad u^{n+1}) - int a(grad u^n) <= "
                  "(M + ||f||_inf) |Omega|^{1/2} ||u^{n+1}-u^n||";
    r.tolerance = -traj.monitors.chain_tolerance;
    const auto& g = traj.graph;
    const auto [lo, hi] = realized_range(traj.beta_u);
    const double lip = lipschitz_with_derivative(
        [&g](double s) { return g.inverse(s); },
        [&g](double s) { return 1.0 / g.derivative(g.inverse(s)); }, lo, hi);
    const double c = lip > 0.0 && std::isfinite(lip) ? 1.0 / lip : 0.0;
    const double coef = (traj.M + traj.forcing_sup()) * std::sqrt(traj.grid.volume());

    const StepSolver solver(traj.graph, traj.flux, traj.grid);
    const auto energy = flux_energy_history(traj);
    double dissipated = 0.0, max_energy = energy.front();
    for (int n = 0; n < traj.steps(); ++n) {
        const GridField du(traj.grid, traj.u[n + 1].values - traj.u[n].values);
        const double l2 = norm(du, NormSpec::Lr(2.0));
        const double lhs = c / traj.tau * l2 * l2 + energy[n + 1] - energy[n];
        r.slack.push_back(coef * l2 - lhs);
        dissipated += l2 * l2 / traj.tau;
        max_energy = std::max(max_energy, energy[n + 1]);
    }
    finalize(r, {});
    r.summary = {{"c", c}, {"cumulative_dissipation", dissipated}, {"max_flux_energy", max_energy}};
    return r;
}

MonitorReport monitor_lyapunov_psi(const Trajectory& traj) {
    if (!traj.modes.th3) throw ConfigError("the Lyapunov monitor requires mode Th3");
    MonitorReport r;
    r.name = "lyapunov_psi";
    r.statement = "int a(grad u^{n+1}) - int psi^M(u^{n+1}) <= int a(grad u^n) - int psi^M(u^n)";
    r.tolerance = -traj.monitors.chain_tolerance;
    const double hw = traj.grid.node_weight();
    const auto energy = flux_energy_history(traj);
    const StepSolver solver(traj.graph, traj.flux, traj.grid);
    const double p = traj.flux.exponent();

    std::vector<double> lyap;
    double sup_grad = 0.0;
    for (int n = 0; n <= traj.steps(); ++n) {
        double psi = 0.0;
        if (!traj.source.is_zero())
            for (int i = 0; i < traj.u[n].size(); ++i)
                psi += psi_truncated_primitive(traj.source, traj.graph, traj.u[n][i]);
        lyap.push_back(energy[n] - psi * hw);
        sup_grad = std::max(sup_grad, std::pow(gradient_power(solver.calculus(), traj.u[n].values, p), 1.0 / p));
    }
    for (int n = 0; n < traj.steps(); ++n) r.slack.push_back(lyap[n] - lyap[n + 1]);
    finalize(r, lyap);
    r.summary = {{"initial", lyap.front()}, {"final", lyap.back()}, {"sup_gradient_norm", sup_grad}};
    return r;
}

MonitorReport monitor_fenchel_chain(const Trajectory& traj) {
    MonitorReport r;
    r.name = "fenchel_chain";
    r.statement = "int (beta(u^{n+1})-beta(u^n)) u^n <= int [j*(beta(u^{n+1})) - j*(beta(u^n))] <= "
                  "int (beta(u^{n+1})-beta(u^n)) u^{n+1}";
    r.tolerance = -traj.monitors.chain_tolerance;
    const double hw = traj.grid.node_weight();
    Eigen::VectorXd jprev = conj_values(traj, 0);
    double worst_upper = std::numeric_limits<double>::infinity();
    double worst_lower = std::numeric_limits<double>::infinity();
    for (int n = 0; n < traj.steps(); ++n) {
        const Eigen::VectorXd jnext = conj_values(traj, n + 1);
        const Eigen::VectorXd db = traj.beta_u[n + 1].values - traj.beta_u[n].values;
        const double dj = sum_hw(jnext - jprev, hw);
        const double upper = db.dot(traj.u[n + 1].values) * hw - dj;
        const double lower = dj - db.dot(traj.u[n].values) * hw;
        worst_upper = std::min(worst_upper, upper);
        worst_lower = std::min(worst_lower, lower);
        r.slack.push_back(std::min(upper, lower));
        jprev = jnext;
    }
    finalize(r, {});
    if (traj.steps() > 0) r.summary = {{"worst_upper", worst_upper}, {"worst_lower", worst_lower}};
    return r;
}

MonitorReport monitor_beta_gradient(const Trajectory& traj) {
    if (!traj.modes.th2) throw ConfigError("the beta-gradient monitor requires mode Th2");
    MonitorReport r;
    r.name = "beta_gradient";
    r.statement = "||grad beta(u^n)||_p^p <= Lip(beta)^p ||grad u^n||_p^p";
    r.tolerance = -traj.monitors.chain_tolerance;
    const auto& g = traj.graph;
    const auto [lo, hi] = realized_range(traj.u);
    const double L = lipschitz_with_derivative([&g](double s) { return g.beta(s); },
                                               [&g](double s) { return g.derivative(s); }, lo, hi);
    const double p = traj.flux.exponent();
    const double Lp = std::pow(L, p);
    const StepSolver solver(traj.graph, traj.flux, traj.grid);
    std::vector<double> scale;
    double lhs_total = 0.0, rhs_total = 0.0;
    for (int n = 1; n <= traj.steps(); ++n) {
        const double gb = gradient_power(solver.calculus(), traj.beta_u[n].values, p);
        const double gu = Lp * gradient_power(solver.calculus(), traj.u[n].values, p);
        r.slack.push_back(gu - gb);
        scale.push_back(gu);
        lhs_total += traj.tau * gb;
        rhs_total += traj.tau * gu;
    }
    finalize(r, scale);
    r.summary = {{"lipschitz_beta", L}, {"integrated_beta_gradient", lhs_total},
                 {"integrated_bound", rhs_total}};
    return r;
}

std::vector<MonitorReport> run_monitors(const Trajectory& traj) {
    const auto& t = traj.monitors;
    auto enabled = [](Toggle toggle, bool mode) {
        return toggle == Toggle::on || (toggle == Toggle::automatic && mode);
    };
    std::vector<MonitorReport> out;
    if (t.linf != Toggle::off)
        for (auto& r : monitor_linf_chain(traj)) out.push_back(std::move(r));
    if (t.energy != Toggle::off) out.push_back(monitor_energy_chain(traj));
    if (enabled(t.dissipation, traj.modes.th1)) out.push_back(monitor_dissipation(traj));
    if (enabled(t.lyapunov, traj.modes.th3)) out.push_back(monitor_lyapunov_psi(traj));
    if (t.fenchel != Toggle::off) out.push_back(monitor_fenchel_chain(traj));
    if (enabled(t.beta_gradient, traj.modes.th2)) out.push_back(monitor_beta_gradient(traj));
    return out;
}

std::vector<double> flux_energy_history(const Trajectory& traj) {
    const StepSolver solver(traj.graph, traj.flux, traj.grid);
    std::vector<double> e;
    for (const auto& u : traj.u) e.push_back(solver.flux_energy(u));
    return e;
}

double cumulative_gradient_energy(const Trajectory& traj) {
    const StepSolver solver(traj.graph, traj.flux, traj.grid);
    double s = 0.0;
    for (int n = 1; n <= traj.steps(); ++n)
        s += traj.tau * gradient_power(solver.calculus(), traj.u[n].values, traj.flux.exponent());
    return s;
}

double max_conjugate_energy(const Trajectory& traj) {
    double m = 0.0;
    for (int n = 0; n <= traj.steps(); ++n)
        m = std::max(m, sum_hw(conj_values(traj, n), traj.grid.node_weight()));
    return m;
}

}  // namespace dnp
