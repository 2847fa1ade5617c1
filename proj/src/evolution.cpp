#include "dnp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dnp/numerics.hpp"

namespace dnp {

std::string ModeSet::describe() const {
    std::string s;
    auto add = [&s](bool on, const char* name) {
        if (!on) return;
        if (!s.empty()) s += "+";
        s += name;
    };
    add(th1, "Th1");
    add(th2, "Th2");
    add(th3, "Th3");
    return s.empty() ? "none" : s;
}

MonitorToggles MonitorToggles::none() {
    MonitorToggles t;
    t.linf = t.energy = t.dissipation = t.lyapunov = t.fenchel = t.beta_gradient = Toggle::off;
    return t;
}

std::string to_string(TerminationStatus s) {
    switch (s) {
        case TerminationStatus::completed: return "completed";
        case TerminationStatus::extinct: return "extinct";
        case TerminationStatus::truncation_saturated: return "truncation_saturated";
        case TerminationStatus::step_failure: return "step_failure";
    }
    return "unknown";
}

void validate(const EvolutionConfig& cfg) {
    if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw InvalidParameter("time horizon T must be positive");
    if (cfg.N < 1) throw InvalidParameter("step count N must be at least 1");
    for (int i = 0; i < cfg.u0.size(); ++i) {
        const double v = cfg.u0[i];
        if (!std::isfinite(v) || !cfg.graph.in_domain(v)) {
            std::ostringstream msg;
            msg << "initial value " << v << " at node " << i << " lies outside D(beta)";
            throw DomainError(msg.str());
        }
        if (!std::isfinite(cfg.graph.beta(v))) throw DomainError("beta(u0) must be bounded");
    }
    if (cfg.modes.th1 && !cfg.graph.inverse_locally_lipschitz())
        throw ConfigError("mode Th1 needs a graph whose inverse is locally Lipschitz (" +
                          cfg.graph.describe() + " is not)");
    if (cfg.modes.th2 && !cfg.graph.locally_lipschitz())
        throw ConfigError("mode Th2 needs a locally Lipschitz graph (" + cfg.graph.describe() + " is not)");
    if (cfg.modes.th3) {
        if (!cfg.source.monotone()) throw ConfigError("mode Th3 needs a monotone source F");
        if (!cfg.forcing.is_zero()) throw ConfigError("mode Th3 needs zero forcing");
    }
    if (cfg.monitors.dissipation == Toggle::on && !cfg.modes.th1)
        throw ConfigError("the dissipation monitor requires mode Th1");
    if (cfg.monitors.lyapunov == Toggle::on && !cfg.modes.th3)
        throw ConfigError("the Lyapunov monitor requires mode Th3");
    if (cfg.monitors.beta_gradient == Toggle::on && !cfg.modes.th2)
        throw ConfigError("the beta-gradient monitor requires mode Th2");
    if (cfg.truncation_override && !(*cfg.truncation_override > 0.0))
        throw InvalidParameter("truncation override M must be positive");
    if (!(cfg.extinction_threshold >= 0.0)) throw InvalidParameter("extinction threshold must be >= 0");
}

DiscreteState Trajectory::state(int n) const {
    if (n < 0 || n > steps()) throw RangeError("state index outside the computed trajectory");
    DiscreteState s;
    s.n = n;
    s.t = time(n);
    s.u = u[n];
    s.beta_u = beta_u[n];
    s.linf_u = norm(u[n], NormSpec::Linf());
    s.linf_beta = norm(beta_u[n], NormSpec::Linf());
    return s;
}

double Trajectory::forcing_sup() const {
    double s = 0.0;
    for (const auto& f : forcing) s = std::max(s, norm(f, NormSpec::Linf()));
    return s;
}

std::optional<double> Trajectory::extinction_time() const {
    if (!extinction_step) return std::nullopt;
    return time(*extinction_step);
}

double select_truncation_level(const SourceLaw& F, const MonotoneGraph& g, const GridField& u0) {
    double b0 = 0.0;
    for (int i = 0; i < u0.size(); ++i) b0 = std::max(b0, std::abs(g.beta(u0[i])));
    const double R = 4.0 * b0;
    const double M = max_abs_on_interval([&F](double s) { return F.eval(s); }, -R, R);
    return M > 0.0 ? M : 1.0;
}

GridField average_forcing(const Forcing& f, int n, double tau, const Grid& grid) {
    GridField out(grid);
    if (f.is_zero()) return out;
    const double t0 = n * tau, t1 = (n + 1) * tau;
    for (int k = 0; k < out.size(); ++k) {
        const Vec2 x = grid.node_position(k);
        out[k] = integrate([&](double t) { return f(x, t); }, t0, t1, 1e-12) / tau;
    }
    return out;
}

namespace {

GridField apply_beta(const MonotoneGraph& g, const GridField& u) {
    GridField b(u.grid);
    for (int i = 0; i < u.size(); ++i) b[i] = g.beta(u[i]);
    return b;
}

bool saturated(const SourceLaw& F, double M, const GridField& beta_u) {
    for (int i = 0; i < beta_u.size(); ++i)
        if (std::abs(F.eval(beta_u[i])) > M) return true;
    return false;
}

void finish(Trajectory& traj) {
    const double b0 = norm(traj.beta_u.front(), NormSpec::Linf());
    int last = 0;
    for (int n = 1; n <= traj.steps(); ++n) {
        if (norm(traj.beta_u[n], NormSpec::Linf()) > 2.0 * b0) break;
        last = n;
    }
    traj.validity_horizon = traj.time(last);
    if (traj.failure_step)
        traj.status = TerminationStatus::step_failure;
    else if (traj.saturation_step)
        traj.status = TerminationStatus::truncation_saturated;
    else if (traj.extinction_step)
        traj.status = TerminationStatus::extinct;
    else
        traj.status = TerminationStatus::completed;
}

}  // namespace

Trajectory run_evolution(const EvolutionConfig& cfg) {
    validate(cfg);
    const Grid& grid = cfg.u0.grid;
    const double M = cfg.truncation_override ? *cfg.truncation_override
                                             : select_truncation_level(cfg.source, cfg.graph, cfg.u0);

    Trajectory traj;
    traj.grid = grid;
    traj.graph = cfg.graph;
    traj.flux = cfg.flux;
    traj.source = cfg.source.with_truncation(M);
    traj.modes = cfg.modes;
    traj.monitors = cfg.monitors;
    traj.forcing_zero = cfg.forcing.is_zero();
    traj.tau = cfg.tau();
    traj.T = cfg.T;
    traj.N = cfg.N;
    traj.M = M;
    traj.u.push_back(cfg.u0);
    traj.beta_u.push_back(apply_beta(cfg.graph, cfg.u0));
    if (norm(cfg.u0, NormSpec::Linf()) < cfg.extinction_threshold) traj.extinction_step = 0;

    const StepSolver solver(cfg.graph, cfg.flux, grid);
    const double tau = traj.tau;
    for (int n = 0; n < cfg.N; ++n) {
        const GridField& bu = traj.beta_u.back();
        if (saturated(cfg.source, M, bu)) {
            traj.saturation_step = n;
            break;
        }
        GridField fn = average_forcing(cfg.forcing, n, tau, grid);
        GridField g(grid);
        for (int i = 0; i < g.size(); ++i) g[i] = bu[i] / tau + traj.source.truncated(bu[i]) + fn[i];
        traj.forcing.push_back(std::move(fn));

        StepSolution sol;
        try {
            sol = solver.solve(tau, g, traj.u.back(), cfg.step);
        } catch (const StepSolverError& e) {
            traj.forcing.pop_back();
            traj.failure_step = n;
            finish(traj);
            std::ostringstream msg;
            msg << "step " << n << " -> " << n + 1 << " failed: " << e.what();
            throw EvolutionError(msg.str(), std::move(traj));
        }
        traj.iterations.push_back(sol.iterations);
        traj.residuals.push_back(sol.residual_norm);
        traj.beta_u.push_back(apply_beta(cfg.graph, sol.u_next));
        traj.u.push_back(std::move(sol.u_next));
        if (!traj.extinction_step && norm(traj.u.back(), NormSpec::Linf()) < cfg.extinction_threshold)
            traj.extinction_step = n + 1;
    }
    if (!traj.saturation_step && traj.steps() == cfg.N && saturated(cfg.source, M, traj.beta_u.back()))
        traj.saturation_step = cfg.N;
    finish(traj);
    return traj;
}

namespace {

// Index r with |t - r tau| within rounding, or -1.
int node_index(double tau, double t) {
    const double r = std::round(t / tau);
    if (std::abs(t - r * tau) <= 1e-12 * std::max(tau, std::abs(t))) return static_cast<int>(r);
    return -1;
}

void check_time(const std::vector<GridField>& w, double tau, double t) {
    if (w.empty()) throw RangeError("interpolant of an empty sequence");
    const double last = (w.size() - 1) * tau;
    if (!(t >= 0.0) || t > last * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "time " << t << " outside [0, " << last << "]";
        throw RangeError(msg.str());
    }
}

}  // namespace

GridField interpolant_pc(const std::vector<GridField>& w, double tau, double t) {
    check_time(w, tau, t);
    const int r = node_index(tau, t);
    if (r >= 0) return w[std::min<std::size_t>(r, w.size() - 1)];
    const auto k = static_cast<std::size_t>(std::ceil(t / tau));
    return w[std::min(k, w.size() - 1)];
}

GridField interpolant_pl(const std::vector<GridField>& w, double tau, double t) {
    check_time(w, tau, t);
    const int r = node_index(tau, t);
    if (r >= 0) return w[std::min<std::size_t>(r, w.size() - 1)];
    const auto n = static_cast<std::size_t>(std::floor(t / tau));
    const double theta = t / tau - static_cast<double>(n);
    return GridField(w[n].grid, (1.0 - theta) * w[n].values + theta * w[n + 1].values);
}

GridField interpolant_pc(const Trajectory& traj, double t) { return interpolant_pc(traj.u, traj.tau, t); }
GridField interpolant_pl(const Trajectory& traj, double t) { return interpolant_pl(traj.u, traj.tau, t); }

InterpolantIdentity interpolant_identity(const Trajectory& traj) {
    const double tau = traj.tau;
    const double hw = traj.grid.node_weight();
    const double off = 0.5 / std::sqrt(3.0);
    InterpolantIdentity id;
    for (int n = 0; n < traj.steps(); ++n) {
        double interval = 0.0;
        for (double s : {0.5 - off, 0.5 + off}) {
            const double t = (n + s) * tau;
            const GridField diff(traj.grid,
                                 interpolant_pc(traj, t).values - interpolant_pl(traj, t).values);
            interval += 0.5 * tau * diff.values.squaredNorm() * hw;
        }
        id.integral += interval;
        const Eigen::VectorXd du = (traj.u[n + 1].values - traj.u[n].values) / tau;
        id.closed_form += tau * du.squaredNorm() * hw;
    }
    id.closed_form *= tau * tau / 3.0;
    return id;
}

}  // namespace dnp
