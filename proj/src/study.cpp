#include "dnp/study.hpp"

#include <cmath>
#include <future>
#include <numbers>

#include "dnp/monitors.hpp"

namespace dnp {

namespace {

// ||Lambda a - Lambda b||_{L^2(Q)} with b on a time grid `ratio` times finer
// (ratio 1 or 2) and on the same or a refined space grid; the difference is
// piecewise linear in t on the finer time grid, so Simpson per interval is exact.
double space_time_difference(const Trajectory& a, const Trajectory& b, int time_ratio, bool space_refined) {
    const Grid& g = a.grid;
    const int nodes = g.node_count();
    const double hw = g.node_weight();
    auto fine_index = [&](int k) {
        if (!space_refined) return k;
        const int nx = g.interior(0);
        const int i = k % nx + 1;
        const int j = k / nx + 1;
        return b.grid.index(2 * i, 2 * j);
    };
    const int fine_steps = std::min(b.steps(), a.steps() * time_ratio);
    auto diff_at = [&](int m) {
        Eigen::VectorXd d(nodes);
        const int n = m / time_ratio;
        const double w = static_cast<double>(m % time_ratio) / time_ratio;
        for (int k = 0; k < nodes; ++k) {
            double coarse = a.u[n][k];
            if (w > 0.0) coarse = (1.0 - w) * a.u[n][k] + w * a.u[n + 1][k];
            d[k] = coarse - b.u[m][fine_index(k)];
        }
        return d;
    };
    const double dt = b.tau;
    double s = 0.0;
    Eigen::VectorXd d0 = diff_at(0);
    for (int m = 0; m < fine_steps; ++m) {
        const Eigen::VectorXd d1 = diff_at(m + 1);
        s += dt / 3.0 * (d0.squaredNorm() + d0.dot(d1) + d1.squaredNorm()) * hw;
        d0 = d1;
    }
    return std::sqrt(s);
}

std::optional<double> order(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::nullopt;
    return std::log2(coarse / fine);
}

// exact-in-space implicit Euler (time target) or exact-in-time semi-discrete
// solution (space target) for the eigenmode
double analytic_distance(const ScenarioConfig& cfg, const Trajectory& traj, StudyTarget target) {
    const int m = cfg.initial.mode;
    const Grid& g = traj.grid;
    double err = 0.0;
    if (target == StudyTarget::time) {
        const double lam = discrete_eigenvalue(g, m);
        for (int n = 0; n <= traj.steps(); ++n) {
            const double amp = std::exp(-lam * traj.time(n));
            err = std::max(err, (traj.u[n].values - amp * traj.u[0].values).cwiseAbs().maxCoeff());
        }
    } else {
        double lam = 0.0;
        for (int d = 0; d < g.dimension(); ++d) lam += std::pow(m * std::numbers::pi / g.extent(d), 2);
        for (int n = 0; n <= traj.steps(); ++n) {
            const double amp = std::pow(1.0 + traj.tau * lam, -n);
            err = std::max(err, (traj.u[n].values - amp * traj.u[0].values).cwiseAbs().maxCoeff());
        }
    }
    return err;
}

StudyRow summarize(int level, const ScenarioConfig& cfg, const Trajectory& traj) {
    StudyRow row;
    row.level = level;
    row.N = cfg.N;
    row.cells = cfg.cells[0];
    row.tau = traj.tau;
    row.h = traj.grid.spacing(0);
    row.status = to_string(traj.status);
    row.validity_horizon = traj.validity_horizon;
    row.extinction_time = traj.extinction_time();
    row.saturation_step = traj.saturation_step;
    for (const auto& r : run_monitors(traj)) (r.passed() ? row.monitors_passed : row.monitors_failed)++;
    row.cumulative_gradient_energy = cumulative_gradient_energy(traj);
    row.max_conjugate_energy = max_conjugate_energy(traj);
    return row;
}

}  // namespace

std::string to_string(StudyTarget t) { return t == StudyTarget::time ? "time" : "space"; }

std::optional<double> StudyResult::observed_order() const {
    if (orders.empty()) return std::nullopt;
    return orders.back();
}

ScenarioConfig refined_scenario(const ScenarioConfig& cfg, int level, StudyTarget target) {
    ScenarioConfig c = cfg;
    const int f = 1 << level;
    if (target == StudyTarget::time) {
        c.N = cfg.N * f;
    } else {
        if (cfg.initial.kind == InitialKind::custom || (cfg.initial2 && cfg.initial2->kind == InitialKind::custom))
            throw ConfigError("initial.kind: custom samples cannot be refined in space");
        c.cells = {cfg.cells[0] * f, cfg.cells[1] * f};
    }
    return c;
}

StudyResult refinement_study(const ScenarioConfig& cfg, int levels, StudyTarget target) {
    if (levels < 3) throw ConfigError("study needs at least 3 levels (got " + std::to_string(levels) + ")");
    if (levels > 12) throw ConfigError("study supports at most 12 levels");
    std::vector<ScenarioConfig> configs;
    for (int k = 0; k < levels; ++k) configs.push_back(refined_scenario(cfg, k, target));

    std::vector<std::future<Trajectory>> jobs;
    for (const auto& c : configs)
        jobs.push_back(std::async(std::launch::async, [c] { return run_evolution(build_evolution(c)); }));

    StudyResult result;
    result.target = target;
    std::vector<Trajectory> runs;
    std::optional<std::string> failure;
    for (int k = 0; k < levels; ++k) {
        try {
            Trajectory t = jobs[k].get();
            if (!failure) runs.push_back(std::move(t));
        } catch (const std::exception& e) {
            if (!failure) failure = "level " + std::to_string(k) + ": " + e.what();
        }
    }
    const bool analytic = heat_eigenmode_scenario(cfg);
    for (std::size_t k = 0; k < runs.size(); ++k) {
        StudyRow row = summarize(static_cast<int>(k), configs[k], runs[k]);
        if (analytic) row.analytic_error = analytic_distance(cfg, runs[k], target);
        result.rows.push_back(row);
    }
    for (std::size_t k = 0; k + 1 < runs.size(); ++k)
        result.rows[k].successive_difference = space_time_difference(
            runs[k], runs[k + 1], target == StudyTarget::time ? 2 : 1, target == StudyTarget::space);
    for (std::size_t k = 0; k + 2 < runs.size(); ++k)
        result.orders.push_back(
            order(*result.rows[k].successive_difference, *result.rows[k + 1].successive_difference));
    if (analytic)
        for (std::size_t k = 0; k + 1 < runs.size(); ++k)
            result.analytic_orders.push_back(order(*result.rows[k].analytic_error, *result.rows[k + 1].analytic_error));
    if (failure) throw StudyError("refinement study aborted at " + *failure, std::move(result));
    return result;
}

bool heat_eigenmode_scenario(const ScenarioConfig& cfg) {
    return cfg.graph.kind == GraphKind::power && cfg.graph.q == 2.0 && cfg.flux.terms.size() == 1 &&
           cfg.flux.terms[0].p == 2.0 && cfg.flux.terms[0].weight == 1.0 &&
           cfg.source.descriptor.kind == SourceKind::zero &&
           (cfg.forcing.kind == ForcingKind::zero || cfg.forcing.amplitude == 0.0) &&
           cfg.initial.kind == InitialKind::eigenmode;
}

double discrete_eigenvalue(const Grid& grid, int mode) {
    double lam = 0.0;
    for (int d = 0; d < grid.dimension(); ++d) {
        const double h = grid.spacing(d);
        lam += 4.0 / (h * h) * std::pow(std::sin(mode * std::numbers::pi * h / (2.0 * grid.extent(d))), 2);
    }
    return lam;
}

double eigenmode_amplitude_error(const Trajectory& traj, int mode) {
    const double factor = 1.0 / (1.0 + traj.tau * discrete_eigenvalue(traj.grid, mode));
    double err = 0.0;
    double amp = 1.0;
    for (int n = 0; n <= traj.steps(); ++n) {
        err = std::max(err, (traj.u[n].values - amp * traj.u[0].values).cwiseAbs().maxCoeff());
        amp *= factor;
    }
    return err;
}

}  // namespace dnp
