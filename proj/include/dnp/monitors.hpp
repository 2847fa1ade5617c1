#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dnp/evolution.hpp"
#include "dnp/numerics.hpp"

namespace dnp {

/// Outcome of one discrete inequality checked along a trajectory. slack[k] is
/// (right side - left side) of the k-th instance; a violation is slack < tolerance.
struct MonitorReport {
    std::string name;
    std::string statement;
    double tolerance = 0.0;
    std::vector<double> slack;
    int violations = 0;
    double worst_slack = 0.0;
    int worst_index = -1;
    std::vector<std::pair<std::string, double>> summary;

    bool passed() const { return violations == 0; }
    double value(const std::string& key) const;
};

/// Per-step ||beta(u^{n+1})|| <= ||beta(u^n) + tau F^M(beta(u^n)) + tau f^n||.
MonitorReport monitor_linf_step(const Trajectory& traj);
/// max_n ||beta(u^n)|| <= ||beta(u0)|| + T (M + ||f||).
MonitorReport monitor_linf_telescoped(const Trajectory& traj);
/// ||Pi beta(u)||_{L^inf(Q)} <= ||beta(u0)|| + T (M + ||f||).
MonitorReport monitor_linf_space_time(const Trajectory& traj);
/// The three bounds above, in that order.
std::vector<MonitorReport> monitor_linf_chain(const Trajectory& traj);

/// (1/tau) [int j*(beta(u^{n+1})) - int j*(beta(u^n))] + int a(grad u^{n+1})
///   <= int (F^M(beta(u^n)) + f^n) u^{n+1}.
MonitorReport monitor_energy_chain(const Trajectory& traj);

/// Th1: (c/tau)||du||^2 + int a(grad u^{n+1}) - int a(grad u^n) <= (M + ||f||) |Omega|^{1/2} ||du||,
/// c = 1 / Lip(beta^{-1}) on the realized range [-R, R].
MonitorReport monitor_dissipation(const Trajectory& traj);

/// Th3: int a(grad u^{n+1}) - int psi^M(u^{n+1}) <= int a(grad u^n) - int psi^M(u^n).
MonitorReport monitor_lyapunov_psi(const Trajectory& traj);

/// int [j*(beta(u^{n+1})) - j*(beta(u^n))] lies between int (beta(u^{n+1}) - beta(u^n)) u^n
/// and int (beta(u^{n+1}) - beta(u^n)) u^{n+1}.
MonitorReport monitor_fenchel_chain(const Trajectory& traj);

/// Th2: ||grad beta(u^n)||_p^p <= Lip(beta)^p ||grad u^n||_p^p at every step.
MonitorReport monitor_beta_gradient(const Trajectory& traj);

/// Every monitor enabled by the trajectory's toggles and modes.
std::vector<MonitorReport> run_monitors(const Trajectory& traj);

/// int a(grad u^n) for n = 0 .. steps.
std::vector<double> flux_energy_history(const Trajectory& traj);
/// tau * sum_{n >= 1} ||grad u^n||_p^p.
double cumulative_gradient_energy(const Trajectory& traj);
/// max_n int j*(beta(u^n)).
double max_conjugate_energy(const Trajectory& traj);

/// Lipschitz constant of a scalar map on [lo, hi]: maximum of sampled secants and
/// sampled derivative values (endpoints included).
double lipschitz_with_derivative(const ScalarFn& f, const ScalarFn& df, double lo, double hi);

}  // namespace dnp
