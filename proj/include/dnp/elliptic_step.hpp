#pragma once

#include <memory>
#include <vector>

#include "dnp/errors.hpp"
#include "dnp/flux_law.hpp"
#include "dnp/grid.hpp"
#include "dnp/monotone_graph.hpp"

namespace dnp {

/// One implicit Euler step: find u with beta(u)/tau - div alpha(grad u) = g.
struct StepProblem {
    MonotoneGraph graph;
    FluxLaw flux;
    double tau = 1.0;
    GridField g;
    GridField initial_guess;
};

struct StepOptions {
    double tol = 1e-9;         ///< on the L^2 norm of the nodewise residual
    int max_iterations = 200;  ///< per regularization level
    bool continuation = true;  ///< eps ladder 1e-2, 1e-4, 1e-6, then the law's eps (p < 2 only)
};

struct StepSolution {
    GridField u_next;
    double residual_norm = 0.0;
    int iterations = 0;
    double energy_value = 0.0;
    bool converged = false;
    int gradient_steps = 0;  ///< iterations that fell back to Barzilai-Borwein steps
    std::vector<double> residual_history;
};

/// Raised when the step solver cannot reach its tolerance; carries the best iterate.
class StepSolverError : public SolverError {
public:
    StepSolverError(const std::string& what, StepSolution best)
        : SolverError(what), best_(std::make_shared<StepSolution>(std::move(best))) {}
    const StepSolution& best() const { return *best_; }

private:
    std::shared_ptr<const StepSolution> best_;
};

/// Discrete step functional
///   E(u) = (1/tau) sum_i j(u_i) h^d + sum_f w_f a(x_f, (Gu)_f) - sum_i g_i u_i h^d
/// and its damped Newton minimizer. Holds the face layout for one grid/flux pair.
class StepSolver {
public:
    StepSolver(const MonotoneGraph& graph, const FluxLaw& flux, const Grid& grid);

    const FaceCalculus& calculus() const { return calc_; }
    const MonotoneGraph& graph() const { return graph_; }
    const FluxLaw& flux() const { return flux_; }

    double energy(double tau, const GridField& g, const GridField& u) const;
    /// beta(u)/tau - div alpha(grad u) - g, nodewise.
    GridField residual(double tau, const GridField& g, const GridField& u) const;
    /// -div alpha(grad u), nodewise.
    GridField flux_operator(const GridField& u) const;
    /// sum_f w_f a(x_f, (Gu)_f).
    double flux_energy(const GridField& u) const;

    StepSolution solve(double tau, const GridField& g, const GridField& initial_guess,
                       const StepOptions& options = {}) const;

private:
    double energy_with(const FluxLaw& flux, double tau, const Eigen::VectorXd& g,
                       const Eigen::VectorXd& u) const;
    Eigen::VectorXd residual_with(const FluxLaw& flux, double tau, const Eigen::VectorXd& g,
                                  const Eigen::VectorXd& u) const;
    StepSolution solve_level(const FluxLaw& flux, double tau, const Eigen::VectorXd& g,
                             Eigen::VectorXd u, double tol, int max_iterations) const;
    StepSolution solve_level_inverse(const FluxLaw& flux, double tau, const Eigen::VectorXd& g,
                                     Eigen::VectorXd u, double tol, int max_iterations) const;
    double l2(const Eigen::VectorXd& r) const;

    MonotoneGraph graph_;
    FluxLaw flux_;
    FaceCalculus calc_;
};

double step_energy(const StepProblem& prob, const GridField& u);
StepSolution solve_step(const StepProblem& prob, double tol = 1e-9);
StepSolution solve_step(const StepProblem& prob, const StepOptions& options);

/// Independent scalar solve of a one-node step problem: bisection of the
/// hand-assembled stationarity equation over D(beta) to 1e-12.
double oracle_scalar_solve(const StepProblem& prob);

}  // namespace dnp
