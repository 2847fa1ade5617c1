#include "dnp/elliptic_step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <boost/math/tools/roots.hpp>

namespace dnp {

namespace {

constexpr double kBetaPrimeFloor = 1e-10;
constexpr double kBetaPrimeCap = 1e10;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

}  // namespace

StepSolver::StepSolver(const MonotoneGraph& graph, const FluxLaw& flux, const Grid& grid)
    : graph_(graph), flux_(flux), calc_(grid, gradient_mode_for(grid, flux.quadratic())) {}

double StepSolver::l2(const Eigen::VectorXd& r) const {
    return std::sqrt(r.squaredNorm() * calc_.grid().node_weight());
}

double StepSolver::energy_with(const FluxLaw& flux, double tau, const Eigen::VectorXd& g,
                               const Eigen::VectorXd& u) const {
    const double hw = calc_.grid().node_weight();
    double j_sum = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) j_sum += graph_.primitive(u[i]);
    const Eigen::VectorXd z = calc_.gradient_stacked(u);
    double a_sum = 0.0;
    const auto& w = calc_.weights();
    const auto& x = calc_.positions();
    for (int f = 0; f < calc_.face_count(); ++f)
        a_sum += w[f] * flux.potential(x[f], {z[2 * f], z[2 * f + 1]});
    return j_sum * hw / tau + a_sum - g.dot(u) * hw;
}

Eigen::VectorXd StepSolver::residual_with(const FluxLaw& flux, double tau, const Eigen::VectorXd& g,
                                          const Eigen::VectorXd& u) const {
    const Eigen::VectorXd z = calc_.gradient_stacked(u);
    Eigen::VectorXd q(z.size());
    const auto& w = calc_.weights();
    const auto& x = calc_.positions();
    for (int f = 0; f < calc_.face_count(); ++f) {
        const Vec2 a = flux.flux(x[f], {z[2 * f], z[2 * f + 1]});
        q[2 * f] = w[f] * a[0];
        q[2 * f + 1] = w[f] * a[1];
    }
    Eigen::VectorXd r = calc_.matrix().transpose() * q / calc_.grid().node_weight();
    for (Eigen::Index i = 0; i < u.size(); ++i) r[i] += graph_.beta(u[i]) / tau - g[i];
    return r;
}

double StepSolver::energy(double tau, const GridField& g, const GridField& u) const {
    return energy_with(flux_, tau, g.values, u.values);
}

GridField StepSolver::residual(double tau, const GridField& g, const GridField& u) const {
    return GridField(calc_.grid(), residual_with(flux_, tau, g.values, u.values));
}

GridField StepSolver::flux_operator(const GridField& u) const {
    // residual with beta/tau and g removed
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(u.size());
    Eigen::VectorXd r = residual_with(flux_, std::numeric_limits<double>::infinity(), zero, u.values);
    return GridField(calc_.grid(), std::move(r));
}

double StepSolver::flux_energy(const GridField& u) const {
    const Eigen::VectorXd z = calc_.gradient_stacked(u.values);
    double s = 0.0;
    for (int f = 0; f < calc_.face_count(); ++f)
        s += calc_.weights()[f] * flux_.potential(calc_.positions()[f], {z[2 * f], z[2 * f + 1]});
    return s;
}

StepSolution StepSolver::solve_level(const FluxLaw& flux, double tau, const Eigen::VectorXd& g,
                                     Eigen::VectorXd u, double tol, int max_iterations) const {
    const Grid& grid = calc_.grid();
    const double hw = grid.node_weight();
    const int n = static_cast<int>(u.size());
    const int nf = calc_.face_count();
    const auto& G = calc_.matrix();

    StepSolution sol;
    Eigen::VectorXd r = residual_with(flux, tau, g, u);
    double rn = l2(r);
    double E = energy_with(flux, tau, g, u);
    sol.residual_history.push_back(rn);

    Eigen::VectorXd prev_u, prev_grad;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    std::vector<Eigen::Triplet<double>> trip;

    int it = 0;
    bool majorize = false;
    while (rn > tol && it < max_iterations) {
        ++it;
        const Eigen::VectorXd grad = hw * r;

        // Newton matrix diag(beta'(u) h^d / tau) + G^T diag(w_f D alpha) G. After a damped
        // step the sub-quadratic pieces switch to their secant curvature, which majorizes
        // the energy, so the next step is accepted at full length.
        const Eigen::VectorXd z = calc_.gradient_stacked(u);
        trip.clear();
        for (int f = 0; f < nf; ++f) {
            const Vec2 zf{z[2 * f], z[2 * f + 1]};
            Mat2 J = flux.jacobian(calc_.positions()[f], zf);
            if (majorize) {
                const Mat2 S = flux.secant_curvature(calc_.positions()[f], zf);
                if (S[0] + S[3] > J[0] + J[3]) J = S;
            }
            const double w = calc_.weights()[f];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (J[2 * a + b] != 0.0) trip.emplace_back(2 * f + a, 2 * f + b, w * J[2 * a + b]);
        }
        Eigen::SparseMatrix<double> B(2 * nf, 2 * nf);
        B.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseMatrix<double> H = (G.transpose() * B * G).pruned();
        for (int i = 0; i < n; ++i) {
            double bp = graph_.derivative(u[i]);
            if (majorize && u[i] != 0.0) bp = std::max(bp, graph_.beta(u[i]) / u[i]);
            if (!std::isfinite(bp) || bp > kBetaPrimeCap) bp = kBetaPrimeCap;
            bp = std::max(bp, kBetaPrimeFloor);
            H.coeffRef(i, i) += bp * hw / tau;
        }

        Eigen::VectorXd dir;
        bool newton = false;
        ldlt.compute(H);
        if (ldlt.info() == Eigen::Success) {
            dir = ldlt.solve(-grad);
            newton = ldlt.info() == Eigen::Success && dir.allFinite() && grad.dot(dir) < 0.0;
        }
        if (!newton) {
            // Barzilai-Borwein step on the energy gradient
            double step = 1.0 / std::max(grad.norm(), 1e-300);
            if (prev_u.size() == n) {
                const Eigen::VectorXd s = u - prev_u;
                const Eigen::VectorXd y = grad - prev_grad;
                const double sy = s.dot(y);
                if (sy > 0.0) step = s.squaredNorm() / sy;
            }
            dir = -step * grad;
            ++sol.gradient_steps;
        }
        prev_u = u;
        prev_grad = grad;

        const double slope = grad.dot(dir);
        const double E_old = E;
        double t = 1.0;
        bool accepted = false;
        bool rounding = false;
        for (int k = 0; k < kMaxHalvings; ++k, t *= 0.5) {
            const Eigen::VectorXd trial = u + t * dir;
            bool inside = trial.allFinite();
            for (int i = 0; inside && i < n; ++i) inside = graph_.in_domain(trial[i]);
            if (!inside) continue;
            const double Et = energy_with(flux, tau, g, trial);
            if (!std::isfinite(Et)) continue;
            bool take = Et <= E + kArmijo * t * slope;
            Eigen::VectorXd rt;
            if (!take && Et - E <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(E))) {
                // energy differences are at rounding level; fall back to residual decrease
                rt = residual_with(flux, tau, g, trial);
                take = l2(rt) < rn;
                rounding = take;
            }
            if (take) {
                u = trial;
                E = Et;
                r = rt.size() ? rt : residual_with(flux, tau, g, u);
                rn = l2(r);
                accepted = true;
                break;
            }
        }
        sol.residual_history.push_back(rn);
        if (!accepted) break;
        // Poor agreement with the quadratic model (the Newton step zig-zags across a
        // sub-quadratic kink) switches the next iteration to the majorizing matrix.
        const double predicted = -slope * (t - 0.5 * t * t);
        const double ratio = predicted > 0.0 ? (E_old - E) / predicted : 1.0;
        majorize = !rounding && newton && (t < 1.0 || ratio < 0.5 || ratio > 2.0);
    }

    sol.u_next = GridField(grid, std::move(u));
    sol.residual_norm = rn;
    sol.iterations = it;
    sol.energy_value = E;
    sol.converged = rn <= tol;
    return sol;
}

StepSolution StepSolver::solve_level_inverse(const FluxLaw& flux, double tau, const Eigen::VectorXd& g,
                                             Eigen::VectorXd u, double tol, int max_iterations) const {
    // Newton on v = beta(u) for graphs with beta'(0) = inf: the residual
    // v/tau + div-term(beta^{-1}(v)) - g is smooth in v while it is not in u.
    const Grid& grid = calc_.grid();
    const double hw = grid.node_weight();
    const int n = static_cast<int>(u.size());
    const int nf = calc_.face_count();
    const auto& G = calc_.matrix();

    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = graph_.beta(u[i]);
    StepSolution sol;
    Eigen::VectorXd r = residual_with(flux, tau, g, u);
    double rn = l2(r);
    sol.residual_history.push_back(rn);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    std::vector<Eigen::Triplet<double>> trip;
    int it = 0;
    while (rn > tol && it < max_iterations) {
        ++it;
        const Eigen::VectorXd z = calc_.gradient_stacked(u);
        trip.clear();
        for (int f = 0; f < nf; ++f) {
            const Mat2 J = flux.jacobian(calc_.positions()[f], {z[2 * f], z[2 * f + 1]});
            const double w = calc_.weights()[f];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (J[2 * a + b] != 0.0) trip.emplace_back(2 * f + a, 2 * f + b, w * J[2 * a + b]);
        }
        Eigen::SparseMatrix<double> B(2 * nf, 2 * nf);
        B.setFromTriplets(trip.begin(), trip.end());
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) {
            const double bp = graph_.derivative(u[i]);
            d[i] = std::isfinite(bp) && bp > 0.0 ? 1.0 / bp : 0.0;
        }
        // J_v = I/tau + (1/h^d) G^T W D alpha G diag(d)
        Eigen::SparseMatrix<double> Jv = (G.transpose() * B * G / hw) * d.asDiagonal();
        for (int i = 0; i < n; ++i) Jv.coeffRef(i, i) += 1.0 / tau;
        Jv.makeCompressed();
        lu.compute(Jv);
        if (lu.info() != Eigen::Success) break;
        const Eigen::VectorXd dv = lu.solve(-r);
        if (lu.info() != Eigen::Success || !dv.allFinite()) break;

        // backtracking on the residual norm, for which dv is a descent direction
        bool accepted = false;
        double t = 1.0;
        for (int k = 0; k < kMaxHalvings; ++k, t *= 0.5) {
            const Eigen::VectorXd vt = v + t * dv;
            Eigen::VectorXd ut(n);
            bool inside = vt.allFinite();
            for (int i = 0; inside && i < n; ++i) {
                if (!(vt[i] > graph_.range_lo() && vt[i] < graph_.range_hi())) {
                    inside = false;
                    break;
                }
                ut[i] = graph_.inverse(vt[i]);
                inside = std::isfinite(ut[i]) && graph_.in_domain(ut[i]);
            }
            if (!inside) continue;
            const Eigen::VectorXd rt = residual_with(flux, tau, g, ut);
            const double rtn = l2(rt);
            if (rtn * rtn <= (1.0 - 2.0 * kArmijo * t) * rn * rn) {
                v = vt;
                u = ut;
                r = rt;
                rn = rtn;
                accepted = true;
                break;
            }
        }
        sol.residual_history.push_back(rn);
        if (!accepted) break;
    }

    sol.energy_value = energy_with(flux, tau, g, u);
    sol.u_next = GridField(grid, std::move(u));
    sol.residual_norm = rn;
    sol.iterations = it;
    sol.converged = rn <= tol;
    return sol;
}

StepSolution StepSolver::solve(double tau, const GridField& g, const GridField& initial_guess,
                               const StepOptions& options) const {
    if (!(tau > 0.0)) throw InvalidParameter("time step tau must be positive");
    if (!(options.tol > 0.0)) throw InvalidParameter("step tolerance must be positive");
    if (!(g.grid == calc_.grid()) || !(initial_guess.grid == calc_.grid()))
        throw InvalidParameter("step data live on a different grid");
    if (!g.values.allFinite()) throw InvalidParameter("step right-hand side must be finite");
    for (int i = 0; i < initial_guess.size(); ++i) {
        if (!graph_.in_domain(initial_guess[i])) {
            std::ostringstream msg;
            msg << "initial guess value " << initial_guess[i] << " at node " << i
                << " lies outside D(beta)";
            throw DomainError(msg.str());
        }
    }
    if (flux_.singular() && flux_.epsilon() == 0.0)
        throw InvalidParameter("step solver needs eps > 0 for p < 2");

    std::vector<double> ladder;
    if (flux_.singular() && options.continuation)
        for (double e : {1e-2, 1e-4, 1e-6})
            if (e > flux_.epsilon()) ladder.push_back(e);

    // beta'(0) = inf (power graphs with q < 2) calls for Newton in v = beta(u)
    const double b0 = graph_.in_domain(0.0) ? graph_.derivative(0.0) : 0.0;
    const bool inverse_variables = !std::isfinite(b0) || b0 > kBetaPrimeCap;
    auto level = [&](const FluxLaw& fl, const Eigen::VectorXd& start, double tol) {
        if (inverse_variables) {
            StepSolution s = solve_level_inverse(fl, tau, g.values, start, tol, options.max_iterations);
            if (s.converged) return s;
            StepSolution t = solve_level(fl, tau, g.values, s.u_next.values, tol, options.max_iterations);
            t.iterations += s.iterations;
            return t;
        }
        return solve_level(fl, tau, g.values, start, tol, options.max_iterations);
    };

    Eigen::VectorXd u = initial_guess.values;
    int total = 0;
    int gradient_steps = 0;
    std::vector<double> history;
    for (double e : ladder) {
        StepSolution warm = level(flux_.with_epsilon(e), u, std::max(options.tol, 1e-6));
        u = warm.u_next.values;
        total += warm.iterations;
        gradient_steps += warm.gradient_steps;
        history.insert(history.end(), warm.residual_history.begin(), warm.residual_history.end());
    }
    StepSolution sol = level(flux_, u, options.tol);
    sol.iterations += total;
    sol.gradient_steps += gradient_steps;
    history.insert(history.end(), sol.residual_history.begin(), sol.residual_history.end());
    sol.residual_history = std::move(history);
    if (!sol.converged) {
        std::ostringstream msg;
        msg << "step solver stopped after " << sol.iterations << " iterations with residual "
            << sol.residual_norm << " > tol " << options.tol;
        throw StepSolverError(msg.str(), std::move(sol));
    }
    return sol;
}

double step_energy(const StepProblem& prob, const GridField& u) {
    return StepSolver(prob.graph, prob.flux, u.grid).energy(prob.tau, prob.g, u);
}

StepSolution solve_step(const StepProblem& prob, double tol) {
    StepOptions options;
    options.tol = tol;
    return solve_step(prob, options);
}

StepSolution solve_step(const StepProblem& prob, const StepOptions& options) {
    return StepSolver(prob.graph, prob.flux, prob.g.grid).solve(prob.tau, prob.g, prob.initial_guess, options);
}

double oracle_scalar_solve(const StepProblem& prob) {
    const Grid& grid = prob.g.grid;
    if (grid.node_count() != 1) throw OracleError("scalar oracle needs exactly one interior node");
    const MonotoneGraph& beta = prob.graph;
    const FluxLaw& flux = prob.flux;
    const double tau = prob.tau;
    const double g = prob.g[0];

    // Flux contribution of the single node: each face sees +-u/h along its normal.
    std::function<double(double)> flux_term;
    if (grid.dimension() == 1) {
        const double h = grid.spacing(0);
        flux_term = [=](double u) {
            return (flux.flux({0.5 * h, 0.0}, {u / h, 0.0})[0] -
                    flux.flux({1.5 * h, 0.0}, {-u / h, 0.0})[0]) / h;
        };
    } else {
        const double hx = grid.spacing(0), hy = grid.spacing(1);
        const double share = flux.quadratic() ? 1.0 : 0.5;
        flux_term = [=](double u) {
            const double fx = (flux.flux({0.5 * hx, hy}, {u / hx, 0.0})[0] -
                               flux.flux({1.5 * hx, hy}, {-u / hx, 0.0})[0]) / hx;
            const double fy = (flux.flux({hx, 0.5 * hy}, {0.0, u / hy})[1] -
                               flux.flux({hx, 1.5 * hy}, {0.0, -u / hy})[1]) / hy;
            return share * (fx + fy);
        };
    }
    const auto phi = [&](double u) { return beta.beta(u) / tau + flux_term(u) - g; };

    const double f0 = phi(0.0);
    if (f0 == 0.0) return 0.0;
    const double dir = f0 < 0.0 ? 1.0 : -1.0;
    const double edge = dir > 0 ? beta.domain_hi() : beta.domain_lo();
    double near = 0.0;
    double far = dir;
    bool bracketed = false;
    for (int k = 0; k < 2000; ++k) {
        if (!beta.in_domain(far)) far = 0.5 * (near + edge);
        const double v = phi(far);
        if ((dir > 0 && v >= 0.0) || (dir < 0 && v <= 0.0)) {
            bracketed = true;
            break;
        }
        near = far;
        far = std::isfinite(edge) ? 0.5 * (far + edge) : 2.0 * far;
    }
    if (!bracketed) throw OracleError("scalar oracle found no sign change inside D(beta)");

    const double lo = std::min(near, far), hi = std::max(near, far);
    const auto done = [](double a, double b) { return std::abs(b - a) <= 1e-13; };
    const auto root = boost::math::tools::bisect(phi, lo, hi, done);
    return 0.5 * (root.first + root.second);
}

}  // namespace dnp
