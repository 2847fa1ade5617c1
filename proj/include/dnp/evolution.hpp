#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dnp/elliptic_step.hpp"
#include "dnp/flux_law.hpp"
#include "dnp/grid.hpp"
#include "dnp/monotone_graph.hpp"
#include "dnp/source_law.hpp"

namespace dnp {

/// Space-time forcing f(x, t); an empty function means f = 0.
struct Forcing {
    std::function<double(const Vec2&, double)> f;

    bool is_zero() const { return !f; }
    double operator()(const Vec2& x, double t) const { return f ? f(x, t) : 0.0; }
    static Forcing zero() { return {}; }
};

/// Which hypothesis sets the run is certified under. Each one enables its
/// own monitor: Th1 (beta^{-1} locally Lipschitz) the dissipation chain,
/// Th2 (beta locally Lipschitz) the beta-gradient bound, Th3 (monotone F,
/// f = 0) the psi^M Lyapunov functional.
struct ModeSet {
    bool th1 = false;
    bool th2 = false;
    bool th3 = false;

    bool operator==(const ModeSet&) const = default;

    bool empty() const { return !th1 && !th2 && !th3; }
    std::string describe() const;
};

enum class Toggle { automatic, on, off };

struct MonitorToggles {
    Toggle linf = Toggle::automatic;
    Toggle energy = Toggle::automatic;
    Toggle dissipation = Toggle::automatic;
    Toggle lyapunov = Toggle::automatic;
    Toggle fenchel = Toggle::automatic;
    Toggle beta_gradient = Toggle::automatic;
    double linf_tolerance = 1e-12;   ///< allowed rounding excess of the L-inf bounds
    double chain_tolerance = 1e-9;   ///< allowed excess of the energy-type chains

    bool operator==(const MonitorToggles&) const = default;

    static MonitorToggles none();
};

struct EvolutionConfig {
    MonotoneGraph graph = MonotoneGraph::power(2.0);
    FluxLaw flux = FluxLaw::p_laplacian(2.0);
    SourceLaw source = SourceLaw::zero();
    Forcing forcing;
    GridField u0;
    double T = 1.0;
    int N = 1;
    ModeSet modes;
    MonitorToggles monitors;
    std::optional<double> truncation_override;
    StepOptions step;
    double extinction_threshold = 1e-10;

    double tau() const { return T / N; }
};

/// Throws ConfigError / InvalidParameter / DomainError when cfg cannot run.
void validate(const EvolutionConfig& cfg);

enum class TerminationStatus { completed, extinct, truncation_saturated, step_failure };
std::string to_string(TerminationStatus s);

/// One time level and quantities derived from it.
struct DiscreteState {
    int n = 0;
    double t = 0.0;
    GridField u;
    GridField beta_u;
    double linf_u = 0.0;
    double linf_beta = 0.0;
};

/// Full sequence u^0, ..., u^n of one run together with the data every monitor
/// needs (truncated source, averaged forcing, step diagnostics).
struct Trajectory {
    Grid grid = Grid::line(1.0, 2);
    MonotoneGraph graph = MonotoneGraph::power(2.0);
    FluxLaw flux = FluxLaw::p_laplacian(2.0);
    SourceLaw source = SourceLaw::zero();  ///< carries the truncation level M
    ModeSet modes;
    MonitorToggles monitors;
    bool forcing_zero = true;
    double tau = 1.0;
    double T = 1.0;
    int N = 1;
    double M = 1.0;

    std::vector<GridField> u;        ///< u^0 .. u^n
    std::vector<GridField> beta_u;   ///< beta(u^n)
    std::vector<GridField> forcing;  ///< f^n_tau for n = 0 .. steps-1
    std::vector<int> iterations;     ///< solver iterations of step n -> n+1
    std::vector<double> residuals;   ///< residual certificate of step n -> n+1

    TerminationStatus status = TerminationStatus::completed;
    std::optional<int> extinction_step;
    std::optional<int> saturation_step;
    std::optional<int> failure_step;
    double validity_horizon = 0.0;  ///< T': last n tau with ||beta(u^k)|| <= 2 ||beta(u^0)|| for all k <= n

    int steps() const { return static_cast<int>(u.size()) - 1; }
    double time(int n) const { return n * tau; }
    double final_time() const { return time(steps()); }
    DiscreteState state(int n) const;
    /// max_n ||f^n_tau||_inf
    double forcing_sup() const;
    std::optional<double> extinction_time() const;
};

/// Step solver failure during a run; carries the trajectory computed so far.
class EvolutionError : public SolverError {
public:
    EvolutionError(const std::string& what, Trajectory partial)
        : SolverError(what), partial_(std::make_shared<Trajectory>(std::move(partial))) {}
    const Trajectory& partial() const { return *partial_; }

private:
    std::shared_ptr<const Trajectory> partial_;
};

/// M = max |F| over [-4||beta(u0)||, 4||beta(u0)||] (dense sampling plus local
/// refinement); M = 1 when F vanishes there.
double select_truncation_level(const SourceLaw& F, const MonotoneGraph& g, const GridField& u0);

/// f^n_tau(x) = (1/tau) * integral of f(x, t) over [n tau, (n+1) tau], nodewise.
GridField average_forcing(const Forcing& f, int n, double tau, const Grid& grid);

Trajectory run_evolution(const EvolutionConfig& cfg);

/// Pi_tau w(t) = w^{n+1} on (n tau, (n+1) tau], Pi_tau w(0) = w^0.
GridField interpolant_pc(const std::vector<GridField>& w, double tau, double t);
/// Lambda_tau w: piecewise linear with Lambda_tau w(n tau) = w^n.
GridField interpolant_pl(const std::vector<GridField>& w, double tau, double t);
GridField interpolant_pc(const Trajectory& traj, double t);
GridField interpolant_pl(const Trajectory& traj, double t);

/// Both sides of  int_0^T ||Pi u - Lambda u||^2 dt = (tau^2/3) sum tau ||(u^{n+1}-u^n)/tau||^2.
/// The left side is integrated with two-point Gauss-Legendre per interval
/// (exact for the quadratic integrand), the right side in closed form.
struct InterpolantIdentity {
    double integral = 0.0;
    double closed_form = 0.0;
};
InterpolantIdentity interpolant_identity(const Trajectory& traj);

}  // namespace dnp
