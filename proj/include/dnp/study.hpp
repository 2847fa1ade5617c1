#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dnp/errors.hpp"
#include "dnp/scenario.hpp"

namespace dnp {

enum class StudyTarget { time, space };
std::string to_string(StudyTarget t);

/// One refinement level.
struct StudyRow {
    int level = 0;
    int N = 0;
    int cells = 0;
    double tau = 0.0;
    double h = 0.0;
    std::string status;
    double validity_horizon = 0.0;
    std::optional<double> extinction_time;
    std::optional<int> saturation_step;
    int monitors_passed = 0;
    int monitors_failed = 0;
    double cumulative_gradient_energy = 0.0;
    double max_conjugate_energy = 0.0;
    /// ||Lambda u_level - Lambda u_{level+1}||_{L^2(Q)}; empty on the finest level.
    std::optional<double> successive_difference;
    /// Distance to the analytic eigenmode solution (heat scenarios only).
    std::optional<double> analytic_error;
};

struct StudyResult {
    StudyTarget target = StudyTarget::time;
    std::vector<StudyRow> rows;  ///< coarse to fine
    /// log2(d_k / d_{k+1}); empty entries where a difference vanishes.
    std::vector<std::optional<double>> orders;
    std::vector<std::optional<double>> analytic_orders;
    /// Order from the two finest differences, when defined.
    std::optional<double> observed_order() const;
};

/// A level failed; the rows of the levels before it are kept.
class StudyError : public Error {
public:
    StudyError(const std::string& what, StudyResult partial) : Error(what), partial_(std::move(partial)) {}
    const StudyResult& partial() const { return partial_; }

private:
    StudyResult partial_;
};

/// The scenario at refinement level k: N 2^k steps (time) or 2^k times the cells (space).
ScenarioConfig refined_scenario(const ScenarioConfig& cfg, int level, StudyTarget target);

/// Runs levels >= 3 refinements (concurrently) and compares consecutive levels.
StudyResult refinement_study(const ScenarioConfig& cfg, int levels, StudyTarget target);

/// True for p = q = 2, F = 0, f = 0 with an eigenmode initial datum.
bool heat_eigenmode_scenario(const ScenarioConfig& cfg);
/// Discrete Dirichlet eigenvalue of the mode: sum_d (4 / h_d^2) sin^2(m pi h_d / (2 L_d)).
double discrete_eigenvalue(const Grid& grid, int mode);
/// max_{n, i} |u^n_i - (1 + tau lambda_h)^{-n} u^0_i|.
double eigenmode_amplitude_error(const Trajectory& traj, int mode);

}  // namespace dnp
