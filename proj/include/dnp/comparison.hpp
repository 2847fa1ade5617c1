#pragma once

#include <vector>

#include "dnp/evolution.hpp"
#include "dnp/monitors.hpp"

namespace dnp {

/// Two runs sharing graph, flux, source, grid, tau and truncation level M
/// (taken from the initial datum with the larger ||beta(u0)||).
struct ComparisonRun {
    Trajectory first;
    Trajectory second;
    double L = 0.0;  ///< Lipschitz constant of F on [-R, R], R = max ||beta(u^n)|| over both runs
    double R = 0.0;
    std::vector<double> l1_distance;         ///< ||beta(u1^n) - beta(u2^n)||_1
    std::vector<double> positive_distance;   ///< int (beta(u1^n) - beta(u2^n))_+
    std::vector<double> negative_distance;   ///< int (beta(u2^n) - beta(u1^n))_+
    std::vector<double> forcing_l1;          ///< ||f1^k - f2^k||_1, k = 0 .. steps-1
    std::vector<double> forcing_positive;    ///< int (f1^k - f2^k)_+
    std::vector<int> ordering_violations;    ///< nodes with beta(u1^n) - beta(u2^n) > 1e-12 (data ordered 1 <= 2), or the reverse

    int steps() const { return static_cast<int>(l1_distance.size()) - 1; }
    /// +1 when beta(u01) <= beta(u02) and f1 <= f2, -1 for the reverse ordering, 0 otherwise.
    int data_order = 0;
};

/// Runs both trajectories (concurrently) and fills the distance logs.
ComparisonRun run_pair(const EvolutionConfig& first, const GridField& u02, const Forcing& f2);

/// ||beta(u1^n) - beta(u2^n)||_1 <= e^{L t} D0 + sum_{k=1}^n e^{L(t - k tau)} tau ||f1^{k-1} - f2^{k-1}||_1,
/// violation when the excess is above 1e-6 + 0.01 * bound.
MonitorReport check_gronwall_l1(const ComparisonRun& cr);
/// Positive-part analogue; needs a monotone source.
MonitorReport check_positive_part(const ComparisonRun& cr);
/// Nodewise order preservation for ordered data; needs a monotone source.
MonitorReport check_ordering(const ComparisonRun& cr);
/// ||beta(u1^{n+1}) - beta(u2^{n+1})||_1 <= ||beta(u1^n) - beta(u2^n)||_1 per step, up to the
/// residual certificates of both step solves (F = 0 and f1 = f2 only).
MonitorReport check_l1_contraction(const ComparisonRun& cr);

/// All comparison checks that apply to cr.
std::vector<MonitorReport> run_comparison_checks(const ComparisonRun& cr);

}  // namespace dnp
