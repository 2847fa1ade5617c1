// One line per acceptance criterion; exit status 1 when any criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dnp/comparison.hpp"
#include "dnp/elliptic_step.hpp"
#include "dnp/report.hpp"
#include "dnp/study.hpp"

using namespace dnp;

namespace {

// tolerances of the criteria
constexpr double kFenchelTol = 1e-10;
constexpr double kSubgradientTol = 1e-9;
constexpr double kInverseTol = 1e-10;
constexpr int kGraphSamples = 10000;
constexpr int kFluxPairs = 1000;
constexpr double kFluxFdTol = 1e-6;
constexpr double kOracleTol = 1e-8;
constexpr double kResidualTol = 1e-9;
constexpr double kLinfRounding = 1e-12;
constexpr double kChainTol = 1e-9;
constexpr double kEnergyRatio = 1.1;
constexpr double kIdentityTol = 1e-12;
constexpr double kEigenTol = 1e-10;
constexpr double kOrderTol = 0.2;
constexpr double kExtinctionChange = 0.05;

struct Line {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " FAILED[" << what << "]";
        }
    }
};

int failures = 0;

void emit(int id, const std::string& title, Line& l) {
    std::printf("[%s] %2d %s:%s\n", l.pass ? "PASS" : "FAIL", id, title.c_str(), l.detail.str().c_str());
    if (!l.pass) ++failures;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

std::vector<MonotoneGraph> shipped_graphs() {
    return {MonotoneGraph::power(1.5), MonotoneGraph::power(2.0), MonotoneGraph::power(3.0),
            MonotoneGraph::power(4.0), MonotoneGraph::tangent(), MonotoneGraph::log1p(),
            MonotoneGraph::rational()};
}

std::pair<double, double> window(const MonotoneGraph& g) {
    switch (g.kind()) {
        case GraphKind::tan: return {-1.5, 1.5};
        case GraphKind::log1p:
        case GraphKind::rational: return {-0.99, 5.0};
        default: return {-3.0, 3.0};
    }
}

void criterion_convex() {
    Line l;
    std::mt19937_64 rng(11);
    double worst_fy = 0.0, worst_sub = 0.0, worst_inv = 0.0;
    long samples = 0;
    for (const auto& g : shipped_graphs()) {
        auto [lo, hi] = window(g);
        std::uniform_real_distribution<double> U(lo, hi);
        for (int k = 0; k < kGraphSamples; ++k) {
            const double s = U(rng), t = U(rng);
            const double b = g.beta(s);
            const double j = g.primitive(s);
            const double fy = std::abs(j + g.conjugate(b) - s * b) / std::max(1.0, std::abs(s * b));
            const double sub = (g.primitive(t) - j - b * (t - s)) / std::max(1.0, std::abs(g.primitive(t)));
            const double inv = std::abs(g.inverse(b) - s) / std::max(1.0, std::abs(s));
            worst_fy = std::max(worst_fy, fy);
            worst_sub = std::min(worst_sub, sub);
            worst_inv = std::max(worst_inv, inv);
            ++samples;
        }
    }
    l.require(worst_fy <= kFenchelTol, "Fenchel-Young");
    l.require(worst_sub >= -kSubgradientTol, "subgradient");
    l.require(worst_inv <= kInverseTol, "inverse");
    l.detail << " " << samples << " samples over 7 graphs, max Fenchel-Young gap " << worst_fy
             << ", min subgradient slack " << worst_sub << ", max |inv(beta(s)) - s| " << worst_inv;
    emit(1, "convex analysis (j, j*, beta^{-1})", l);
}

void criterion_flux() {
    Line l;
    std::mt19937_64 rng(12);
    std::normal_distribution<double> N(0.0, 2.0);
    double worst_a01 = 0.0, worst_a02 = 0.0, worst_a03 = 0.0, worst_fd = 0.0;
    bool zero_ok = true;
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        const auto law = FluxLaw::p_laplacian(p);
        const double c = law.coercivity(), C = law.growth();
        const Vec2 x{0.3, 0.0};
        const Vec2 a0 = law.flux(x, {0.0, 0.0});
        zero_ok = zero_ok && a0[0] == 0.0 && a0[1] == 0.0;
        for (int k = 0; k < kFluxPairs; ++k) {
            const Vec2 z1{N(rng), N(rng)}, z2{N(rng), N(rng)};
            const double n1 = norm(z1);
            const double a = law.potential(x, z1);
            worst_a01 = std::min({worst_a01, a - (c * std::pow(n1, p) - C), C * (std::pow(n1, p) + 1.0) - a});
            worst_a02 = std::min(worst_a02, C * (std::pow(n1, p - 1.0) + 1.0) - norm(law.flux(x, z1)));
            const Vec2 d = law.flux(x, z1) - law.flux(x, z2);
            worst_a03 = std::min(worst_a03, dot(d, z1 - z2) - law.monotonicity_bound(z1, z2));
            // alpha against central differences of a
            const double h = 1e-5 * std::max(1.0, n1);
            const Vec2 al = law.flux(x, z1);
            for (int b = 0; b < 2; ++b) {
                Vec2 zp = z1, zm = z1;
                zp[b] += h;
                zm[b] -= h;
                const double fd = (law.potential(x, zp) - law.potential(x, zm)) / (2 * h);
                worst_fd = std::max(worst_fd, std::abs(fd - al[b]) / std::max(1.0, norm(al)));
            }
        }
    }
    l.require(zero_ok, "alpha(x,0)=0");
    l.require(worst_a01 >= -1e-12, "sandwich");
    l.require(worst_a02 >= -1e-12, "growth");
    l.require(worst_a03 >= -1e-12, "strong monotonicity");
    l.require(worst_fd <= kFluxFdTol, "gradient consistency");
    l.detail << " " << 4 * kFluxPairs << " pairs, min slacks sandwich " << worst_a01 << ", growth " << worst_a02
             << ", monotonicity " << worst_a03 << "; max relative FD mismatch " << worst_fd;
    emit(2, "flux structure conditions", l);
}

void criterion_oracle(const std::vector<RunResult>& runs) {
    Line l;
    const Grid grid = Grid::line(1.0, 2);
    int problems = 0;
    double worst = 0.0;
    for (const auto& graph : shipped_graphs())
        for (double p : {1.5, 2.0, 3.0, 4.0})
            for (double g : {-0.7, 0.4}) {
                GridField rhs(grid);
                rhs[0] = g;
                const StepProblem prob{graph, FluxLaw::p_laplacian(p), 0.5, rhs, GridField(grid)};
                const double u = solve_step(prob, 1e-12).u_next[0];
                worst = std::max(worst, std::abs(u - oracle_scalar_solve(prob)));
                ++problems;
            }
    double max_res = 0.0;
    long steps = 0;
    for (const auto& r : runs) {
        std::vector<const Trajectory*> ts{&r.trajectory};
        if (r.pair) ts.push_back(&r.pair->second);
        for (const auto* t : ts)
            for (double res : t->residuals) {
                max_res = std::max(max_res, res);
                ++steps;
            }
    }
    l.require(problems >= 50 && worst <= kOracleTol, "oracle");
    l.require(max_res <= kResidualTol, "residual certificates");
    l.detail << " " << problems << " one-node problems, max |solve - oracle| " << worst << "; " << steps
             << " multi-node steps, max residual " << max_res;
    emit(3, "step solver vs bisection oracle", l);
}

const MonitorReport* find(const std::vector<MonitorReport>& ms, const std::string& name) {
    for (const auto& m : ms)
        if (m.name == name) return &m;
    return nullptr;
}

void criterion_linf(const std::vector<RunResult>& runs) {
    Line l;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : runs)
        for (const char* name : {"linf_step", "linf_telescoped", "linf_space_time"}) {
            const auto* m = find(r.monitors, name);
            l.require(m && m->passed(), r.config.output.name + "/" + name);
            if (m) worst = std::min(worst, m->worst_slack);
        }
    l.require(worst >= -kLinfRounding * 10.0, "slack");
    l.detail << " " << runs.size() << " preset runs x 3 bounds, worst slack " << worst;
    emit(4, "maximum principle chain", l);
}

void criterion_energy(const std::vector<RunResult>& runs) {
    Line l;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& r : runs) {
        const auto* m = find(r.monitors, "energy_chain");
        l.require(m && m->passed(), r.config.output.name);
        if (m) worst = std::min(worst, m->worst_slack);
    }
    double worst_ratio = 1.0;
    for (const auto& r : runs) {
        std::vector<double> g;
        for (int k = 0; k < 3; ++k) {
            const auto c = refined_scenario(r.config, k, StudyTarget::time);
            g.push_back(cumulative_gradient_energy(run_evolution(build_evolution(c))));
        }
        for (int k = 0; k < 2; ++k) {
            const double ratio = std::max(g[k] / g[k + 1], g[k + 1] / g[k]);
            if (g[k] == 0.0 && g[k + 1] == 0.0) continue;
            worst_ratio = std::max(worst_ratio, ratio);
        }
    }
    l.require(worst >= -kChainTol, "chain");
    l.require(worst_ratio <= kEnergyRatio, "tau-halving ratio");
    l.detail << " worst chain slack " << worst << "; max cumulative-energy ratio over 3 tau levels "
             << worst_ratio;
    emit(5, "energy chain", l);
}

void criterion_dissipation(const std::vector<RunResult>& runs) {
    Line l;
    int dissipation = 0, lyapunov = 0, monotone_runs = 0;
    double worst = std::numeric_limits<double>::infinity();
    double worst_decay = 0.0;
    for (const auto& r : runs) {
        if (r.config.modes.th1) {
            const auto* m = find(r.monitors, "dissipation_chain");
            l.require(m && m->passed(), r.config.output.name + "/dissipation");
            if (m) worst = std::min(worst, m->worst_slack);
            ++dissipation;
        }
        if (r.config.modes.th3) {
            const auto* m = find(r.monitors, "lyapunov_psi");
            l.require(m && m->passed(), r.config.output.name + "/lyapunov");
            if (m) worst = std::min(worst, m->worst_slack);
            ++lyapunov;
        }
        if (r.trajectory.source.is_zero() && r.trajectory.forcing_zero) {
            const auto e = flux_energy_history(r.trajectory);
            for (std::size_t n = 0; n + 1 < e.size(); ++n) {
                const double inc = e[n + 1] - e[n];
                worst_decay = std::max(worst_decay, inc / std::max(1.0, e[n]));
            }
            ++monotone_runs;
        }
    }
    l.require(dissipation > 0 && lyapunov > 0 && monotone_runs > 0, "coverage");
    l.require(worst >= -kChainTol, "slack");
    l.require(worst_decay <= kChainTol, "energy non-increasing");
    l.detail << " " << dissipation << " Th1 runs, " << lyapunov << " Th3 runs, worst slack " << worst << "; "
             << monotone_runs << " unforced runs, max energy increase " << worst_decay;
    emit(6, "dissipation and Lyapunov monitors", l);
}

void criterion_interpolant(const std::vector<RunResult>& runs) {
    Line l;
    double worst = 0.0;
    for (const auto& r : runs) {
        const auto id = interpolant_identity(r.trajectory);
        const double e = std::abs(id.integral - id.closed_form) / std::max(id.closed_form, 1e-300);
        if (id.closed_form == 0.0 && id.integral == 0.0) continue;
        worst = std::max(worst, e);
    }
    l.require(worst <= kIdentityTol, "identity");
    l.detail << " " << runs.size() << " runs, max relative mismatch " << worst;
    emit(7, "interpolant distance identity", l);
}

void criterion_heat(const RunResult& heat) {
    Line l;
    const double err = eigenmode_amplitude_error(heat.trajectory, heat.config.initial.mode);
    const auto study = refinement_study(heat.config, 4, StudyTarget::time);
    const auto order = study.observed_order();
    l.require(err <= kEigenTol, "amplitude");
    l.require(order && std::abs(*order - 1.0) <= kOrderTol, "temporal order");
    l.detail << " max |u^n - (1 + tau lambda_h)^{-n} u^0| " << err << "; observed temporal order "
             << (order ? *order : std::nan(""));
    emit(8, "heat equation eigenmode", l);
}

void criterion_comparison() {
    Line l;
    // exact L1 contraction with F = 0 and crossing data
    ScenarioConfig z = preset("comparison");
    z.source.descriptor = {SourceKind::zero, 1.0, 2.0};
    z.initial = InitialSpec{InitialKind::eigenmode, 1.0, 1, {0.5, 0.5}, 0.25, {}};
    z.initial2 = InitialSpec{InitialKind::eigenmode, 0.8, 2, {0.5, 0.5}, 0.25, {}};
    const auto zr = run_scenario(z);
    const auto contraction = check_l1_contraction(*zr.pair);
    l.require(contraction.passed(), "L1 contraction");

    std::vector<double> worst;
    int ordering = 0;
    bool envelope = true;
    for (int k = 0; k < 3; ++k) {
        const auto c = refined_scenario(preset("comparison"), k, StudyTarget::time);
        const auto r = run_scenario(c);
        const auto* g = find(r.comparison, "gronwall_l1");
        const auto* o = find(r.comparison, "ordering");
        envelope = envelope && g && g->passed();
        if (g) worst.push_back(g->worst_slack);
        if (o) ordering += o->violations;
        l.require(o != nullptr && r.pair->data_order != 0, "ordered data");
    }
    l.require(envelope, "Gronwall envelope");
    l.require(worst.size() == 3 && std::abs(worst[1]) < std::abs(worst[0]) && std::abs(worst[2]) < std::abs(worst[1]),
              "worst slack shrinking");
    l.require(ordering == 0, "ordering");
    l.detail << " contraction worst slack " << contraction.worst_slack << "; Gronwall worst slack by tau level";
    for (double w : worst) l.detail << " " << w;
    l.detail << "; ordering violations " << ordering;
    emit(9, "comparison principles", l);
}

void criterion_fast_diffusion(const RunResult& fd) {
    Line l;
    const auto te = fd.trajectory.extinction_time();
    l.require(fd.exit_code() == exit_ok, "monitors");
    l.require(te.has_value(), "extinction");
    const auto study = refinement_study(fd.config, 4, StudyTarget::time);
    const auto& rows = study.rows;
    double change = std::nan("");
    if (rows.size() == 4 && rows[2].extinction_time && rows[3].extinction_time)
        change = std::abs(*rows[2].extinction_time - *rows[3].extinction_time) / *rows[3].extinction_time;
    l.require(change < kExtinctionChange, "extinction-time convergence");
    l.detail << " " << fd.monitors.size() << " monitors, " << fd.violations() << " violations; extinction at t = "
             << (te ? *te : std::nan("")) << "; finest-level estimates";
    for (const auto& r : rows) l.detail << " " << (r.extinction_time ? *r.extinction_time : std::nan(""));
    l.detail << " (relative change " << change << ")";
    emit(10, "singular case p < 2 < q", l);
}

}  // namespace

int main() {
    std::vector<RunResult> runs;
    std::map<std::string, std::size_t> by_name;
    for (const auto& name : preset_names()) {
        by_name[name] = runs.size();
        runs.push_back(run_scenario(preset(name)));
    }
    criterion_convex();
    criterion_flux();
    criterion_oracle(runs);
    criterion_linf(runs);
    criterion_energy(runs);
    criterion_dissipation(runs);
    criterion_interpolant(runs);
    criterion_heat(runs[by_name.at("heat")]);
    criterion_comparison();
    criterion_fast_diffusion(runs[by_name.at("fast-diffusion")]);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
