#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dnp/errors.hpp"
#include "dnp/evolution.hpp"
#include "dnp/monitors.hpp"

using namespace dnp;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

EvolutionConfig heat(int cells, double T, int N) {
    EvolutionConfig cfg;
    const Grid g = Grid::line(1.0, cells);
    cfg.u0 = sample_field(g, [](const Vec2& x) { return std::sin(pi * x[0]); });
    cfg.T = T;
    cfg.N = N;
    cfg.modes.th1 = true;
    cfg.modes.th3 = true;
    return cfg;
}

double bump(const Vec2& x, double c, double w) {
    const double s = (x[0] - c) / w;
    return std::abs(s) < 1.0 ? 1.0 - s * s : 0.0;
}

}  // namespace

TEST_CASE("heat eigenmode decays by the implicit Euler factor") {
    const auto cfg = heat(32, 0.1, 20);
    const auto traj = run_evolution(cfg);
    REQUIRE(traj.status == TerminationStatus::completed);
    const double h = 1.0 / 32;
    const double lam = 4.0 / (h * h) * std::pow(std::sin(pi * h / 2), 2);
    const double factor = 1.0 / (1.0 + cfg.tau() * lam);
    for (int n = 1; n <= traj.steps(); ++n) {
        const auto ratio = traj.u[n].values.array() / traj.u[n - 1].values.array();
        CHECK(std::abs(ratio.maxCoeff() - factor) < 1e-10);
        CHECK(std::abs(ratio.minCoeff() - factor) < 1e-10);
    }
}

TEST_CASE("zero data stays zero and passes every monitor") {
    auto cfg = heat(16, 0.1, 10);
    cfg.u0 = GridField(cfg.u0.grid);
    cfg.modes.th2 = true;
    const auto traj = run_evolution(cfg);
    for (const auto& u : traj.u) CHECK(u.values.cwiseAbs().maxCoeff() == 0.0);
    for (const auto& r : run_monitors(traj)) CHECK(r.passed());
}

TEST_CASE("forcing averages over each time interval") {
    const Grid g = Grid::line(1.0, 4);
    Forcing f{[](const Vec2&, double t) { return t; }};
    const auto f0 = average_forcing(f, 0, 0.5, g);
    CHECK(f0[1] == Approx(0.25).epsilon(1e-14));
    Forcing s{[](const Vec2&, double t) { return std::sin(pi * t); }};
    CHECK(average_forcing(s, 0, 1.0, g)[0] == Approx(2.0 / pi).epsilon(1e-12));
    CHECK(average_forcing(Forcing::zero(), 3, 0.1, g).values.isZero());
}

TEST_CASE("truncation level from the initial datum") {
    const Grid g = Grid::line(1.0, 2);
    GridField u0(g);
    u0[0] = 1.0;
    const auto beta = MonotoneGraph::power(2.0);
    CHECK(select_truncation_level(SourceLaw::from_descriptor({SourceKind::square, 1.0, 2.0}), beta, u0) ==
          Approx(16.0).epsilon(1e-12));
    CHECK(select_truncation_level(SourceLaw::zero(), beta, u0) == 1.0);
    CHECK(select_truncation_level(SourceLaw::from_descriptor({SourceKind::sine, 1.0, 2.0}), beta, u0) ==
          Approx(1.0).epsilon(1e-10));
}

TEST_CASE("interpolants and their distance identity") {
    const auto traj = run_evolution(heat(16, 0.1, 8));
    const double tau = traj.tau;
    CHECK(interpolant_pc(traj, 0.0).values == traj.u[0].values);
    CHECK(interpolant_pc(traj, 0.5 * tau).values == traj.u[1].values);
    CHECK(interpolant_pc(traj, tau).values == traj.u[1].values);
    const auto mid = interpolant_pl(traj, 1.5 * tau);
    CHECK((mid.values - 0.5 * (traj.u[1].values + traj.u[2].values)).cwiseAbs().maxCoeff() < 1e-15);
    const auto id = interpolant_identity(traj);
    CHECK(id.integral == Approx(id.closed_form).epsilon(1e-12));
    CHECK(id.closed_form > 0.0);
}

TEST_CASE("mode mismatches are configuration errors") {
    auto cfg = heat(8, 0.1, 4);
    cfg.graph = MonotoneGraph::power(1.5);
    cfg.modes = {false, true, false};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = heat(8, 0.1, 4);
    cfg.source = SourceLaw::from_descriptor({SourceKind::square, 1.0, 2.0});
    cfg.modes = {false, false, true};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = heat(8, 0.1, 4);
    cfg.forcing = Forcing{[](const Vec2&, double) { return 1.0; }};
    cfg.modes = {false, false, true};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("initial datum outside the graph domain is rejected") {
    auto cfg = heat(8, 0.1, 4);
    cfg.graph = MonotoneGraph::tangent();
    cfg.modes = {true, false, true};
    cfg.u0.values *= 2.0;
    CHECK_THROWS_AS(validate(cfg), DomainError);
}

TEST_CASE("fast diffusion reaches extinction and keeps running") {
    EvolutionConfig cfg;
    cfg.graph = MonotoneGraph::power(3.0);
    cfg.flux = FluxLaw::p_laplacian(1.5);
    cfg.u0 = sample_field(Grid::line(1.0, 32), [](const Vec2& x) { return 0.1 * std::sin(pi * x[0]); });
    cfg.T = 0.02;
    cfg.N = 100;
    cfg.modes = {false, true, true};
    const auto traj = run_evolution(cfg);
    REQUIRE(traj.extinction_time().has_value());
    CHECK(traj.status == TerminationStatus::extinct);
    CHECK(traj.steps() == cfg.N);
    CHECK(*traj.extinction_time() < 0.015);
    for (const auto& r : run_monitors(traj)) CHECK(r.passed());
}

TEST_CASE("porous medium run satisfies the dissipation chain") {
    EvolutionConfig cfg;
    cfg.graph = MonotoneGraph::power(1.5);
    cfg.u0 = sample_field(Grid::line(1.0, 32), [](const Vec2& x) { return bump(x, 0.5, 0.25); });
    cfg.T = 0.05;
    cfg.N = 50;
    cfg.modes = {true, false, true};
    const auto traj = run_evolution(cfg);
    CHECK(traj.status == TerminationStatus::completed);
    for (const auto& r : run_monitors(traj)) {
        INFO(r.name << " worst slack " << r.worst_slack);
        CHECK(r.passed());
    }
}

TEST_CASE("maximum principle chain with source and forcing") {
    auto cfg = heat(16, 0.2, 20);
    cfg.source = SourceLaw::from_descriptor({SourceKind::square, 1.0, 2.0});
    cfg.forcing = Forcing{[](const Vec2& x, double t) { return std::sin(pi * x[0]) * (1.0 + t); }};
    cfg.modes = {true, true, false};
    const auto traj = run_evolution(cfg);
    CHECK(traj.M == Approx(16.0).epsilon(1e-10));
    for (const auto& r : monitor_linf_chain(traj)) CHECK(r.passed());
    const auto e = monitor_energy_chain(traj);
    CHECK(e.passed());
    CHECK(monitor_fenchel_chain(traj).passed());
}

TEST_CASE("monitor toggles switch monitors off") {
    auto cfg = heat(8, 0.1, 4);
    cfg.monitors = MonitorToggles::none();
    CHECK(run_monitors(run_evolution(cfg)).empty());
}

TEST_CASE("energy chain bookkeeping is stable under tau halving") {
    double prev = 0.0;
    for (int N : {20, 40, 80}) {
        const auto traj = run_evolution(heat(32, 0.1, N));
        const double g = cumulative_gradient_energy(traj);
        if (prev > 0.0) CHECK(std::max(g / prev, prev / g) <= 1.1);
        prev = g;
    }
}

TEST_CASE("truncation saturation stops the run") {
    auto cfg = heat(16, 2.0, 40);
    cfg.u0.values *= 3.0;
    cfg.source = SourceLaw::from_descriptor({SourceKind::power, 50.0, 3.0});
    cfg.modes = {true, true, true};
    cfg.truncation_override = 2.0;
    const auto traj = run_evolution(cfg);
    CHECK(traj.status == TerminationStatus::truncation_saturated);
    REQUIRE(traj.saturation_step.has_value());
    CHECK(traj.steps() == *traj.saturation_step);
}
