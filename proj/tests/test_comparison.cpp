#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dnp/comparison.hpp"
#include "dnp/errors.hpp"

using namespace dnp;

namespace {

constexpr double pi = std::numbers::pi;

EvolutionConfig base(double q, double p, SourceLaw F) {
    EvolutionConfig cfg;
    cfg.graph = MonotoneGraph::power(q);
    cfg.flux = FluxLaw::p_laplacian(p);
    cfg.source = std::move(F);
    cfg.u0 = sample_field(Grid::line(1.0, 32), [](const Vec2& x) { return std::sin(pi * x[0]); });
    cfg.T = 0.1;
    cfg.N = 20;
    cfg.modes = {false, true, false};
    return cfg;
}

GridField scaled(const GridField& u, double s) { return GridField(u.grid, s * u.values); }

}  // namespace

TEST_CASE("identical inputs give identical trajectories") {
    const auto cfg = base(3.0, 2.0, SourceLaw::from_descriptor({SourceKind::linear, 1.0, 2.0}));
    const auto cr = run_pair(cfg, cfg.u0, cfg.forcing);
    for (double d : cr.l1_distance) CHECK(d == 0.0);
    for (const auto& r : run_comparison_checks(cr)) CHECK(r.passed());
}

TEST_CASE("linear source pair stays inside the Gronwall envelope") {
    const auto cfg = base(3.0, 2.0, SourceLaw::from_descriptor({SourceKind::linear, 1.0, 2.0}));
    const auto cr = run_pair(cfg, scaled(cfg.u0, 0.5), Forcing::zero());
    CHECK(cr.L == 1.0);
    CHECK(cr.data_order == -1);
    for (const auto& r : run_comparison_checks(cr)) {
        INFO(r.name << " worst slack " << r.worst_slack);
        CHECK(r.passed());
    }
}

TEST_CASE("zero source contracts in L1 step by step") {
    const auto cfg = base(3.0, 2.0, SourceLaw::zero());
    const auto u02 = sample_field(cfg.u0.grid, [](const Vec2& x) { return std::sin(2 * pi * x[0]); });
    const auto cr = run_pair(cfg, u02, Forcing::zero());
    CHECK(cr.L == 0.0);
    const auto c = check_l1_contraction(cr);
    CHECK(c.passed());
    CHECK(check_gronwall_l1(cr).passed());
    CHECK(cr.l1_distance.back() < cr.l1_distance.front());
}

TEST_CASE("positive-part check needs a monotone source") {
    auto cfg = base(3.0, 2.0, SourceLaw::from_descriptor({SourceKind::neg_cubic, 1.0, 2.0}));
    const auto cr = run_pair(cfg, scaled(cfg.u0, 0.5), Forcing::zero());
    CHECK_THROWS_AS(check_positive_part(cr), ConfigError);
    CHECK_THROWS_AS(check_ordering(cr), ConfigError);
}

TEST_CASE("ordered forcing keeps the solutions ordered") {
    auto cfg = base(2.0, 2.0, SourceLaw::from_descriptor({SourceKind::linear, 1.0, 2.0}));
    cfg.forcing = Forcing{[](const Vec2&, double) { return 1.0; }};
    const auto cr = run_pair(cfg, scaled(cfg.u0, 1.5), Forcing{[](const Vec2&, double) { return 2.0; }});
    CHECK(cr.data_order == 1);
    const auto ord = check_ordering(cr);
    CHECK(ord.passed());
    CHECK(check_positive_part(cr).passed());
    CHECK(check_gronwall_l1(cr).passed());
}
