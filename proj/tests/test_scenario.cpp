#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dnp/errors.hpp"
#include "dnp/report.hpp"

using namespace dnp;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text, "test.ini");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("dnp-test-" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("every preset parses, validates and round-trips") {
    for (const auto& name : preset_names()) {
        INFO(name);
        const ScenarioConfig c = preset(name);
        const ScenarioConfig again = parse_scenario(serialize_scenario(c));
        CHECK(again == c);
        CHECK(serialize_scenario(again) == serialize_scenario(c));
    }
}

TEST_CASE("round trip keeps full precision and optional sections") {
    ScenarioConfig c = preset("comparison");
    c.T = 0.1 + 1e-17;
    c.flux.terms = {{1.5, 0.3}, {3.0, 1.0 / 3.0}};
    c.source.M = 2.0 / 3.0;
    c.source.monotone = false;
    c.modes = {false, true, false};
    c.forcing2 = ForcingSpec{ForcingKind::time_sine, 0.25, 3.0};
    c.monitors.chain_tolerance = 1e-8;
    c.output.snapshots = {0.0, 0.1 / 3.0};
    CHECK(parse_scenario(serialize_scenario(c)) == c);
}

TEST_CASE("defaults fill missing keys") {
    const auto c = parse_scenario("[mode]\ntheorems = Th1\n");
    CHECK(c.dimension == 1);
    CHECK(c.cells[0] == 64);
    CHECK(c.graph.kind == GraphKind::power);
    CHECK(c.flux.terms == std::vector<FluxTerm>{{2.0, 1.0}});
    CHECK(c.modes.th1);
    CHECK(!c.has_pair());
}

TEST_CASE("parse errors carry line and key") {
    CHECK_THAT(error_of("[mode]\ntheorems = Th1\n[graph]\nkind = power\ncolour = red\n"),
               Catch::Matchers::ContainsSubstring("test.ini:5") &&
                   Catch::Matchers::ContainsSubstring("graph.colour: unknown key"));
    CHECK_THAT(error_of("[nowhere]\n"), Catch::Matchers::ContainsSubstring("unknown section"));
    CHECK_THAT(error_of("q = 2\n"), Catch::Matchers::ContainsSubstring("before any section"));
    CHECK_THAT(error_of("[time]\nT = 0.1\nT = 0.2\n"), Catch::Matchers::ContainsSubstring("time.T: duplicate key"));
    CHECK_THAT(error_of("[time]\nN = ten\n"), Catch::Matchers::ContainsSubstring("time.N: expected an integer"));
    CHECK_THAT(error_of("[graph]\nkind = cube\n"), Catch::Matchers::ContainsSubstring("graph.kind"));
    CHECK_THAT(error_of("[domain\n"), Catch::Matchers::ContainsSubstring("malformed section"));
}

TEST_CASE("validation names the offending key") {
    CHECK_THAT(error_of("[graph]\nq = 0.5\n[mode]\ntheorems = Th1\n"),
               Catch::Matchers::ContainsSubstring("graph.q"));
    CHECK_THAT(error_of("[time]\nT = -1\n[mode]\ntheorems = Th1\n"), Catch::Matchers::ContainsSubstring("time.T"));
    CHECK_THAT(error_of("[flux]\np = 1.5\nepsilon = 0\n[mode]\ntheorems = Th1\n"),
               Catch::Matchers::ContainsSubstring("flux.epsilon"));
    CHECK_THAT(error_of("[domain]\ncells = 4\n[initial]\nkind = custom\nvalues = 1, 2\n[mode]\ntheorems = Th1\n"),
               Catch::Matchers::ContainsSubstring("initial.values"));
    CHECK_THAT(error_of("[graph]\nq = 1.5\n[mode]\ntheorems = Th2\n"),
               Catch::Matchers::ContainsSubstring("mode.theorems"));
    CHECK_THAT(error_of("[source]\nkind = square\n[mode]\ntheorems = Th3\n"),
               Catch::Matchers::ContainsSubstring("mode.theorems"));
    CHECK_THAT(error_of("[source]\nkind = neg_cubic\nmonotone = true\n[mode]\ntheorems = Th1\n"),
               Catch::Matchers::ContainsSubstring("source.monotone"));
    CHECK_THAT(error_of("[graph]\nq = 2\n"), Catch::Matchers::ContainsSubstring("mode.theorems"));
    CHECK_THAT(error_of("[graph]\nkind = tan\n[initial]\namplitude = 2\n[mode]\ntheorems = Th1\n"),
               Catch::Matchers::ContainsSubstring("initial"));
}

TEST_CASE("custom samples and two-dimensional domains") {
    const auto c = parse_scenario(
        "[domain]\ncells = 4\n[initial]\nkind = custom\nvalues = 0.1, 0.2, 0.3\n[mode]\ntheorems = Th1\n");
    const auto u = initial_field(c.initial, scenario_grid(c));
    CHECK(u.values == Eigen::Vector3d(0.1, 0.2, 0.3));
    const auto d = parse_scenario("[domain]\ndimension = 2\nextent = 1, 2\ncells = 4, 8\n[mode]\ntheorems = Th1\n");
    const Grid g = scenario_grid(d);
    CHECK(g.dimension() == 2);
    CHECK(g.node_count() == 3 * 7);
    CHECK(g.spacing(1) == 0.25);
}

TEST_CASE("source monotone flag can only be switched off") {
    auto c = preset("comparison");
    c.source.monotone = false;
    c.modes = {false, true, false};
    CHECK(!scenario_source(c).monotone());
    const auto r = run_scenario(c);
    for (const auto& m : r.comparison) CHECK(m.name != "ordering");
}

TEST_CASE("heat preset report lists seven passing inequalities") {
    const auto r = run_scenario(preset("heat"));
    CHECK(r.exit_code() == exit_ok);
    CHECK(r.monitors.size() == 7);
    const std::string text = render_report(r);
    std::size_t pass_lines = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (line.rfind("PASS", 0) == 0) ++pass_lines;
    CHECK(pass_lines == 7);
    CHECK(text.find("FAIL") == std::string::npos);
}

TEST_CASE("report without monitors holds only run metadata") {
    auto c = preset("heat");
    c.monitors = MonitorToggles::none();
    const auto r = run_scenario(c);
    const std::string text = render_report(r);
    CHECK(text.find("PASS") == std::string::npos);
    CHECK(text.find("status") != std::string::npos);
    CHECK(r.exit_code() == exit_ok);
}

TEST_CASE("comparison report has Gronwall and ordering lines") {
    const auto r = run_scenario(preset("comparison"));
    const std::string text = render_report(r);
    CHECK(text.find("gronwall_l1") != std::string::npos);
    CHECK(text.find("ordering") != std::string::npos);
    CHECK(r.exit_code() == exit_ok);
}

TEST_CASE("fast diffusion summary records extinction") {
    const auto r = run_scenario(preset("fast-diffusion"));
    CHECK(r.exit_code() == exit_ok);
    REQUIRE(r.trajectory.extinction_time().has_value());
    const auto dir = scratch("fd");
    emit_report(r, dir);
    const std::string summary = slurp(dir / "summary.csv");
    CHECK(summary.find("extinction_time,0.") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("data files are byte-for-byte deterministic") {
    const auto a = scratch("det-a");
    const auto b = scratch("det-b");
    emit_report(run_scenario(preset("comparison")), a);
    emit_report(run_scenario(preset("comparison")), b);
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a)) {
        const auto name = entry.path().filename();
        if (name == "metadata.txt") continue;
        INFO(name.string());
        CHECK(slurp(entry.path()) == slurp(b / name));
        ++files;
    }
    CHECK(files >= 6);
    CHECK(std::filesystem::exists(a / "comparison.csv"));
    CHECK(slurp(a / "metadata.txt").find("created") != std::string::npos);
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST_CASE("unwritable output path is an error") {
    const auto r = run_scenario(preset("heat"));
    const auto file = scratch("blocker");
    std::ofstream(file) << "x";
    CHECK_THROWS_AS(emit_report(r, file / "sub"), Error);
    std::filesystem::remove(file);
}

TEST_CASE("study needs three levels") {
    CHECK_THROWS_AS(refinement_study(preset("heat"), 2, StudyTarget::time), ConfigError);
}

TEST_CASE("zero initial data gives zero differences and undefined orders") {
    auto c = preset("heat");
    c.initial.amplitude = 0.0;
    c.cells = {16, 16};
    c.N = 10;
    const auto s = refinement_study(c, 3, StudyTarget::time);
    for (std::size_t k = 0; k + 1 < s.rows.size(); ++k) CHECK(*s.rows[k].successive_difference == 0.0);
    REQUIRE(s.orders.size() == 1);
    CHECK(!s.orders[0].has_value());
    CHECK(!s.observed_order().has_value());
    CHECK(render_study(s).find("undefined") != std::string::npos);
}

TEST_CASE("heat study recovers first order in time and second order in space") {
    auto c = preset("heat");
    c.cells = {32, 32};
    c.N = 20;
    const auto t = refinement_study(c, 4, StudyTarget::time);
    REQUIRE(t.observed_order().has_value());
    CHECK(std::abs(*t.observed_order() - 1.0) < 0.2);
    for (const auto& row : t.rows) CHECK(row.analytic_error.has_value());
    const auto s = refinement_study(c, 3, StudyTarget::space);
    REQUIRE(s.observed_order().has_value());
    CHECK(std::abs(*s.observed_order() - 2.0) < 0.2);
}

TEST_CASE("rows come sorted coarse to fine") {
    auto c = preset("porous-medium");
    c.cells = {16, 16};
    c.N = 10;
    const auto s = refinement_study(c, 3, StudyTarget::time);
    REQUIRE(s.rows.size() == 3);
    for (std::size_t k = 0; k + 1 < s.rows.size(); ++k) CHECK(s.rows[k].tau > s.rows[k + 1].tau);
}
