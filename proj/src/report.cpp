#include "dnp/report.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "dnp/errors.hpp"
#include "dnp/numerics.hpp"

namespace dnp {

namespace {

const std::map<std::string, std::string>& labels() {
    static const std::map<std::string, std::string> m{
        {"linf_step", "per-step L-inf bound on beta(u)"},
        {"linf_telescoped", "telescoped L-inf bound"},
        {"linf_space_time", "space-time L-inf bound of the interpolant"},
        {"energy_chain", "energy inequality chain"},
        {"dissipation_chain", "dissipation chain (Th1)"},
        {"lyapunov_psi", "psi^M Lyapunov functional (Th3)"},
        {"fenchel_chain", "subgradient chain for j*"},
        {"beta_gradient", "gradient bound for beta(u) (Th2)"},
        {"gronwall_l1", "Gronwall L1 envelope"},
        {"positive_part", "positive-part comparison"},
        {"ordering", "ordering preservation"},
        {"l1_contraction", "discrete L1 contraction"},
    };
    return m;
}

std::string label(const std::string& name) {
    auto it = labels().find(name);
    return it == labels().end() ? name : it->second;
}

std::string opt(const std::optional<double>& v) { return v ? format_real(*v) : ""; }
std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

std::ofstream open_file(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& p) {
    out.flush();
    if (!out) throw Error("write failed for " + p.string());
}

void report_line(std::ostream& os, const MonitorReport& m) {
    os << (m.passed() ? "PASS" : "FAIL") << "  " << std::left << std::setw(18) << m.name << std::right
       << " worst slack " << format_real(m.worst_slack);
    if (m.worst_index >= 0) os << " at " << m.worst_index;
    os << ", violations " << m.violations << "  [" << label(m.name) << "] " << m.statement << "\n";
}

// slack series aligned with time levels: per-step monitors cover n = 1..steps
std::vector<std::optional<double>> aligned(const MonitorReport& m, int steps) {
    std::vector<std::optional<double>> out(steps + 1);
    if (static_cast<int>(m.slack.size()) == steps)
        for (int n = 1; n <= steps; ++n) out[n] = m.slack[n - 1];
    else if (static_cast<int>(m.slack.size()) == steps + 1)
        for (int n = 0; n <= steps; ++n) out[n] = m.slack[n];
    return out;
}

bool per_step(const MonitorReport& m, int steps) {
    const int n = static_cast<int>(m.slack.size());
    return steps > 0 && (n == steps || n == steps + 1);
}

}  // namespace

int RunResult::violations() const {
    int v = 0;
    for (const auto& m : monitors) v += m.violations;
    for (const auto& m : comparison) v += m.violations;
    return v;
}

int RunResult::exit_code() const {
    if (failure) return exit_solver_failure;
    return violations() > 0 ? exit_violation : exit_ok;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
    validate_scenario(cfg);
    RunResult r;
    r.config = cfg;
    const EvolutionConfig e = build_evolution(cfg);
    try {
        if (cfg.has_pair()) {
            const Grid grid = scenario_grid(cfg);
            const GridField u02 = initial_field(cfg.initial2 ? *cfg.initial2 : cfg.initial, grid);
            const Forcing f2 = forcing_function(cfg.forcing2 ? *cfg.forcing2 : cfg.forcing, grid);
            ComparisonRun cr = run_pair(e, u02, f2);
            r.trajectory = cr.first;
            r.comparison = run_comparison_checks(cr);
            r.pair = std::move(cr);
        } else {
            r.trajectory = run_evolution(e);
        }
    } catch (const EvolutionError& err) {
        r.failure = err.what();
        r.trajectory = err.partial();
    }
    r.monitors = run_monitors(r.trajectory);
    return r;
}

std::string render_report(const RunResult& r) {
    const auto& t = r.trajectory;
    std::ostringstream os;
    os << "scenario        " << r.config.output.name << "\n";
    os << "graph           " << t.graph.describe() << "\n";
    os << "flux            " << t.flux.describe() << "\n";
    os << "source          " << t.source.describe() << "\n";
    os << "forcing         " << (t.forcing_zero ? "zero" : to_string(r.config.forcing.kind)) << "\n";
    os << "modes           " << t.modes.describe() << "\n";
    os << "grid            " << t.grid.dimension() << "-d, " << t.grid.cells(0);
    if (t.grid.dimension() == 2) os << " x " << t.grid.cells(1);
    os << " cells, h = " << format_real(t.grid.spacing(0)) << "\n";
    os << "time            T = " << format_real(t.T) << ", N = " << t.N << ", tau = " << format_real(t.tau) << "\n";
    os << "truncation M    " << format_real(t.M) << "\n";
    os << "status          " << to_string(t.status) << " after " << t.steps() << " steps\n";
    os << "validity T'     " << format_real(t.validity_horizon) << "\n";
    if (auto te = t.extinction_time()) os << "extinction time " << format_real(*te) << "\n";
    if (t.saturation_step) os << "saturation step " << *t.saturation_step << "\n";
    if (r.failure) os << "failure         " << *r.failure << "\n";
    if (r.pair) os << "comparison L    " << format_real(r.pair->L) << "\n";
    if (!r.monitors.empty() || !r.comparison.empty()) {
        os << "\n";
        for (const auto& m : r.monitors) report_line(os, m);
        for (const auto& m : r.comparison) report_line(os, m);
        os << "\n" << r.violations() << " violation(s) in " << r.monitors.size() + r.comparison.size()
           << " checks\n";
    }
    return os.str();
}

std::filesystem::path output_root() {
    if (const char* env = std::getenv("DNP_OUTPUT_DIR"); env && *env) return env;
    return "out";
}

std::filesystem::path output_directory(const ScenarioConfig& cfg, const std::filesystem::path& root) {
    return root / (cfg.output.directory.empty() ? cfg.output.name : cfg.output.directory);
}

void emit_report(const RunResult& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    const auto& t = r.trajectory;
    const int steps = t.steps();
    const std::vector<double> energy = flux_energy_history(t);

    {
        const auto p = dir / "report.txt";
        auto out = open_file(p);
        out << render_report(r);
        check_written(out, p);
    }
    {
        const auto p = dir / "config.ini";
        auto out = open_file(p);
        out << serialize_scenario(r.config);
        check_written(out, p);
    }
    {
        const auto p = dir / "summary.csv";
        auto out = open_file(p);
        const auto id = interpolant_identity(t);
        int passed = 0;
        for (const auto& m : r.monitors) passed += m.passed();
        for (const auto& m : r.comparison) passed += m.passed();
        out << "key,value\n";
        out << "scenario," << r.config.output.name << "\n";
        out << "status," << to_string(t.status) << "\n";
        out << "solver_failure," << (r.failure ? "true" : "false") << "\n";
        out << "steps," << steps << "\n";
        out << "T," << format_real(t.T) << "\n";
        out << "N," << t.N << "\n";
        out << "tau," << format_real(t.tau) << "\n";
        out << "h," << format_real(t.grid.spacing(0)) << "\n";
        out << "M," << format_real(t.M) << "\n";
        out << "validity_horizon," << format_real(t.validity_horizon) << "\n";
        out << "extinction_time," << opt(t.extinction_time()) << "\n";
        out << "saturation_step," << opt(t.saturation_step) << "\n";
        out << "failure_step," << opt(t.failure_step) << "\n";
        out << "checks_passed," << passed << "\n";
        out << "checks_failed," << r.monitors.size() + r.comparison.size() - passed << "\n";
        out << "violations," << r.violations() << "\n";
        out << "cumulative_gradient_energy," << format_real(cumulative_gradient_energy(t)) << "\n";
        out << "max_conjugate_energy," << format_real(max_conjugate_energy(t)) << "\n";
        out << "interpolant_distance_integral," << format_real(id.integral) << "\n";
        out << "interpolant_distance_closed_form," << format_real(id.closed_form) << "\n";
        double max_res = 0.0;
        int max_it = 0;
        for (int n = 0; n < steps; ++n) {
            max_res = std::max(max_res, t.residuals[n]);
            max_it = std::max(max_it, t.iterations[n]);
        }
        out << "max_residual," << format_real(max_res) << "\n";
        out << "max_iterations," << max_it << "\n";
        for (const auto* group : {&r.monitors, &r.comparison})
            for (const auto& m : *group) {
                out << m.name << ".violations," << m.violations << "\n";
                out << m.name << ".worst_slack," << format_real(m.worst_slack) << "\n";
                for (const auto& [k, v] : m.summary) out << m.name << "." << k << "," << format_real(v) << "\n";
            }
        if (r.pair) out << "comparison.L," << format_real(r.pair->L) << "\n";
        check_written(out, p);
    }
    {
        const auto p = dir / "monitor.csv";
        auto out = open_file(p);
        std::vector<const MonitorReport*> cols;
        for (const auto& m : r.monitors)
            if (per_step(m, steps)) cols.push_back(&m);
        out << "step,time,linf_u,linf_beta,flux_energy,iterations,residual";
        for (const auto* m : cols) out << ",slack_" << m->name;
        out << "\n";
        std::vector<std::vector<std::optional<double>>> series;
        for (const auto* m : cols) series.push_back(aligned(*m, steps));
        for (int n = 0; n <= steps; ++n) {
            out << n << "," << format_real(t.time(n)) << ","
                << format_real(t.u[n].values.cwiseAbs().maxCoeff()) << ","
                << format_real(t.beta_u[n].values.cwiseAbs().maxCoeff()) << "," << format_real(energy[n]) << ",";
            if (n > 0) out << t.iterations[n - 1] << "," << format_real(t.residuals[n - 1]);
            else out << ",";
            for (const auto& s : series) out << "," << opt(s[n]);
            out << "\n";
        }
        check_written(out, p);
    }
    for (std::size_t k = 0; k < r.config.output.snapshots.size(); ++k) {
        const double time = r.config.output.snapshots[k];
        if (time > t.final_time() + 1e-12 * std::max(1.0, t.T)) continue;
        const auto p = dir / ("snapshot_" + std::to_string(k) + ".csv");
        auto out = open_file(p);
        out << "# t = " << format_real(time) << "\n";
        out << (t.grid.dimension() == 2 ? "x,y,u\n" : "x,u\n");
        write_field_csv(out, interpolant_pl(t, std::min(time, t.final_time())));
        check_written(out, p);
    }
    if (r.config.output.curves) {
        const auto p = dir / "curves.dat";
        auto out = open_file(p);
        out << "# t linf_u linf_beta flux_energy\n";
        for (int n = 0; n <= steps; ++n)
            out << format_real(t.time(n)) << " " << format_real(t.u[n].values.cwiseAbs().maxCoeff()) << " "
                << format_real(t.beta_u[n].values.cwiseAbs().maxCoeff()) << " " << format_real(energy[n]) << "\n";
        check_written(out, p);
    }
    if (r.pair) {
        const auto& cr = *r.pair;
        const auto p = dir / "comparison.csv";
        auto out = open_file(p);
        const MonitorReport* gron = nullptr;
        const MonitorReport* pos = nullptr;
        for (const auto& m : r.comparison) {
            if (m.name == "gronwall_l1") gron = &m;
            if (m.name == "positive_part") pos = &m;
        }
        out << "step,time,l1_distance,gronwall_bound,slack,positive_part_distance,positive_part_bound,"
               "positive_part_slack,ordering_violations\n";
        for (int n = 0; n <= cr.steps(); ++n) {
            out << n << "," << format_real(n * cr.first.tau) << "," << format_real(cr.l1_distance[n]) << ",";
            if (gron) out << format_real(gron->slack[n] + cr.l1_distance[n]) << "," << format_real(gron->slack[n]);
            else out << ",";
            out << "," << format_real(cr.positive_distance[n]) << ",";
            if (pos) out << format_real(pos->slack[n] + cr.positive_distance[n]) << "," << format_real(pos->slack[n]);
            else out << ",";
            out << "," << cr.ordering_violations[n] << "\n";
        }
        check_written(out, p);
    }
    {
        const auto p = dir / "metadata.txt";
        auto out = open_file(p);
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        out << "created " << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << "\n";
        out << "tool dnp 0.1.0\n";
        out << "scenario " << r.config.output.name << "\n";
        out << "exit_code " << r.exit_code() << "\n";
        check_written(out, p);
    }
}

std::string render_study(const StudyResult& s) {
    auto sci = [](const std::optional<double>& v) {
        if (!v) return std::string("-");
        std::ostringstream os;
        os << std::scientific << std::setprecision(6) << *v;
        return os.str();
    };
    auto fixed = [](const std::optional<double>& v) {
        if (!v) return std::string("undefined");
        std::ostringstream os;
        os << std::fixed << std::setprecision(4) << *v;
        return os.str();
    };
    std::ostringstream os;
    os << "refinement study (" << to_string(s.target) << "), " << s.rows.size() << " levels\n\n";
    os << "level           tau             h      status      difference      extinction  monitors\n";
    for (const auto& r : s.rows)
        os << std::setw(5) << r.level << "  " << std::setw(12) << sci(r.tau) << "  " << std::setw(12) << sci(r.h)
           << "  " << std::setw(10) << r.status << "  " << std::setw(14) << sci(r.successive_difference) << "  "
           << std::setw(14) << sci(r.extinction_time) << "  " << r.monitors_passed << "/"
           << r.monitors_passed + r.monitors_failed << "\n";
    os << "\nobserved orders:";
    if (s.orders.empty()) os << " none";
    for (const auto& o : s.orders) os << " " << fixed(o);
    os << "\n";
    if (!s.analytic_orders.empty()) {
        os << "orders against the analytic eigenmode solution:";
        for (const auto& o : s.analytic_orders) os << " " << fixed(o);
        os << "\n";
    }
    return os.str();
}

void emit_study(const StudyResult& s, const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    {
        const auto p = dir / "study.csv";
        auto out = open_file(p);
        out << "level,N,cells,tau,h,status,validity_horizon,extinction_time,saturation_step,monitors_passed,"
               "monitors_failed,cumulative_gradient_energy,max_conjugate_energy,successive_difference,order,"
               "analytic_error,analytic_order\n";
        for (std::size_t k = 0; k < s.rows.size(); ++k) {
            const auto& r = s.rows[k];
            out << r.level << "," << r.N << "," << r.cells << "," << format_real(r.tau) << "," << format_real(r.h)
                << "," << r.status << "," << format_real(r.validity_horizon) << "," << opt(r.extinction_time) << ","
                << opt(r.saturation_step) << "," << r.monitors_passed << "," << r.monitors_failed << ","
                << format_real(r.cumulative_gradient_energy) << "," << format_real(r.max_conjugate_energy) << ","
                << opt(r.successive_difference) << "," << (k < s.orders.size() ? opt(s.orders[k]) : "") << ","
                << opt(r.analytic_error) << ","
                << (k < s.analytic_orders.size() ? opt(s.analytic_orders[k]) : "") << "\n";
        }
        check_written(out, p);
    }
    {
        const auto p = dir / "study.txt";
        auto out = open_file(p);
        out << "scenario " << cfg.output.name << "\n" << render_study(s);
        check_written(out, p);
    }
}

}  // namespace dnp
