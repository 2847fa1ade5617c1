#include "dnp/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "dnp/errors.hpp"
#include "dnp/numerics.hpp"

namespace dnp {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"domain", {"dimension", "extent", "cells"}},
        {"time", {"T", "N"}},
        {"graph", {"kind", "q"}},
        {"flux", {"kind", "p", "weights", "epsilon"}},
        {"source", {"kind", "lambda", "r", "monotone", "M"}},
        {"forcing", {"kind", "amplitude", "frequency"}},
        {"forcing2", {"kind", "amplitude", "frequency"}},
        {"initial", {"kind", "amplitude", "mode", "center", "width", "values"}},
        {"initial2", {"kind", "amplitude", "mode", "center", "width", "values"}},
        {"mode", {"theorems"}},
        {"monitors",
         {"linf", "energy", "dissipation", "lyapunov", "fenchel", "beta_gradient", "linf_tolerance",
          "chain_tolerance"}},
        {"solver", {"tol", "max_iterations", "continuation", "extinction_threshold"}},
        {"output", {"name", "directory", "snapshots", "curves"}},
    };
    return s;
}

class Reader {
public:
    Reader(std::map<std::string, Section>& sections, std::string origin)
        : sections_(sections), origin_(std::move(origin)) {}

    bool has(const std::string& sec) const { return sections_.count(sec) > 0; }

    const Entry* find(const std::string& sec, const std::string& key) {
        auto s = sections_.find(sec);
        if (s == sections_.end()) return nullptr;
        auto e = s->second.entries.find(key);
        if (e == s->second.entries.end()) return nullptr;
        e->second.used = true;
        return &e->second;
    }

    [[noreturn]] void fail(const std::string& sec, const std::string& key, const Entry& e,
                           const std::string& what) const {
        std::ostringstream msg;
        msg << origin_ << ":" << e.line << ": " << sec << "." << key << ": " << what << " (got '" << e.value
            << "')";
        throw ConfigError(msg.str());
    }

    double number(const std::string& sec, const std::string& key, const Entry& e, const std::string& text) {
        double v = 0.0;
        const char* b = text.data();
        const char* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(b, end, v);
        if (ec != std::errc() || ptr != end) fail(sec, key, e, "expected a number");
        return v;
    }

    void real(const std::string& sec, const std::string& key, double& out) {
        if (const Entry* e = find(sec, key)) out = number(sec, key, *e, e->value);
    }

    void real(const std::string& sec, const std::string& key, std::optional<double>& out) {
        if (const Entry* e = find(sec, key)) out = number(sec, key, *e, e->value);
    }

    void integer(const std::string& sec, const std::string& key, int& out) {
        if (const Entry* e = find(sec, key)) {
            int v = 0;
            const char* end = e->value.data() + e->value.size();
            auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
            if (ec != std::errc() || ptr != end) fail(sec, key, *e, "expected an integer");
            out = v;
        }
    }

    bool parse_bool(const std::string& sec, const std::string& key, const Entry& e) {
        const std::string v = lower(e.value);
        if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "off" || v == "no" || v == "0") return false;
        fail(sec, key, e, "expected true or false");
    }

    void boolean(const std::string& sec, const std::string& key, bool& out) {
        if (const Entry* e = find(sec, key)) out = parse_bool(sec, key, *e);
    }

    void boolean(const std::string& sec, const std::string& key, std::optional<bool>& out) {
        if (const Entry* e = find(sec, key)) out = parse_bool(sec, key, *e);
    }

    void reals(const std::string& sec, const std::string& key, std::vector<double>& out) {
        if (const Entry* e = find(sec, key)) {
            out.clear();
            for (const auto& item : split_list(e->value)) out.push_back(number(sec, key, *e, item));
        }
    }

    void text(const std::string& sec, const std::string& key, std::string& out) {
        if (const Entry* e = find(sec, key)) out = e->value;
    }

    template <class Enum>
    void choice(const std::string& sec, const std::string& key, Enum& out,
                const std::vector<std::pair<std::string, Enum>>& options) {
        const Entry* e = find(sec, key);
        if (!e) return;
        for (const auto& [name, value] : options) {
            if (lower(e->value) == name) {
                out = value;
                return;
            }
        }
        std::string list;
        for (const auto& [name, value] : options) list += (list.empty() ? "" : " | ") + name;
        fail(sec, key, *e, "expected one of " + list);
    }

    void check_unused() const {
        for (const auto& [sec, section] : sections_)
            for (const auto& [key, e] : section.entries)
                if (!e.used) {
                    std::ostringstream msg;
                    msg << origin_ << ":" << e.line << ": " << sec << "." << key << ": unknown key";
                    throw ConfigError(msg.str());
                }
    }

private:
    std::map<std::string, Section>& sections_;
    std::string origin_;
};

const std::vector<std::pair<std::string, InitialKind>> kInitialKinds{
    {"eigenmode", InitialKind::eigenmode},
    {"bump", InitialKind::bump},
    {"constant", InitialKind::constant},
    {"custom", InitialKind::custom}};

const std::vector<std::pair<std::string, ForcingKind>> kForcingKinds{
    {"zero", ForcingKind::zero},
    {"constant", ForcingKind::constant},
    {"time_linear", ForcingKind::time_linear},
    {"time_sine", ForcingKind::time_sine},
    {"eigenmode", ForcingKind::eigenmode}};

const std::vector<std::pair<std::string, Toggle>> kToggles{
    {"auto", Toggle::automatic}, {"on", Toggle::on}, {"off", Toggle::off}};

void read_initial(Reader& rd, const std::string& sec, InitialSpec& s) {
    rd.choice(sec, "kind", s.kind, kInitialKinds);
    rd.real(sec, "amplitude", s.amplitude);
    rd.integer(sec, "mode", s.mode);
    std::vector<double> c;
    rd.reals(sec, "center", c);
    if (!c.empty()) {
        if (c.size() > 2) throw ConfigError(sec + ".center: expected one or two coordinates");
        s.center = {c[0], c.size() > 1 ? c[1] : c[0]};
    }
    rd.real(sec, "width", s.width);
    rd.reals(sec, "values", s.values);
}

void read_forcing(Reader& rd, const std::string& sec, ForcingSpec& s) {
    rd.choice(sec, "kind", s.kind, kForcingKinds);
    rd.real(sec, "amplitude", s.amplitude);
    rd.real(sec, "frequency", s.frequency);
}

std::string toggle_name(Toggle t) {
    switch (t) {
        case Toggle::automatic: return "auto";
        case Toggle::on: return "on";
        case Toggle::off: return "off";
    }
    return "auto";
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (double x : v) out += (out.empty() ? "" : ", ") + format_real(x);
    return out;
}

void write_initial(std::ostream& os, const std::string& sec, const InitialSpec& s) {
    os << "\n[" << sec << "]\n";
    os << "kind = " << to_string(s.kind) << "\n";
    os << "amplitude = " << format_real(s.amplitude) << "\n";
    os << "mode = " << s.mode << "\n";
    os << "center = " << format_real(s.center[0]) << ", " << format_real(s.center[1]) << "\n";
    os << "width = " << format_real(s.width) << "\n";
    if (!s.values.empty()) os << "values = " << join(s.values) << "\n";
}

void write_forcing(std::ostream& os, const std::string& sec, const ForcingSpec& s) {
    os << "\n[" << sec << "]\n";
    os << "kind = " << to_string(s.kind) << "\n";
    os << "amplitude = " << format_real(s.amplitude) << "\n";
    os << "frequency = " << format_real(s.frequency) << "\n";
}

[[noreturn]] void invalid(const std::string& key, const std::string& what) {
    throw ConfigError(key + ": " + what);
}

void validate_initial(const std::string& sec, const InitialSpec& s, const Grid& grid) {
    if (!std::isfinite(s.amplitude)) invalid(sec + ".amplitude", "must be finite");
    if (s.kind == InitialKind::eigenmode && s.mode < 1) invalid(sec + ".mode", "must be a positive integer");
    if (s.kind == InitialKind::bump && !(s.width > 0.0)) invalid(sec + ".width", "must be positive");
    if (s.kind == InitialKind::custom && static_cast<int>(s.values.size()) != grid.node_count()) {
        std::ostringstream msg;
        msg << "needs one value per interior node (" << grid.node_count() << "), got " << s.values.size();
        invalid(sec + ".values", msg.str());
    }
}

double eigenmode(const Grid& grid, int mode, const Vec2& x) {
    double v = std::sin(mode * std::numbers::pi * x[0] / grid.extent(0));
    if (grid.dimension() == 2) v *= std::sin(mode * std::numbers::pi * x[1] / grid.extent(1));
    return v;
}

}  // namespace

std::string to_string(InitialKind kind) {
    for (const auto& [name, value] : kInitialKinds)
        if (value == kind) return name;
    return "eigenmode";
}

std::string to_string(ForcingKind kind) {
    for (const auto& [name, value] : kForcingKinds)
        if (value == kind) return name;
    return "zero";
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
    std::map<std::string, Section> sections;
    std::istringstream in(text);
    std::string raw;
    std::string current;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        std::ostringstream msg;
        msg << origin << ":" << line_no << ": " << what;
        throw ConfigError(msg.str());
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header '" + line + "'");
            current = trim(line.substr(1, line.size() - 2));
            if (!schema().count(current)) fail("unknown section [" + current + "]");
            if (sections.count(current)) fail("duplicate section [" + current + "]");
            sections[current].line = line_no;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (current.empty()) fail("key '" + key + "' appears before any section");
        if (!schema().at(current).count(key)) fail(current + "." + key + ": unknown key");
        if (value.empty()) fail(current + "." + key + ": missing value");
        auto& entries = sections[current].entries;
        if (entries.count(key)) fail(current + "." + key + ": duplicate key");
        entries[key] = Entry{value, line_no, false};
    }

    ScenarioConfig c;
    Reader rd(sections, origin);

    rd.integer("domain", "dimension", c.dimension);
    std::vector<double> ext;
    rd.reals("domain", "extent", ext);
    if (ext.size() == 1) c.extent = {ext[0], ext[0]};
    if (ext.size() >= 2) c.extent = {ext[0], ext[1]};
    if (ext.size() > 2) throw ConfigError(origin + ": domain.extent: expected one or two values");
    std::vector<double> cells;
    rd.reals("domain", "cells", cells);
    for (double v : cells)
        if (v != std::floor(v)) throw ConfigError(origin + ": domain.cells: expected integers");
    if (cells.size() == 1) c.cells = {static_cast<int>(cells[0]), static_cast<int>(cells[0])};
    if (cells.size() >= 2) c.cells = {static_cast<int>(cells[0]), static_cast<int>(cells[1])};
    if (cells.size() > 2) throw ConfigError(origin + ": domain.cells: expected one or two values");

    rd.real("time", "T", c.T);
    rd.integer("time", "N", c.N);

    rd.choice("graph", "kind", c.graph.kind,
              std::vector<std::pair<std::string, GraphKind>>{{"power", GraphKind::power},
                                                             {"tan", GraphKind::tan},
                                                             {"log1p", GraphKind::log1p},
                                                             {"rational", GraphKind::rational}});
    rd.real("graph", "q", c.graph.q);

    std::string flux_kind = "p_laplacian";
    rd.text("flux", "kind", flux_kind);
    if (flux_kind != "p_laplacian" && flux_kind != "sum")
        throw ConfigError(origin + ": flux.kind: expected p_laplacian | sum (got '" + flux_kind + "')");
    std::vector<double> ps, ws;
    rd.reals("flux", "p", ps);
    rd.reals("flux", "weights", ws);
    if (!ps.empty()) {
        if (!ws.empty() && ws.size() != ps.size())
            throw ConfigError(origin + ": flux.weights: needs one weight per exponent in flux.p");
        if (flux_kind == "p_laplacian" && ps.size() != 1)
            throw ConfigError(origin + ": flux.p: p_laplacian takes one exponent; use kind = sum");
        c.flux.terms.clear();
        for (std::size_t i = 0; i < ps.size(); ++i) c.flux.terms.push_back({ps[i], ws.empty() ? 1.0 : ws[i]});
    }
    rd.real("flux", "epsilon", c.flux.epsilon);

    rd.choice("source", "kind", c.source.descriptor.kind,
              std::vector<std::pair<std::string, SourceKind>>{{"zero", SourceKind::zero},
                                                              {"linear", SourceKind::linear},
                                                              {"power", SourceKind::power},
                                                              {"square", SourceKind::square},
                                                              {"sine", SourceKind::sine},
                                                              {"neg_cubic", SourceKind::neg_cubic}});
    rd.real("source", "lambda", c.source.descriptor.lambda);
    rd.real("source", "r", c.source.descriptor.r);
    rd.boolean("source", "monotone", c.source.monotone);
    rd.real("source", "M", c.source.M);

    read_forcing(rd, "forcing", c.forcing);
    read_initial(rd, "initial", c.initial);
    if (rd.has("initial2")) {
        c.initial2 = c.initial;
        read_initial(rd, "initial2", *c.initial2);
    }
    if (rd.has("forcing2")) {
        c.forcing2 = c.forcing;
        read_forcing(rd, "forcing2", *c.forcing2);
    }

    if (const Entry* e = rd.find("mode", "theorems")) {
        for (const auto& t : split_list(e->value)) {
            const std::string m = lower(t);
            if (m == "th1") c.modes.th1 = true;
            else if (m == "th2") c.modes.th2 = true;
            else if (m == "th3") c.modes.th3 = true;
            else rd.fail("mode", "theorems", *e, "expected a list drawn from Th1, Th2, Th3");
        }
    }

    rd.choice("monitors", "linf", c.monitors.linf, kToggles);
    rd.choice("monitors", "energy", c.monitors.energy, kToggles);
    rd.choice("monitors", "dissipation", c.monitors.dissipation, kToggles);
    rd.choice("monitors", "lyapunov", c.monitors.lyapunov, kToggles);
    rd.choice("monitors", "fenchel", c.monitors.fenchel, kToggles);
    rd.choice("monitors", "beta_gradient", c.monitors.beta_gradient, kToggles);
    rd.real("monitors", "linf_tolerance", c.monitors.linf_tolerance);
    rd.real("monitors", "chain_tolerance", c.monitors.chain_tolerance);

    rd.real("solver", "tol", c.solver.tol);
    rd.integer("solver", "max_iterations", c.solver.max_iterations);
    rd.boolean("solver", "continuation", c.solver.continuation);
    rd.real("solver", "extinction_threshold", c.solver.extinction_threshold);

    rd.text("output", "name", c.output.name);
    rd.text("output", "directory", c.output.directory);
    rd.reals("output", "snapshots", c.output.snapshots);
    rd.boolean("output", "curves", c.output.curves);

    rd.check_unused();
    validate_scenario(c);
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

std::string serialize_scenario(const ScenarioConfig& c) {
    std::ostringstream os;
    os << "[domain]\n";
    os << "dimension = " << c.dimension << "\n";
    os << "extent = " << format_real(c.extent[0]) << ", " << format_real(c.extent[1]) << "\n";
    os << "cells = " << c.cells[0] << ", " << c.cells[1] << "\n";

    os << "\n[time]\n";
    os << "T = " << format_real(c.T) << "\n";
    os << "N = " << c.N << "\n";

    os << "\n[graph]\n";
    os << "kind = " << to_string(c.graph.kind) << "\n";
    os << "q = " << format_real(c.graph.q) << "\n";

    os << "\n[flux]\n";
    os << "kind = " << (c.flux.terms.size() == 1 ? "p_laplacian" : "sum") << "\n";
    std::vector<double> ps, ws;
    for (const auto& t : c.flux.terms) {
        ps.push_back(t.p);
        ws.push_back(t.weight);
    }
    os << "p = " << join(ps) << "\n";
    os << "weights = " << join(ws) << "\n";
    os << "epsilon = " << format_real(c.flux.epsilon) << "\n";

    os << "\n[source]\n";
    os << "kind = " << to_string(c.source.descriptor.kind) << "\n";
    os << "lambda = " << format_real(c.source.descriptor.lambda) << "\n";
    os << "r = " << format_real(c.source.descriptor.r) << "\n";
    if (c.source.monotone) os << "monotone = " << (*c.source.monotone ? "true" : "false") << "\n";
    if (c.source.M) os << "M = " << format_real(*c.source.M) << "\n";

    write_forcing(os, "forcing", c.forcing);
    write_initial(os, "initial", c.initial);
    if (c.initial2) write_initial(os, "initial2", *c.initial2);
    if (c.forcing2) write_forcing(os, "forcing2", *c.forcing2);

    os << "\n[mode]\n";
    std::vector<std::string> th;
    if (c.modes.th1) th.push_back("Th1");
    if (c.modes.th2) th.push_back("Th2");
    if (c.modes.th3) th.push_back("Th3");
    os << "theorems = ";
    for (std::size_t i = 0; i < th.size(); ++i) os << (i ? ", " : "") << th[i];
    os << "\n";

    os << "\n[monitors]\n";
    os << "linf = " << toggle_name(c.monitors.linf) << "\n";
    os << "energy = " << toggle_name(c.monitors.energy) << "\n";
    os << "dissipation = " << toggle_name(c.monitors.dissipation) << "\n";
    os << "lyapunov = " << toggle_name(c.monitors.lyapunov) << "\n";
    os << "fenchel = " << toggle_name(c.monitors.fenchel) << "\n";
    os << "beta_gradient = " << toggle_name(c.monitors.beta_gradient) << "\n";
    os << "linf_tolerance = " << format_real(c.monitors.linf_tolerance) << "\n";
    os << "chain_tolerance = " << format_real(c.monitors.chain_tolerance) << "\n";

    os << "\n[solver]\n";
    os << "tol = " << format_real(c.solver.tol) << "\n";
    os << "max_iterations = " << c.solver.max_iterations << "\n";
    os << "continuation = " << (c.solver.continuation ? "true" : "false") << "\n";
    os << "extinction_threshold = " << format_real(c.solver.extinction_threshold) << "\n";

    os << "\n[output]\n";
    os << "name = " << c.output.name << "\n";
    if (!c.output.directory.empty()) os << "directory = " << c.output.directory << "\n";
    if (!c.output.snapshots.empty()) os << "snapshots = " << join(c.output.snapshots) << "\n";
    os << "curves = " << (c.output.curves ? "true" : "false") << "\n";
    return os.str();
}

void validate_scenario(const ScenarioConfig& c) {
    if (c.dimension != 1 && c.dimension != 2) invalid("domain.dimension", "must be 1 or 2");
    for (int d = 0; d < c.dimension; ++d) {
        if (!(c.extent[d] > 0.0) || !std::isfinite(c.extent[d])) invalid("domain.extent", "must be positive");
        if (c.cells[d] < 2) invalid("domain.cells", "needs at least 2 cells per axis");
    }
    if (!(c.T > 0.0) || !std::isfinite(c.T)) invalid("time.T", "must be positive");
    if (c.N < 1) invalid("time.N", "must be a positive integer");
    if (c.graph.kind == GraphKind::power && !(c.graph.q > 1.0)) {
        std::ostringstream msg;
        msg << "power graph needs q > 1 (got " << c.graph.q << ")";
        invalid("graph.q", msg.str());
    }
    for (const auto& t : c.flux.terms) {
        if (!(t.p > 1.0)) invalid("flux.p", "every exponent must exceed 1");
        if (!(t.weight > 0.0)) invalid("flux.weights", "every weight must be positive");
    }
    if (!(c.flux.epsilon >= 0.0)) invalid("flux.epsilon", "must be non-negative");
    const bool singular = std::any_of(c.flux.terms.begin(), c.flux.terms.end(),
                                      [](const FluxTerm& t) { return t.p < 2.0; });
    if (singular && !(c.flux.epsilon > 0.0)) invalid("flux.epsilon", "must be positive when some p < 2");
    const auto& sd = c.source.descriptor;
    if (!std::isfinite(sd.lambda)) invalid("source.lambda", "must be finite");
    if (sd.kind == SourceKind::power && !(sd.r > 1.0)) invalid("source.r", "power source needs r > 1");
    if (c.source.M && !(*c.source.M > 0.0)) invalid("source.M", "must be positive");
    if (c.source.monotone && *c.source.monotone && !SourceLaw::from_descriptor(sd).monotone())
        invalid("source.monotone", "the configured F is not monotone");
    if (c.modes.empty()) invalid("mode.theorems", "name at least one of Th1, Th2, Th3");
    if (!(c.monitors.linf_tolerance >= 0.0)) invalid("monitors.linf_tolerance", "must be non-negative");
    if (!(c.monitors.chain_tolerance >= 0.0)) invalid("monitors.chain_tolerance", "must be non-negative");
    if (!(c.solver.tol > 0.0)) invalid("solver.tol", "must be positive");
    if (c.solver.max_iterations < 1) invalid("solver.max_iterations", "must be positive");
    if (!(c.solver.extinction_threshold >= 0.0)) invalid("solver.extinction_threshold", "must be non-negative");
    if (c.output.name.empty() || c.output.name.find('/') != std::string::npos)
        invalid("output.name", "must be a plain file name");
    for (double t : c.output.snapshots)
        if (!(t >= 0.0 && t <= c.T)) invalid("output.snapshots", "times must lie in [0, T]");

    const Grid grid = scenario_grid(c);
    validate_initial("initial", c.initial, grid);
    if (c.initial2) validate_initial("initial2", *c.initial2, grid);

    // the evolution-level checks (mode hypotheses, domain of beta)
    try {
        validate(build_evolution(c));
        if (c.initial2) {
            auto second = build_evolution(c);
            second.u0 = initial_field(*c.initial2, grid);
            if (c.forcing2) second.forcing = forcing_function(*c.forcing2, grid);
            validate(second);
        }
    } catch (const ConfigError& e) {
        invalid("mode.theorems", e.what());
    } catch (const DomainError& e) {
        invalid(c.initial2 ? "initial/initial2" : "initial", e.what());
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("invalid parameter: ") + e.what());
    }
}

Grid scenario_grid(const ScenarioConfig& c) {
    if (c.dimension == 2) return Grid::box(c.extent[0], c.extent[1], c.cells[0], c.cells[1]);
    return Grid::line(c.extent[0], c.cells[0]);
}

GridField initial_field(const InitialSpec& s, const Grid& grid) {
    switch (s.kind) {
        case InitialKind::eigenmode:
            return sample_field(grid, [&](const Vec2& x) { return s.amplitude * eigenmode(grid, s.mode, x); });
        case InitialKind::bump:
            return sample_field(grid, [&](const Vec2& x) {
                double r2 = std::pow(x[0] - s.center[0], 2);
                if (grid.dimension() == 2) r2 += std::pow(x[1] - s.center[1], 2);
                const double v = 1.0 - r2 / (s.width * s.width);
                return v > 0.0 ? s.amplitude * v : 0.0;
            });
        case InitialKind::constant:
            return GridField(grid, Eigen::VectorXd::Constant(grid.node_count(), s.amplitude));
        case InitialKind::custom: {
            if (static_cast<int>(s.values.size()) != grid.node_count())
                throw ConfigError("custom initial datum needs one value per interior node");
            Eigen::VectorXd v(grid.node_count());
            for (int i = 0; i < grid.node_count(); ++i) v[i] = s.values[i];
            return GridField(grid, std::move(v));
        }
    }
    return GridField(grid);
}

Forcing forcing_function(const ForcingSpec& s, const Grid& grid) {
    const double a = s.amplitude;
    const double w = 2.0 * std::numbers::pi * s.frequency;
    if (a == 0.0) return Forcing::zero();
    switch (s.kind) {
        case ForcingKind::zero: return Forcing::zero();
        case ForcingKind::constant: return Forcing{[a](const Vec2&, double) { return a; }};
        case ForcingKind::time_linear: return Forcing{[a](const Vec2&, double t) { return a * t; }};
        case ForcingKind::time_sine:
            return Forcing{[a, w](const Vec2&, double t) { return a * std::sin(w * t); }};
        case ForcingKind::eigenmode:
            return Forcing{[a, grid](const Vec2& x, double) { return a * eigenmode(grid, 1, x); }};
    }
    return Forcing::zero();
}

SourceLaw scenario_source(const ScenarioConfig& c) {
    SourceLaw F = SourceLaw::from_descriptor(c.source.descriptor);
    if (c.source.monotone && !*c.source.monotone) F = F.without_monotone();
    return F;
}

FluxLaw scenario_flux(const ScenarioConfig& c) {
    if (c.flux.terms.size() == 1) return FluxLaw::p_laplacian(c.flux.terms[0].p, c.flux.epsilon);
    return FluxLaw::sum_of_p_laplacians(c.flux.terms, c.flux.epsilon);
}

EvolutionConfig build_evolution(const ScenarioConfig& c) {
    const Grid grid = scenario_grid(c);
    EvolutionConfig e;
    e.graph = make_graph(c.graph);
    e.flux = scenario_flux(c);
    e.source = scenario_source(c);
    e.forcing = forcing_function(c.forcing, grid);
    e.u0 = initial_field(c.initial, grid);
    e.T = c.T;
    e.N = c.N;
    e.modes = c.modes;
    e.monitors = c.monitors;
    e.truncation_override = c.source.M;
    e.step.tol = c.solver.tol;
    e.step.max_iterations = c.solver.max_iterations;
    e.step.continuation = c.solver.continuation;
    e.extinction_threshold = c.solver.extinction_threshold;
    return e;
}

namespace {

const std::vector<std::pair<std::string, std::string>>& presets() {
    static const std::vector<std::pair<std::string, std::string>> p{
        {"heat", R"(# linear heat equation, first eigenmode
[domain]
dimension = 1
extent = 1
cells = 64

[time]
T = 0.1
N = 100

[graph]
kind = power
q = 2

[flux]
p = 2

[initial]
kind = eigenmode
amplitude = 1

[mode]
theorems = Th1, Th3

[output]
name = heat
snapshots = 0, 0.05, 0.1
)"},
        {"porous-medium", R"(# d/dt |u|^{-1/2} u = Laplace u from a compactly supported bump
[domain]
dimension = 1
extent = 1
cells = 64

[time]
T = 0.05
N = 100

[graph]
kind = power
q = 1.5

[flux]
p = 2

[initial]
kind = bump
amplitude = 1
center = 0.5
width = 0.25

[mode]
theorems = Th1, Th3

[output]
name = porous-medium
snapshots = 0, 0.025, 0.05
)"},
        {"fast-diffusion", R"(# singular case p < 2, q > 2: finite-time extinction
[domain]
dimension = 1
extent = 1
cells = 64

[time]
T = 0.01
N = 200

[graph]
kind = power
q = 3

[flux]
p = 1.5
epsilon = 1e-8

[initial]
kind = eigenmode
amplitude = 0.1

[mode]
theorems = Th2, Th3

[output]
name = fast-diffusion
snapshots = 0, 0.0025, 0.005, 0.01
)"},
        {"source", R"(# degenerate diffusion with the monotone reaction F(s) = |s| s
[domain]
dimension = 1
extent = 1
cells = 64

[time]
T = 0.1
N = 100

[graph]
kind = power
q = 2

[flux]
p = 3

[source]
kind = power
lambda = 1
r = 3

[initial]
kind = eigenmode
amplitude = 1

[mode]
theorems = Th1, Th2, Th3

[output]
name = source
snapshots = 0, 0.05, 0.1
)"},
        {"comparison", R"(# ordered pair of bumps under F(s) = s
[domain]
dimension = 1
extent = 1
cells = 64

[time]
T = 0.1
N = 100

[graph]
kind = power
q = 3

[flux]
p = 2

[source]
kind = linear
lambda = 1

[initial]
kind = bump
amplitude = 0.5
center = 0.5
width = 0.3

[initial2]
kind = bump
amplitude = 1
center = 0.5
width = 0.4

[mode]
theorems = Th2, Th3

[output]
name = comparison
)"},
        {"heat-2d", R"(# heat equation on the unit square
[domain]
dimension = 2
extent = 1, 1
cells = 32, 32

[time]
T = 0.05
N = 50

[graph]
kind = power
q = 2

[flux]
p = 2

[initial]
kind = eigenmode
amplitude = 1

[mode]
theorems = Th1, Th3

[output]
name = heat-2d
)"},
    };
    return p;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : presets()) out.push_back(name);
    return out;
}

std::string preset_text(const std::string& name) {
    for (const auto& [n, text] : presets())
        if (n == name) return text;
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (available: " + list + ")");
}

ScenarioConfig preset(const std::string& name) { return parse_scenario(preset_text(name), "preset:" + name); }

}  // namespace dnp
