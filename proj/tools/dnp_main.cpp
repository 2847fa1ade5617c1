#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "dnp/errors.hpp"
#include "dnp/report.hpp"

using namespace dnp;

namespace {

struct Source {
    std::string config;
    std::string preset;
    std::string output;
};

void add_source(CLI::App* cmd, Source& s) {
    cmd->add_option("config", s.config, "scenario file");
    cmd->add_option("--preset", s.preset, "use a shipped preset instead of a file");
    cmd->add_option("-o,--output", s.output, "output root (default $DNP_OUTPUT_DIR or ./out)");
}

ScenarioConfig load(const Source& s) {
    if (!s.preset.empty() && !s.config.empty()) throw ConfigError("give either a config file or --preset, not both");
    if (!s.preset.empty()) return preset(s.preset);
    if (s.config.empty()) throw ConfigError("missing config file (or --preset NAME)");
    return load_scenario(s.config);
}

std::filesystem::path root(const Source& s) { return s.output.empty() ? output_root() : std::filesystem::path(s.output); }

int run(const Source& s, bool require_pair) {
    const ScenarioConfig cfg = load(s);
    if (require_pair && !cfg.has_pair())
        throw ConfigError("compare needs an [initial2] or [forcing2] section");
    const RunResult r = run_scenario(cfg);
    const auto dir = output_directory(cfg, root(s));
    emit_report(r, dir);
    std::cout << render_report(r) << "\nwritten to " << dir.string() << "\n";
    return r.exit_code();
}

int study(const Source& s, int levels, const std::string& target) {
    const ScenarioConfig cfg = load(s);
    if (target != "time" && target != "space") throw ConfigError("--target must be time or space");
    const StudyTarget t = target == "time" ? StudyTarget::time : StudyTarget::space;
    const auto dir = output_directory(cfg, root(s)) / ("study-" + target);
    try {
        const StudyResult res = refinement_study(cfg, levels, t);
        emit_study(res, cfg, dir);
        std::cout << render_study(res) << "\nwritten to " << dir.string() << "\n";
        for (const auto& row : res.rows)
            if (row.monitors_failed > 0) return exit_violation;
        return exit_ok;
    } catch (const StudyError& e) {
        emit_study(e.partial(), cfg, dir);
        std::cerr << "error: " << e.what() << "\n" << render_study(e.partial());
        return exit_solver_failure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Implicit Euler solver for doubly nonlinear parabolic equations"};
    app.require_subcommand(1);

    Source run_src, study_src, compare_src;
    auto* run_cmd = app.add_subcommand("run", "run a scenario and write its report");
    add_source(run_cmd, run_src);

    auto* study_cmd = app.add_subcommand("study", "refinement study in time or space");
    add_source(study_cmd, study_src);
    int levels = 4;
    std::string target = "time";
    study_cmd->add_option("--levels", levels, "number of refinement levels (>= 3)");
    study_cmd->add_option("--target", target, "time | space");

    auto* compare_cmd = app.add_subcommand("compare", "run a comparison pair");
    add_source(compare_cmd, compare_src);

    auto* presets_cmd = app.add_subcommand("presets", "list, show or write shipped presets");
    presets_cmd->require_subcommand(1);
    presets_cmd->add_subcommand("list", "list preset names");
    std::string show_name, write_name, write_path;
    auto* show = presets_cmd->add_subcommand("show", "print a preset");
    show->add_option("name", show_name)->required();
    auto* write = presets_cmd->add_subcommand("write", "write a preset to a file");
    write->add_option("name", write_name)->required();
    write->add_option("path", write_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        if (*run_cmd) return run(run_src, false);
        if (*compare_cmd) return run(compare_src, true);
        if (*study_cmd) return study(study_src, levels, target);
        if (*presets_cmd) {
            if (presets_cmd->got_subcommand("list")) {
                for (const auto& n : preset_names()) std::cout << n << "\n";
            } else if (*show) {
                std::cout << preset_text(show_name);
            } else if (*write) {
                const std::string text = preset_text(write_name);
                std::ofstream out(write_path);
                if (!(out << text)) throw Error("cannot write " + write_path);
            }
            return exit_ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return exit_config_error;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return exit_solver_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    }
    return exit_ok;
}
