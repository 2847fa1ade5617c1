#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dnp/evolution.hpp"

namespace dnp {

enum class InitialKind { eigenmode, bump, constant, custom };
enum class ForcingKind { zero, constant, time_linear, time_sine, eigenmode };

std::string to_string(InitialKind kind);
std::string to_string(ForcingKind kind);

/// eigenmode: amplitude * prod_d sin(mode pi x_d / L_d);
/// bump: amplitude * (1 - |x - center|^2 / width^2)_+;
/// constant: amplitude at every interior node; custom: one value per interior node.
struct InitialSpec {
    InitialKind kind = InitialKind::eigenmode;
    double amplitude = 1.0;
    int mode = 1;
    std::array<double, 2> center{0.5, 0.5};
    double width = 0.25;
    std::vector<double> values;

    bool operator==(const InitialSpec&) const = default;
};

/// constant: a; time_linear: a t; time_sine: a sin(2 pi frequency t);
/// eigenmode: a times the first eigenmode, constant in time.
struct ForcingSpec {
    ForcingKind kind = ForcingKind::zero;
    double amplitude = 0.0;
    double frequency = 1.0;

    bool operator==(const ForcingSpec&) const = default;
};

struct FluxSpec {
    std::vector<FluxTerm> terms{{2.0, 1.0}};
    double epsilon = 1e-8;

    bool operator==(const FluxSpec&) const = default;
};

struct SourceSpec {
    SourceDescriptor descriptor;
    std::optional<bool> monotone;  ///< may only switch the monotone flag off
    std::optional<double> M;       ///< truncation level override

    bool operator==(const SourceSpec&) const = default;
};

struct SolverSpec {
    double tol = 1e-9;
    int max_iterations = 200;
    bool continuation = true;
    double extinction_threshold = 1e-10;

    bool operator==(const SolverSpec&) const = default;
};

struct OutputSpec {
    std::string name = "scenario";
    std::string directory;          ///< relative to the output root; defaults to name
    std::vector<double> snapshots;  ///< times at which u is written
    bool curves = true;

    bool operator==(const OutputSpec&) const = default;
};

/// Parsed configuration document. Every field has a default, so a document only
/// needs the keys it changes. See docs/config.md for the grammar.
struct ScenarioConfig {
    int dimension = 1;
    std::array<double, 2> extent{1.0, 1.0};
    std::array<int, 2> cells{64, 64};
    double T = 0.1;
    int N = 100;
    GraphDescriptor graph;
    FluxSpec flux;
    SourceSpec source;
    ForcingSpec forcing;
    InitialSpec initial;
    std::optional<InitialSpec> initial2;
    std::optional<ForcingSpec> forcing2;
    ModeSet modes;
    MonitorToggles monitors;
    SolverSpec solver;
    OutputSpec output;

    bool has_pair() const { return initial2.has_value() || forcing2.has_value(); }
    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses the section/key document; throws ConfigError with origin:line and the
/// offending key on syntax errors, unknown sections or keys, duplicates and bad values.
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin = "<config>");
ScenarioConfig load_scenario(const std::filesystem::path& path);
/// Writes every field, so parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& cfg);

/// Range and consistency checks; ConfigError messages start with section.key.
void validate_scenario(const ScenarioConfig& cfg);

Grid scenario_grid(const ScenarioConfig& cfg);
GridField initial_field(const InitialSpec& spec, const Grid& grid);
Forcing forcing_function(const ForcingSpec& spec, const Grid& grid);
SourceLaw scenario_source(const ScenarioConfig& cfg);
FluxLaw scenario_flux(const ScenarioConfig& cfg);
/// The evolution described by cfg (first initial datum and forcing).
EvolutionConfig build_evolution(const ScenarioConfig& cfg);

std::vector<std::string> preset_names();
/// Preset document text; throws ConfigError for unknown names.
std::string preset_text(const std::string& name);
ScenarioConfig preset(const std::string& name);

}  // namespace dnp
