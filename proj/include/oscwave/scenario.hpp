#pragma once

#include "oscwave/floquet.hpp"
#include "oscwave/modulation.hpp"
#include "oscwave/propagator.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oscwave {

// Declarative scenario description, a strict JSON schema. Unknown keys are
// rejected; every validation error carries the dotted path of the offending
// field. Presets are compiled-in configs, overridable field-by-field.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { TimeDomain, Effective, Floquet, FreeReference };

struct GridConfig {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n = 0;
};

struct PacketConfig {
    double center = 0.0;
    double width = 1.0;
    double carrier = 0.0;
    bool normalize = true;
};

/// Either an analytic Gaussian {type: "gaussian", v0, beta} or a sampled
/// profile loaded from a CSV of x,value rows {type: "sampled", file}.
struct PotentialConfig {
    std::string type = "gaussian";
    double v0 = 0.0;
    double beta = 0.0;
    std::string file;
};

/// Either a named drive family (cosine, one_sided, one_sided_negative,
/// two_tone, none) with omega/amplitude, or an explicit tone list.
struct ModulationConfig {
    std::string family = "none";
    double omega = 0.0;
    std::optional<double> amplitude;  // family default when absent
    std::vector<Tone> tones;          // family == "tones"
};

struct PlanConfig {
    std::optional<double> dt;  // default: resolve the fastest drive period
    double total_time = 0.0;
    std::size_t steps_per_record = 1;
    std::optional<AbsorberSpec> absorber;
};

struct FloquetConfig {
    int m_min = -8;
    int m_max = 8;
    std::optional<double> x_min;  // default: potential-derived window
    std::optional<double> x_max;
    std::size_t n_x = 2001;
    int incident_sign = +1;
    std::string scheme = "numerov";  // or "central_fd2"
};

struct OutputsConfig {
    std::string directory = "out";
    std::set<std::string> which;  // subset of kScalarOutputs
};

inline const std::set<std::string> kScalarOutputs = {
    "norm", "width", "intensity", "invisibility", "final_profile"};

struct ScenarioConfig {
    std::string name = "scenario";
    RunMode mode = RunMode::TimeDomain;
    GridConfig grid;
    PacketConfig packet;
    std::optional<PotentialConfig> potential;
    ModulationConfig modulation;
    PlanConfig plan;
    FloquetConfig floquet;
    OutputsConfig outputs;
};

/// Strict parse; throws ConfigError naming the bad field.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Cross-field validation; every preset passes this before any compute.
void validate(const ScenarioConfig& config);

/// Applies one `dotted.path=value` override (the CLI --set flag).
void apply_override(ScenarioConfig& config, const std::string& assignment);

ModulationSpec make_modulation(const ModulationConfig& config);
PotentialSpec make_potential(const PotentialConfig& config);

/// Resolved config as canonical JSON (sorted keys); embedded in metadata.
std::string config_to_json(const ScenarioConfig& config);

struct PresetInfo {
    std::string name;
    std::string description;
};
std::vector<PresetInfo> preset_catalog();
ScenarioConfig preset(const std::string& name);

struct RunResult {
    int exit_code = 0;  // 0 ok, 3 numerical flag raised
    std::vector<std::string> warnings;
    std::vector<std::string> files_written;
};

/// Executes the configured mode and writes the requested CSVs plus
/// metadata.json into outputs.directory. Output bytes are a pure function
/// of the config; wall-clock time appears only in the metadata file.
RunResult run_scenario(const ScenarioConfig& config);

}  // namespace oscwave
