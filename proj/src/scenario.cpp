#include "oscwave/scenario.hpp"

#include "oscwave/csv.hpp"
#include "oscwave/diagnostics.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace oscwave {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kInvisibilityTol = 1e-6;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known) fail(path + "." + item.key(), "unknown key");
    }
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

RunMode parse_mode(const std::string& text, const std::string& path) {
    if (text == "time_domain") return RunMode::TimeDomain;
    if (text == "effective") return RunMode::Effective;
    if (text == "floquet") return RunMode::Floquet;
    if (text == "free_reference") return RunMode::FreeReference;
    fail(path, "unknown mode '" + text +
                   "' (time_domain, effective, floquet, free_reference)");
}

std::string mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::TimeDomain: return "time_domain";
        case RunMode::Effective: return "effective";
        case RunMode::Floquet: return "floquet";
        case RunMode::FreeReference: return "free_reference";
    }
    return "time_domain";
}

GridConfig parse_grid(const json& j) {
    check_keys(j, "grid", {"x_min", "x_max", "n"});
    GridConfig grid;
    if (j.contains("x_min")) grid.x_min = get_number(j["x_min"], "grid.x_min");
    if (j.contains("x_max")) grid.x_max = get_number(j["x_max"], "grid.x_max");
    if (j.contains("n")) grid.n = get_count(j["n"], "grid.n");
    return grid;
}

PacketConfig parse_packet(const json& j) {
    check_keys(j, "packet", {"center", "width", "carrier", "normalize"});
    PacketConfig packet;
    if (j.contains("center")) packet.center = get_number(j["center"], "packet.center");
    if (j.contains("width")) packet.width = get_number(j["width"], "packet.width");
    if (j.contains("carrier"))
        packet.carrier = get_number(j["carrier"], "packet.carrier");
    if (j.contains("normalize"))
        packet.normalize = get_bool(j["normalize"], "packet.normalize");
    return packet;
}

PotentialConfig parse_potential(const json& j) {
    check_keys(j, "potential", {"type", "v0", "beta", "file"});
    PotentialConfig pot;
    if (j.contains("type")) pot.type = get_string(j["type"], "potential.type");
    if (pot.type != "gaussian" && pot.type != "sampled")
        fail("potential.type", "expected 'gaussian' or 'sampled'");
    if (j.contains("v0")) pot.v0 = get_number(j["v0"], "potential.v0");
    if (j.contains("beta")) pot.beta = get_number(j["beta"], "potential.beta");
    if (j.contains("file")) pot.file = get_string(j["file"], "potential.file");
    if (pot.type == "sampled" && pot.file.empty())
        fail("potential.file", "required for a sampled potential");
    return pot;
}

ModulationConfig parse_modulation(const json& j) {
    check_keys(j, "modulation", {"family", "omega", "amplitude", "tones"});
    ModulationConfig mod;
    if (j.contains("family"))
        mod.family = get_string(j["family"], "modulation.family");
    if (j.contains("omega")) mod.omega = get_number(j["omega"], "modulation.omega");
    if (j.contains("amplitude"))
        mod.amplitude = get_number(j["amplitude"], "modulation.amplitude");
    if (j.contains("tones")) {
        if (!j["tones"].is_array()) fail("modulation.tones", "expected an array");
        std::size_t idx = 0;
        for (const auto& entry : j["tones"]) {
            const std::string path = "modulation.tones[" + std::to_string(idx) + "]";
            if (!entry.is_object()) fail(path, "expected an object");
            check_keys(entry, path, {"re", "im", "frequency"});
            if (!entry.contains("frequency")) fail(path + ".frequency", "required");
            Tone tone{Complex(0.0, 0.0), get_number(entry["frequency"], path + ".frequency")};
            double re = 0.0, im = 0.0;
            if (entry.contains("re")) re = get_number(entry["re"], path + ".re");
            if (entry.contains("im")) im = get_number(entry["im"], path + ".im");
            tone.amplitude = Complex(re, im);
            mod.tones.push_back(tone);
            ++idx;
        }
    }
    return mod;
}

PlanConfig parse_plan(const json& j) {
    check_keys(j, "plan", {"dt", "total_time", "steps_per_record", "absorber"});
    PlanConfig plan;
    if (j.contains("dt")) plan.dt = get_number(j["dt"], "plan.dt");
    if (j.contains("total_time"))
        plan.total_time = get_number(j["total_time"], "plan.total_time");
    if (j.contains("steps_per_record"))
        plan.steps_per_record = get_count(j["steps_per_record"], "plan.steps_per_record");
    if (j.contains("absorber")) {
        const auto& a = j["absorber"];
        check_keys(a, "plan.absorber", {"ramp_width", "strength"});
        AbsorberSpec spec{0.0, 0.0};
        if (a.contains("ramp_width"))
            spec.ramp_width = get_number(a["ramp_width"], "plan.absorber.ramp_width");
        if (a.contains("strength"))
            spec.strength = get_number(a["strength"], "plan.absorber.strength");
        plan.absorber = spec;
    }
    return plan;
}

FloquetConfig parse_floquet(const json& j) {
    check_keys(j, "floquet",
               {"m_min", "m_max", "x_min", "x_max", "n_x", "incident_sign",
                "scheme"});
    FloquetConfig fl;
    if (j.contains("m_min")) fl.m_min = get_int(j["m_min"], "floquet.m_min");
    if (j.contains("m_max")) fl.m_max = get_int(j["m_max"], "floquet.m_max");
    if (j.contains("x_min")) fl.x_min = get_number(j["x_min"], "floquet.x_min");
    if (j.contains("x_max")) fl.x_max = get_number(j["x_max"], "floquet.x_max");
    if (j.contains("n_x")) fl.n_x = get_count(j["n_x"], "floquet.n_x");
    if (j.contains("incident_sign"))
        fl.incident_sign = get_int(j["incident_sign"], "floquet.incident_sign");
    if (j.contains("scheme")) fl.scheme = get_string(j["scheme"], "floquet.scheme");
    return fl;
}

OutputsConfig parse_outputs(const json& j) {
    check_keys(j, "outputs", {"directory", "which"});
    OutputsConfig outputs;
    if (j.contains("directory"))
        outputs.directory = get_string(j["directory"], "outputs.directory");
    if (j.contains("which")) {
        if (!j["which"].is_array()) fail("outputs.which", "expected an array");
        for (const auto& entry : j["which"]) {
            const std::string name = get_string(entry, "outputs.which[]");
            if (!kScalarOutputs.count(name))
                fail("outputs.which", "unknown output '" + name + "'");
            outputs.which.insert(name);
        }
    }
    return outputs;
}

PotentialSpec load_sampled_potential(const std::string& file) {
    std::ifstream in(file);
    if (!in) fail("potential.file", "cannot open " + file);
    std::vector<double> xs, vs;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double x = 0.0, v = 0.0;
        char comma = 0;
        if (!(row >> x >> comma >> v) || comma != ',') {
            if (first) {  // tolerate a header row
                first = false;
                continue;
            }
            fail("potential.file", "malformed row '" + line + "'");
        }
        first = false;
        xs.push_back(x);
        vs.push_back(v);
    }
    if (xs.size() < 2) fail("potential.file", "need at least two samples");
    const double dx = xs[1] - xs[0];
    if (!(dx > 0.0)) fail("potential.file", "x must be strictly increasing");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (std::abs(xs[i] - xs[0] - static_cast<double>(i) * dx) > 1e-9 * dx)
            fail("potential.file", "x samples are not uniformly spaced");
    }
    try {
        GridPtr grid = make_grid(xs.front(), xs.back() + dx, xs.size());
        return PotentialSpec::sampled(std::move(grid), std::move(vs));
    } catch (const std::exception& e) {
        fail("potential.file", e.what());
    }
}

/// The four propagation-plan invariants, restated here so a bad config is
/// reported with its field path before any compute starts. propagate()
/// enforces the same rules.
void check_plan_config(const PlanConfig& plan, const ModulationSpec& mod,
                       double dt) {
    if (!(plan.total_time > 0.0)) fail("plan.total_time", "must be positive");
    if (!(dt > 0.0)) fail("plan.dt", "must be positive");
    if (plan.steps_per_record == 0) fail("plan.steps_per_record", "must be positive");
    if (!mod.empty()) {
        const double limit = (2.0 * std::numbers::pi / mod.max_frequency()) / 32.0;
        if (dt > limit * (1.0 + 1e-12))
            fail("plan.dt", "coarser than 1/32 of the fastest drive period");
    }
    const double steps = plan.total_time / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        fail("plan.dt", "total_time must be a whole number of steps");
    if (plan.absorber &&
        (!(plan.absorber->ramp_width > 0.0) || !(plan.absorber->strength > 0.0)))
        fail("plan.absorber", "ramp_width and strength must be positive");
}

double resolve_dt(const PlanConfig& plan, const ModulationSpec& mod) {
    if (plan.dt) return *plan.dt;
    double steps = 1024.0;
    if (!mod.empty()) {
        const double dt0 = (2.0 * std::numbers::pi / mod.max_frequency()) / 128.0;
        steps = std::ceil(plan.total_time / dt0 - 1e-9);
    }
    return plan.total_time / steps;
}

}  // namespace

ModulationSpec make_modulation(const ModulationConfig& config) {
    const std::string& family = config.family;
    if (family == "none") {
        if (!config.tones.empty())
            fail("modulation.tones", "family 'none' admits no tones");
        return ModulationSpec{};
    }
    if (family == "tones") {
        try {
            return ModulationSpec(config.tones);
        } catch (const std::exception& e) {
            fail("modulation.tones", e.what());
        }
    }
    const bool known = family == "cos" || family == "cosine" ||
                       family == "one_sided" || family == "one_sided_negative" ||
                       family == "two_tone";
    if (!known)
        fail("modulation.family",
             "unknown family '" + family +
                 "' (none, cos, one_sided, one_sided_negative, two_tone, tones)");
    if (!(config.omega > 0.0)) fail("modulation.omega", "must be positive");
    try {
        if (family == "cos" || family == "cosine")
            return ModulationSpec::cosine(config.omega,
                                          config.amplitude.value_or(1.0));
        if (family == "one_sided")
            return ModulationSpec::one_sided(config.omega,
                                             config.amplitude.value_or(0.5));
        if (family == "one_sided_negative")
            return ModulationSpec::one_sided_negative(
                config.omega, config.amplitude.value_or(0.5));
        return ModulationSpec::two_tone(config.omega,
                                        config.amplitude.value_or(0.25));
    } catch (const std::exception& e) {
        fail("modulation", e.what());
    }
}

PotentialSpec make_potential(const PotentialConfig& config) {
    if (config.type == "sampled") return load_sampled_potential(config.file);
    try {
        return PotentialSpec::gaussian(config.v0, config.beta);
    } catch (const std::exception& e) {
        fail("potential", e.what());
    }
}

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(j, "config",
               {"name", "mode", "grid", "packet", "potential", "modulation",
                "plan", "floquet", "outputs"});

    ScenarioConfig config;
    if (j.contains("name")) config.name = get_string(j["name"], "name");
    if (j.contains("mode"))
        config.mode = parse_mode(get_string(j["mode"], "mode"), "mode");
    if (j.contains("grid")) config.grid = parse_grid(j["grid"]);
    if (j.contains("packet")) config.packet = parse_packet(j["packet"]);
    if (j.contains("potential"))
        config.potential = parse_potential(j["potential"]);
    if (j.contains("modulation"))
        config.modulation = parse_modulation(j["modulation"]);
    if (j.contains("plan")) config.plan = parse_plan(j["plan"]);
    if (j.contains("floquet")) config.floquet = parse_floquet(j["floquet"]);
    if (j.contains("outputs")) config.outputs = parse_outputs(j["outputs"]);
    return config;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

void validate(const ScenarioConfig& config) {
    const ModulationSpec mod = make_modulation(config.modulation);

    if (config.mode == RunMode::Floquet) {
        if (!config.potential) fail("potential", "required in floquet mode");
        const PotentialSpec pot = make_potential(*config.potential);
        if (!pot.is_gaussian())
            fail("potential.type", "floquet mode requires a gaussian potential");
        if (!(config.packet.carrier > 0.0))
            fail("packet.carrier",
                 "floquet mode needs a positive incident wavenumber");
        const FloquetConfig& fl = config.floquet;
        if (fl.m_min > 0 || fl.m_max < 0)
            fail("floquet.m_min", "sideband range must contain 0");
        if (fl.incident_sign != 1 && fl.incident_sign != -1)
            fail("floquet.incident_sign", "must be +1 or -1");
        if (fl.scheme != "numerov" && fl.scheme != "central_fd2")
            fail("floquet.scheme", "expected 'numerov' or 'central_fd2'");
        if (fl.n_x < 16) fail("floquet.n_x", "too small");
        const double omega0 = config.packet.carrier * config.packet.carrier;
        try {
            build_channels(omega0, mod, fl.m_min, fl.m_max);
        } catch (const std::exception& e) {
            fail("floquet", e.what());
        }
        if (fl.x_min && fl.x_max && !(*fl.x_max > *fl.x_min))
            fail("floquet.x_max", "window is empty");
        return;
    }

    if (config.grid.n == 0) fail("grid.n", "required for time-domain modes");
    GridPtr grid;
    try {
        grid = make_grid(config.grid.x_min, config.grid.x_max, config.grid.n);
    } catch (const std::exception& e) {
        fail("grid", e.what());
    }
    try {
        make_gaussian_packet(grid, config.packet.center, config.packet.width,
                             config.packet.carrier, config.packet.normalize);
    } catch (const std::exception& e) {
        fail("packet", e.what());
    }

    if (config.mode == RunMode::TimeDomain || config.mode == RunMode::Effective) {
        if (!config.potential) fail("potential", "required in this mode");
        const PotentialSpec pot = make_potential(*config.potential);
        if (!pot.is_gaussian() && !(*pot.sample_grid() == *grid))
            fail("potential.file", "sampled potential grid differs from grid");
    }

    check_plan_config(config.plan, mod, resolve_dt(config.plan, mod));
}

void apply_override(ScenarioConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    auto number = [&]() -> double {
        std::size_t used = 0;
        double parsed = 0.0;
        try {
            parsed = std::stod(value, &used);
        } catch (const std::exception&) {
            fail(key, "expected a number, got '" + value + "'");
        }
        if (used != value.size()) fail(key, "expected a number, got '" + value + "'");
        return parsed;
    };
    auto count = [&]() -> std::size_t {
        const double parsed = number();
        if (parsed < 0.0 || parsed != std::floor(parsed))
            fail(key, "expected a nonnegative integer");
        return static_cast<std::size_t>(parsed);
    };
    auto integer = [&]() -> int {
        const double parsed = number();
        if (parsed != std::floor(parsed)) fail(key, "expected an integer");
        return static_cast<int>(parsed);
    };
    auto boolean = [&]() -> bool {
        if (value == "true") return true;
        if (value == "false") return false;
        fail(key, "expected true or false");
    };
    auto potential = [&]() -> PotentialConfig& {
        if (!config.potential) config.potential.emplace();
        return *config.potential;
    };
    auto absorber = [&]() -> AbsorberSpec& {
        if (!config.plan.absorber) config.plan.absorber = AbsorberSpec{0.0, 0.0};
        return *config.plan.absorber;
    };

    if (key == "name") config.name = value;
    else if (key == "mode") config.mode = parse_mode(value, key);
    else if (key == "grid.x_min") config.grid.x_min = number();
    else if (key == "grid.x_max") config.grid.x_max = number();
    else if (key == "grid.n") config.grid.n = count();
    else if (key == "packet.center") config.packet.center = number();
    else if (key == "packet.width") config.packet.width = number();
    else if (key == "packet.carrier") config.packet.carrier = number();
    else if (key == "packet.normalize") config.packet.normalize = boolean();
    else if (key == "potential.type") potential().type = value;
    else if (key == "potential.v0") potential().v0 = number();
    else if (key == "potential.beta") potential().beta = number();
    else if (key == "potential.file") potential().file = value;
    else if (key == "modulation.family") config.modulation.family = value;
    else if (key == "modulation.omega") config.modulation.omega = number();
    else if (key == "modulation.amplitude") config.modulation.amplitude = number();
    else if (key == "plan.dt") config.plan.dt = number();
    else if (key == "plan.total_time") config.plan.total_time = number();
    else if (key == "plan.steps_per_record") config.plan.steps_per_record = count();
    else if (key == "plan.absorber.ramp_width") absorber().ramp_width = number();
    else if (key == "plan.absorber.strength") absorber().strength = number();
    else if (key == "floquet.m_min") config.floquet.m_min = integer();
    else if (key == "floquet.m_max") config.floquet.m_max = integer();
    else if (key == "floquet.x_min") config.floquet.x_min = number();
    else if (key == "floquet.x_max") config.floquet.x_max = number();
    else if (key == "floquet.n_x") config.floquet.n_x = count();
    else if (key == "floquet.incident_sign") config.floquet.incident_sign = integer();
    else if (key == "floquet.scheme") config.floquet.scheme = value;
    else if (key == "outputs.directory") config.outputs.directory = value;
    else if (key == "outputs.which") {
        config.outputs.which.clear();
        std::istringstream list(value);
        std::string name;
        while (std::getline(list, name, ',')) {
            if (name.empty()) continue;
            if (!kScalarOutputs.count(name))
                fail(key, "unknown output '" + name + "'");
            config.outputs.which.insert(name);
        }
    } else {
        throw ConfigError("--set: unknown key '" + key + "'");
    }
}

std::string config_to_json(const ScenarioConfig& config) {
    json j;
    j["name"] = config.name;
    j["mode"] = mode_name(config.mode);
    j["grid"] = {{"x_min", config.grid.x_min},
                 {"x_max", config.grid.x_max},
                 {"n", config.grid.n}};
    j["packet"] = {{"center", config.packet.center},
                   {"width", config.packet.width},
                   {"carrier", config.packet.carrier},
                   {"normalize", config.packet.normalize}};
    if (config.potential) {
        json p;
        p["type"] = config.potential->type;
        if (config.potential->type == "gaussian") {
            p["v0"] = config.potential->v0;
            p["beta"] = config.potential->beta;
        } else {
            p["file"] = config.potential->file;
        }
        j["potential"] = p;
    }
    json m;
    m["family"] = config.modulation.family;
    if (config.modulation.family != "none" && config.modulation.family != "tones") {
        m["omega"] = config.modulation.omega;
        if (config.modulation.amplitude) m["amplitude"] = *config.modulation.amplitude;
    }
    if (!config.modulation.tones.empty()) {
        json tones = json::array();
        for (const auto& tone : config.modulation.tones)
            tones.push_back({{"re", tone.amplitude.real()},
                             {"im", tone.amplitude.imag()},
                             {"frequency", tone.frequency}});
        m["tones"] = tones;
    }
    j["modulation"] = m;
    json plan;
    if (config.plan.dt) plan["dt"] = *config.plan.dt;
    plan["total_time"] = config.plan.total_time;
    plan["steps_per_record"] = config.plan.steps_per_record;
    if (config.plan.absorber)
        plan["absorber"] = {{"ramp_width", config.plan.absorber->ramp_width},
                            {"strength", config.plan.absorber->strength}};
    j["plan"] = plan;
    if (config.mode == RunMode::Floquet) {
        json fl;
        fl["m_min"] = config.floquet.m_min;
        fl["m_max"] = config.floquet.m_max;
        if (config.floquet.x_min) fl["x_min"] = *config.floquet.x_min;
        if (config.floquet.x_max) fl["x_max"] = *config.floquet.x_max;
        fl["n_x"] = config.floquet.n_x;
        fl["incident_sign"] = config.floquet.incident_sign;
        fl["scheme"] = config.floquet.scheme;
        j["floquet"] = fl;
    }
    json outputs;
    outputs["directory"] = config.outputs.directory;
    outputs["which"] = json::array();
    for (const auto& name : config.outputs.which) outputs["which"].push_back(name);
    j["outputs"] = outputs;
    return j.dump(2);
}

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
    return (fs::path(dir) / file).string();
}

void write_series(const std::string& path, const char* value_name,
                  const std::vector<double>& times,
                  const std::vector<double>& values, RunResult& result) {
    csv::Table table;
    table.header = {"time", value_name};
    for (std::size_t i = 0; i < times.size(); ++i)
        table.rows.push_back({times[i], values[i]});
    csv::write_table(path, table);
    result.files_written.push_back(path);
}

/// Record times identical to the stepping loop's cadence: every
/// steps_per_record-th step plus the final step.
std::vector<std::size_t> record_steps(std::size_t n_steps, std::size_t spr) {
    std::vector<std::size_t> steps;
    for (std::size_t s = 1; s <= n_steps; ++s)
        if (s % spr == 0 || s == n_steps) steps.push_back(s);
    return steps;
}

void run_time_mode(const ScenarioConfig& config, json& meta, RunResult& result) {
    const ModulationSpec mod = make_modulation(config.modulation);
    GridPtr grid = make_grid(config.grid.x_min, config.grid.x_max, config.grid.n);
    const WaveFunction initial =
        make_gaussian_packet(grid, config.packet.center, config.packet.width,
                             config.packet.carrier, config.packet.normalize);
    const double dt = resolve_dt(config.plan, mod);
    const PropagationPlan plan{dt, config.plan.steps_per_record,
                               config.plan.total_time, config.plan.absorber};

    Trajectory traj;
    if (config.mode == RunMode::TimeDomain) {
        const PotentialSpec pot = make_potential(*config.potential);
        traj = propagate(initial, pot, mod, plan);
    } else if (config.mode == RunMode::Effective) {
        const PotentialSpec pot = make_potential(*config.potential);
        const EffectiveField eff = effective_potential(pot, grid, mod);
        traj = effective_propagate(initial, eff, plan);
    } else {
        traj.grid = grid;
        traj.times.push_back(0.0);
        traj.snapshots.push_back(initial.values);
        const auto n_steps =
            static_cast<std::size_t>(std::llround(config.plan.total_time / dt));
        for (std::size_t s : record_steps(n_steps, plan.steps_per_record)) {
            const double t = static_cast<double>(s) * dt;
            traj.times.push_back(t);
            traj.snapshots.push_back(free_propagate(initial, t).values);
        }
    }

    DiagnosticsRequest request;
    request.want_invisibility = config.outputs.which.count("invisibility") > 0;
    request.want_intensity = config.outputs.which.count("intensity") > 0;
    const DiagnosticsRecord record = compute_diagnostics(traj, initial, request);

    const std::string& dir = config.outputs.directory;
    if (config.outputs.which.count("norm"))
        write_series(join_path(dir, "norm.csv"), "norm", record.times, record.norm,
                     result);
    if (config.outputs.which.count("width"))
        write_series(join_path(dir, "width.csv"), "width", record.times,
                     record.width, result);
    if (request.want_invisibility)
        write_series(join_path(dir, "invisibility.csv"), "invisibility_error",
                     record.times, record.invisibility_error, result);
    if (request.want_intensity) {
        const std::string path = join_path(dir, "intensity.csv");
        std::vector<double> x_axis(grid->size());
        for (std::size_t jx = 0; jx < grid->size(); ++jx) x_axis[jx] = grid->x(jx);
        csv::write_matrix(path, "time", x_axis, record.times, *record.intensity_map);
        result.files_written.push_back(path);
    }
    if (config.outputs.which.count("final_profile")) {
        const std::string path = join_path(dir, "final_profile.csv");
        csv::Table table;
        table.header = {"x", "re", "im", "intensity"};
        const auto& last = traj.snapshots.back();
        for (std::size_t jx = 0; jx < last.size(); ++jx)
            table.rows.push_back({grid->x(jx), last[jx].real(), last[jx].imag(),
                                  std::norm(last[jx])});
        csv::write_table(path, table);
        result.files_written.push_back(path);
    }

    meta["records"] = traj.times.size();
    meta["dt"] = dt;
    meta["runaway_flagged"] = traj.runaway_flagged;
    meta["max_amplification"] = traj.max_amplification;
    meta["final_norm"] = record.norm.back();
    meta["final_width"] = record.width.back();
    if (request.want_invisibility)
        meta["final_invisibility_error"] = record.invisibility_error.back();
    if (traj.runaway_flagged) {
        result.exit_code = 3;
        result.warnings.push_back(
            "runaway gain: field amplitude exceeded 1e6 times its initial peak");
    }
}

void run_floquet_mode(const ScenarioConfig& config, json& meta,
                      RunResult& result) {
    const ModulationSpec mod = make_modulation(config.modulation);
    const PotentialSpec pot = make_potential(*config.potential);
    const double omega0 = config.packet.carrier * config.packet.carrier;
    const FloquetConfig& fl = config.floquet;
    const ChannelSet channels = build_channels(omega0, mod, fl.m_min, fl.m_max);

    FloquetOptions options = default_floquet_options(pot);
    if (fl.x_min) options.x_min = *fl.x_min;
    if (fl.x_max) options.x_max = *fl.x_max;
    options.n_x = fl.n_x;
    options.incident_sign = fl.incident_sign;
    options.scheme = fl.scheme == "central_fd2" ? FloquetOptions::Scheme::CentralFd2
                                                : FloquetOptions::Scheme::Numerov;

    const FloquetScatteringResult solved =
        solve_floquet_scattering(pot, mod, omega0, channels, options);

    const std::string path = join_path(config.outputs.directory, "channels.csv");
    csv::Table table;
    table.header = {"m", "omega_m", "k_re", "k_im", "r_re", "r_im", "t_re", "t_im"};
    for (std::size_t c = 0; c < solved.channels.channels.size(); ++c) {
        const Channel& ch = solved.channels.channels[c];
        table.rows.push_back({static_cast<double>(ch.index), ch.frequency,
                              ch.wavenumber.real(), ch.wavenumber.imag(),
                              solved.reflection[c].real(),
                              solved.reflection[c].imag(),
                              solved.transmission[c].real(),
                              solved.transmission[c].imag()});
    }
    csv::write_table(path, table);
    result.files_written.push_back(path);

    const InvisibilityReport report = verify_invisibility(solved, kInvisibilityTol);
    json rj;
    rj["tolerance"] = report.tolerance;
    rj["reflectionless"] = report.reflectionless;
    rj["transmission_unit"] = report.transmission_unit;
    rj["no_sideband_transmission"] = report.no_sideband_transmission;
    rj["max_propagating_reflection"] = report.max_propagating_reflection;
    rj["incident_transmission_deviation"] = report.incident_transmission_deviation;
    rj["max_sideband_transmission"] = report.max_sideband_transmission;
    json profiles = json::array();
    for (const auto& profile : report.evanescent_profiles)
        profiles.push_back({{"m", profile.index},
                            {"omega_m", profile.frequency},
                            {"expected_decay_rate", profile.expected_decay_rate},
                            {"fitted_decay_rate", profile.fitted_decay_rate},
                            {"max_abs", profile.max_abs}});
    rj["evanescent_profiles"] = profiles;

    meta["residual"] = solved.residual;
    meta["truncation_warning"] = solved.truncation_warning;
    meta["flux_balance"] = flux_balance(solved);
    meta["invisibility"] = rj;
    if (solved.truncation_warning)
        result.warnings.push_back(
            "sideband truncation: boundary-channel amplitude above 1e-8 of the "
            "incident wave");
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();

    std::error_code ec;
    fs::create_directories(config.outputs.directory, ec);
    if (ec)
        throw ConfigError("outputs.directory: cannot create " +
                          config.outputs.directory + ": " + ec.message());

    RunResult result;
    json meta;
    meta["name"] = config.name;
    meta["mode"] = mode_name(config.mode);
    meta["config"] = json::parse(config_to_json(config));

    if (config.mode == RunMode::Floquet)
        run_floquet_mode(config, meta, result);
    else
        run_time_mode(config, meta, result);

    meta["warnings"] = result.warnings;
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    meta["wall_clock_seconds"] = elapsed.count();

    const std::string meta_path = join_path(config.outputs.directory, "metadata.json");
    std::ofstream out(meta_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + meta_path);
    out << meta.dump(2) << '\n';
    result.files_written.push_back(meta_path);
    return result;
}

}  // namespace oscwave
