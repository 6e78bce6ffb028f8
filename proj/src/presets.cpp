#include "oscwave/scenario.hpp"

#include <functional>
#include <map>
#include <vector>

namespace oscwave {

namespace {

// Scattering experiments: a carrier-0.5 packet launched at x = -80 against
// the v0 = 7 barrier under an omega = 0.9 drive. The step count divides the
// total time exactly and keeps dt at or below 1/128 of the drive period.
ScenarioConfig scattering_base(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    c.mode = RunMode::TimeDomain;
    c.grid = {-320.0, 320.0, 4096};
    c.packet = {-80.0, 25.0, 0.5, true};
    c.potential = PotentialConfig{"gaussian", 7.0, 1.0 / 64.0, ""};
    c.plan.dt = 180.0 / 3328.0;
    c.plan.total_time = 180.0;
    c.plan.steps_per_record = 26;
    c.outputs.directory = "out/" + name;
    c.outputs.which = {"norm", "width", "intensity", "invisibility",
                       "final_profile"};
    return c;
}

// Trapping experiments: a resting packet centered on the v0 = 20 barrier
// under an omega = 3 drive, watched for spreading.
ScenarioConfig trapping_base(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    c.mode = RunMode::TimeDomain;
    c.grid = {-160.0, 160.0, 2048};
    c.packet = {0.0, 5.0, 0.0, true};
    c.potential = PotentialConfig{"gaussian", 20.0, 1.0 / 64.0, ""};
    c.plan.dt = 40.0 / 2560.0;
    c.plan.total_time = 40.0;
    c.plan.steps_per_record = 10;
    c.outputs.directory = "out/" + name;
    c.outputs.which = {"norm", "width", "intensity"};
    return c;
}

ScenarioConfig channel_base(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    c.mode = RunMode::Floquet;
    c.packet.carrier = 0.5;
    c.potential = PotentialConfig{"gaussian", 7.0, 1.0 / 64.0, ""};
    c.outputs.directory = "out/" + name;
    return c;
}

ModulationConfig drive(const std::string& family, double omega, double amplitude) {
    ModulationConfig m;
    m.family = family;
    m.omega = omega;
    m.amplitude = amplitude;
    return m;
}

struct PresetEntry {
    std::string description;
    std::function<ScenarioConfig()> build;
};

const std::vector<std::pair<std::string, PresetEntry>>& catalog() {
    static const std::vector<std::pair<std::string, PresetEntry>> entries = {
        {"fig2a",
         {"packet vs cosine-driven barrier: Hermitian case, visible reflection",
          [] {
              auto c = scattering_base("fig2a");
              c.modulation = drive("cos", 0.9, 1.0);
              c.outputs.which.erase("invisibility");
              return c;
          }}},
        {"fig2b",
         {"packet vs positive one-sided drive: scatteringless traversal",
          [] {
              auto c = scattering_base("fig2b");
              c.modulation = drive("one_sided", 0.9, 0.5);
              return c;
          }}},
        {"fig2c",
         {"packet vs two-tone incommensurate one-sided drive: scatteringless",
          [] {
              auto c = scattering_base("fig2c");
              c.modulation = drive("two_tone", 0.9, 0.25);
              c.plan.dt = 180.0 / 4680.0;
              c.plan.steps_per_record = 36;
              return c;
          }}},
        {"fig2d",
         {"packet vs negative one-sided drive: visible inelastic sidebands",
          [] {
              auto c = scattering_base("fig2d");
              c.modulation = drive("one_sided_negative", 0.9, 0.5);
              return c;
          }}},
        {"fig3a",
         {"free-spreading reference packet (no potential)",
          [] {
              auto c = trapping_base("fig3a");
              c.mode = RunMode::FreeReference;
              c.potential.reset();
              return c;
          }}},
        {"fig3b",
         {"resting packet on cosine-driven barrier: Kapitza-stabilized spreading",
          [] {
              auto c = trapping_base("fig3b");
              c.modulation = drive("cos", 3.0, 1.0);
              return c;
          }}},
        {"fig3c",
         {"resting packet, positive one-sided drive: free-like spreading, "
          "breathing norm",
          [] {
              auto c = trapping_base("fig3c");
              c.modulation = drive("one_sided", 3.0, 0.5);
              return c;
          }}},
        {"fig3d",
         {"resting packet, two-tone one-sided drive: free-like spreading, "
          "breathing norm",
          [] {
              auto c = trapping_base("fig3d");
              c.modulation = drive("two_tone", 3.0, 0.25);
              return c;
          }}},
        {"floquet-invisible",
         {"channel solve, positive one-sided drive: unit transmission, "
          "evanescent-only scattered field",
          [] {
              auto c = channel_base("floquet-invisible");
              c.modulation = drive("one_sided", 0.9, 0.5);
              return c;
          }}},
        {"floquet-hermitian",
         {"channel solve, cosine drive: real reflection, conserved flux",
          [] {
              auto c = channel_base("floquet-hermitian");
              c.modulation = drive("cos", 0.9, 1.0);
              return c;
          }}},
        {"floquet-negative",
         {"channel solve, negative one-sided drive: transmission into fast "
          "propagating sidebands",
          [] {
              auto c = channel_base("floquet-negative");
              c.modulation = drive("one_sided_negative", 0.9, 0.5);
              return c;
          }}},
    };
    return entries;
}

}  // namespace

std::vector<PresetInfo> preset_catalog() {
    std::vector<PresetInfo> out;
    for (const auto& [name, entry] : catalog())
        out.push_back({name, entry.description});
    return out;
}

ScenarioConfig preset(const std::string& name) {
    for (const auto& [preset_name, entry] : catalog())
        if (preset_name == name) return entry.build();
    throw ConfigError("unknown preset '" + name + "' (see the list subcommand)");
}

}  // namespace oscwave
