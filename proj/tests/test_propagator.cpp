#include "oscwave/propagator.hpp"

#include "doctest.h"
#include "oscwave/diagnostics.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace oscwave;

namespace {

double max_pointwise_distance(const WaveFunction& a, const WaveFunction& b) {
    REQUIRE(a.values.size() == b.values.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j)
        worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
    return worst;
}

}  // namespace

TEST_CASE("free evolution") {
    const GridPtr grid = make_grid(-160.0, 160.0, 2048);

    SUBCASE("plane wave on a grid mode picks up exp(-i k^2 t)") {
        const double k = 2.0 * std::numbers::pi * 8.0 / 320.0;
        WaveFunction wave{grid, std::vector<Complex>(grid->size()), 0.0};
        for (std::size_t j = 0; j < grid->size(); ++j)
            wave.values[j] = std::exp(Complex(0.0, k * grid->x(j)));

        const double t = 3.0;
        const WaveFunction evolved = free_propagate(wave, t);
        const Complex phase = std::exp(Complex(0.0, -k * k * t));
        double worst = 0.0;
        for (std::size_t j = 0; j < grid->size(); ++j)
            worst = std::max(worst,
                             std::abs(evolved.values[j] - wave.values[j] * phase));
        CHECK(worst < 1e-12);
        CHECK(evolved.time == t);
    }

    SUBCASE("composition of steps equals one step") {
        const WaveFunction packet = make_gaussian_packet(grid, -20.0, 6.0, 0.7, true);
        const WaveFunction two = free_propagate(free_propagate(packet, 1.2), 2.3);
        const WaveFunction one = free_propagate(packet, 3.5);
        CHECK(max_pointwise_distance(two, one) < 1e-13);
        CHECK(two.time == doctest::Approx(3.5));
    }

    SUBCASE("spreading packet follows the closed-form width") {
        const WaveFunction packet = make_gaussian_packet(grid, 0.0, 5.0, 0.0, true);
        for (double t : {0.0, 2.0, 6.25, 15.0}) {
            const WaveFunction evolved = free_propagate(packet, t);
            CHECK(width(evolved) ==
                  doctest::Approx(oracles::free_gaussian_width(5.0, t))
                      .epsilon(1e-8));
            CHECK(norm(evolved) == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(oracles::free_gaussian_width(5.0, 6.25) ==
              doctest::Approx(oracles::kSpreadWidth).epsilon(1e-15));
    }
}

TEST_CASE("splitting reduces to free evolution when the coupling vanishes") {
    const GridPtr grid = make_grid(-160.0, 160.0, 1024);
    const WaveFunction packet = make_gaussian_packet(grid, -40.0, 8.0, 0.5, true);
    const PropagationPlan plan{0.05, 100, 5.0, std::nullopt};

    // zero-amplitude barrier under a live drive
    const Trajectory traj = propagate(packet, PotentialSpec::gaussian(0.0, 1.0),
                                      ModulationSpec::cosine(0.9), plan);
    const WaveFunction last = state_at(traj, traj.snapshots.size() - 1);
    CHECK(max_pointwise_distance(last, free_propagate(packet, 5.0)) < 1e-12);
    CHECK(!traj.runaway_flagged);
}

TEST_CASE("recording cadence and time stamps") {
    const GridPtr grid = make_grid(-160.0, 160.0, 512);
    const WaveFunction packet = make_gaussian_packet(grid, 0.0, 5.0, 0.0, true);

    PropagationPlan plan{0.0390625, 64, 10.0, std::nullopt};  // 256 steps
    const Trajectory traj = propagate(packet, PotentialSpec::gaussian(7.0, 1.0 / 64.0),
                                      ModulationSpec::cosine(0.9), plan);
    REQUIRE(traj.times.size() == 5);  // t = 0 plus four records
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(10.0));
    CHECK(traj.times[1] == doctest::Approx(64 * plan.dt));
    CHECK(traj.snapshots.size() == traj.times.size());

    SUBCASE("an off-cadence final step is still recorded") {
        plan.steps_per_record = 100;  // 256 % 100 != 0
        const Trajectory t2 = propagate(packet, PotentialSpec::gaussian(7.0, 1.0 / 64.0),
                                        ModulationSpec::cosine(0.9), plan);
        REQUIRE(t2.times.size() == 4);  // 0, 100, 200, 256 steps
        CHECK(t2.times.back() == doctest::Approx(10.0));
    }
}

TEST_CASE("real drives conserve norm to round-off") {
    const GridPtr grid = make_grid(-160.0, 160.0, 1024);
    const WaveFunction packet = make_gaussian_packet(grid, -40.0, 8.0, 0.5, true);
    const PropagationPlan plan{0.0390625, 32, 10.0, std::nullopt};
    const Trajectory traj = propagate(packet, PotentialSpec::gaussian(7.0, 1.0 / 64.0),
                                      ModulationSpec::cosine(0.9), plan);
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s)
        CHECK(norm(state_at(traj, s)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("plan invariants are enforced") {
    const GridPtr grid = make_grid(-160.0, 160.0, 512);
    const WaveFunction packet = make_gaussian_packet(grid, 0.0, 5.0, 0.0, true);
    const PotentialSpec pot = PotentialSpec::gaussian(7.0, 1.0 / 64.0);
    const ModulationSpec mod = ModulationSpec::cosine(0.9);

    // 1/32 of the drive period is the coarsest admissible step
    CHECK_THROWS_AS(propagate(packet, pot, mod, {0.3, 1, 3.0, std::nullopt}),
                    std::invalid_argument);
    CHECK_NOTHROW(propagate(packet, pot, mod, {0.1, 10, 3.0, std::nullopt}));
    CHECK_THROWS_AS(propagate(packet, pot, mod, {0.25, 1, 1.1, std::nullopt}),
                    std::invalid_argument);
    CHECK_THROWS_AS(propagate(packet, pot, mod, {-0.1, 1, 3.0, std::nullopt}),
                    std::invalid_argument);
    CHECK_THROWS_AS(propagate(packet, pot, mod, {0.1, 0, 3.0, std::nullopt}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        propagate(packet, pot, mod, {0.1, 1, 3.0, AbsorberSpec{-1.0, 1.0}}),
        std::invalid_argument);
}

TEST_CASE("gauge frame change") {
    const GridPtr grid = make_grid(-160.0, 160.0, 512);
    WaveFunction packet = make_gaussian_packet(grid, -10.0, 6.0, 0.4, true);
    packet.time = 1.7;
    const PotentialSpec pot = PotentialSpec::gaussian(7.0, 1.0 / 64.0);

    SUBCASE("round trip is the identity") {
        for (const auto& mod : {ModulationSpec::cosine(0.9),
                                ModulationSpec::one_sided(0.9)}) {
            const WaveFunction back =
                gauge_transform_inverse(gauge_transform(packet, pot, mod), pot, mod);
            CHECK(max_pointwise_distance(back, packet) < 1e-14);
            CHECK(back.time == packet.time);
        }
    }
    SUBCASE("a real drive yields a pure phase") {
        const WaveFunction phi =
            gauge_transform(packet, pot, ModulationSpec::cosine(0.9));
        for (std::size_t j = 0; j < phi.values.size(); ++j)
            CHECK(std::abs(std::abs(phi.values[j]) - std::abs(packet.values[j])) <
                  1e-14);
    }
    SUBCASE("a one-sided drive rescales moduli") {
        const WaveFunction phi =
            gauge_transform(packet, pot, ModulationSpec::one_sided(0.9));
        const std::size_t mid = 256;  // x = 0, where V is largest
        CHECK(std::abs(std::abs(phi.values[mid]) - std::abs(packet.values[mid])) >
              1e-6);
    }
}

TEST_CASE("gain drives trip the runaway flag") {
    const GridPtr grid = make_grid(-160.0, 160.0, 512);
    const WaveFunction packet = make_gaussian_packet(grid, 0.0, 5.0, 0.0, true);
    // f ~ +i over the run: the potential factor grows like exp(V t)
    const ModulationSpec gain({{Complex(0.0, 1.0), 1e-3}});
    const PropagationPlan plan{0.05, 20, 5.0, std::nullopt};
    const Trajectory traj =
        propagate(packet, PotentialSpec::gaussian(7.0, 1.0 / 64.0), gain, plan);
    CHECK(traj.runaway_flagged);
    CHECK(traj.max_amplification > 1e6);
    CHECK(all_finite(state_at(traj, traj.snapshots.size() - 1)));
}

TEST_CASE("edge absorber removes outgoing flux") {
    const GridPtr grid = make_grid(-320.0, 320.0, 1024);
    // Group velocity 2k = 2: the packet crosses the right ramp well before
    // t = 100, with time to spare for the slow momentum tail.
    const WaveFunction packet = make_gaussian_packet(grid, 150.0, 10.0, 1.0, true);
    const PotentialSpec none = PotentialSpec::gaussian(0.0, 1.0);
    PropagationPlan plan{0.05, 400, 100.0, AbsorberSpec{40.0, 5.0}};

    const Trajectory damped = propagate(packet, none, ModulationSpec{}, plan);
    CHECK(norm(state_at(damped, damped.snapshots.size() - 1)) < 0.1);

    plan.absorber.reset();
    const Trajectory kept = propagate(packet, none, ModulationSpec{}, plan);
    CHECK(norm(state_at(kept, kept.snapshots.size() - 1)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("static averaged field propagation") {
    const GridPtr grid = make_grid(-160.0, 160.0, 1024);
    const WaveFunction packet = make_gaussian_packet(grid, 0.0, 5.0, 0.0, true);
    const PotentialSpec pot = PotentialSpec::gaussian(20.0, 1.0 / 64.0);
    const PropagationPlan plan{0.025, 100, 5.0, std::nullopt};

    SUBCASE("real field conserves norm") {
        const EffectiveField eff =
            effective_potential(pot, grid, ModulationSpec::cosine(3.0));
        const Trajectory traj = effective_propagate(packet, eff, plan);
        CHECK(norm(state_at(traj, traj.snapshots.size() - 1)) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("vanishing field reduces to free evolution") {
        const EffectiveField eff =
            effective_potential(pot, grid, ModulationSpec::one_sided(3.0));
        const Trajectory traj = effective_propagate(packet, eff, plan);
        const WaveFunction last = state_at(traj, traj.snapshots.size() - 1);
        CHECK(max_pointwise_distance(last, free_propagate(packet, 5.0)) < 1e-10);
    }
    SUBCASE("grid mismatch is rejected") {
        const EffectiveField eff = effective_potential(
            pot, make_grid(-160.0, 160.0, 512), ModulationSpec::cosine(3.0));
        CHECK_THROWS_AS(effective_propagate(packet, eff, plan),
                        std::invalid_argument);
    }
}
