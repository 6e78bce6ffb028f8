#include "oscwave/fft.hpp"
#include "oscwave/grid.hpp"

#include "doctest.h"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace oscwave;

TEST_CASE("grid samples and spacing") {
    const auto grid = make_grid(-320.0, 320.0, 4096);
    CHECK(grid->size() == 4096);
    CHECK(grid->spacing() == doctest::Approx(640.0 / 4096).epsilon(1e-15));
    CHECK(grid->x(0) == -320.0);
    CHECK(grid->x(2048) == doctest::Approx(0.0));
    // x_max is the periodic image, one spacing past the last sample
    CHECK(grid->x(4095) == doctest::Approx(320.0 - grid->spacing()));
}

TEST_CASE("grid wavenumbers follow DFT ordering") {
    const auto grid = make_grid(-8.0, 8.0, 16);
    const double dk = 2.0 * std::numbers::pi / 16.0;
    const auto& k = grid->wavenumbers();
    CHECK(k[0] == 0.0);
    CHECK(k[1] == doctest::Approx(dk));
    CHECK(k[8] == doctest::Approx(8.0 * dk));   // positive branch keeps n/2
    CHECK(k[9] == doctest::Approx(-7.0 * dk));
    CHECK(k[15] == doctest::Approx(-dk));
}

TEST_CASE("grid rejects bad shapes") {
    CHECK_THROWS(make_grid(1.0, 1.0, 64));
    CHECK_THROWS(make_grid(0.0, 1.0, 100));  // not a power of two
    CHECK_THROWS(make_grid(0.0, 1.0, 0));
}

TEST_CASE("gaussian packet values and normalization") {
    const auto grid = make_grid(-320.0, 320.0, 4096);
    SUBCASE("unnormalized amplitude 1 packet has norm w*sqrt(pi/2)") {
        const auto state = make_gaussian_packet(grid, -80.0, 25.0, 0.5, false);
        CHECK(norm(state) == doctest::Approx(oracles::kNorm25).epsilon(1e-10));
        // value at a node: A exp(-(x-c)^2/w^2 + i k x)
        const std::size_t j = 1536;  // x = -80
        CHECK(grid->x(j) == doctest::Approx(-80.0));
        CHECK(state.values[j].real() == doctest::Approx(std::cos(0.5 * -80.0)));
        CHECK(state.values[j].imag() == doctest::Approx(std::sin(0.5 * -80.0)));
    }
    SUBCASE("normalized packet has unit norm") {
        const auto state = make_gaussian_packet(grid, -80.0, 25.0, 0.5, true);
        CHECK(norm(state) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("oversized packet is rejected") {
        CHECK_THROWS(make_gaussian_packet(grid, -280.0, 25.0, 0.0, true));
        CHECK_THROWS(make_gaussian_packet(grid, 0.0, 300.0, 0.0, true));
        CHECK_THROWS(make_gaussian_packet(grid, 0.0, -1.0, 0.0, true));
    }
}

TEST_CASE("forward-inverse transform round trip") {
    const auto grid = make_grid(-10.0, 10.0, 256);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<Complex> original(grid->size());
    for (auto& v : original) v = Complex(uni(rng), uni(rng));

    std::vector<Complex> spectrum, back;
    fft::forward(original, spectrum);
    fft::inverse(spectrum, back);

    double max_err = 0.0, max_abs = 0.0;
    for (std::size_t j = 0; j < original.size(); ++j) {
        max_err = std::max(max_err, std::abs(back[j] - original[j]));
        max_abs = std::max(max_abs, std::abs(original[j]));
    }
    CHECK(max_err < 1e-12 * max_abs);
}

TEST_CASE("transform preserves the norm (Parseval)") {
    const auto grid = make_grid(-10.0, 10.0, 512);
    const auto state = make_gaussian_packet(grid, 1.0, 2.0, 3.0, false);
    std::vector<Complex> spectrum;
    fft::forward(state.values, spectrum);
    double space = 0.0, freq = 0.0;
    for (const auto& v : state.values) space += std::norm(v);
    for (const auto& v : spectrum) freq += std::norm(v);
    freq /= static_cast<double>(spectrum.size());  // unitary rescale
    CHECK(freq == doctest::Approx(space).epsilon(1e-12));
}

TEST_CASE("norm of all-zero field is zero") {
    const auto grid = make_grid(-1.0, 1.0, 32);
    WaveFunction state{grid, std::vector<Complex>(32, Complex(0.0, 0.0)), 0.0};
    CHECK(norm(state) == 0.0);
    CHECK(all_finite(state));
    state.values[3] = Complex(std::nan(""), 0.0);
    CHECK_FALSE(all_finite(state));
}
