// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/metasurface.hpp"

#include <doctest.h>

using namespace nfris;

TEST_CASE("make_surface_grid: area and cell bookkeeping")
{
    SurfaceGrid grid = make_surface_grid({0, 0, 0}, {0, 0, 1}, 0.1, 0.1, 0.0125);
    CHECK(grid.nx == 8);
    CHECK(grid.ny == 8);
    CHECK(grid.sample_count() == 64);
    CHECK(grid.total_area == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(grid.cell_area == doctest::Approx(0.01 / 64.0).epsilon(1e-12));
    // Midpoint sampling: mean of the sample points is the center.
    Vec3 mean{0, 0, 0};
    for (const auto &p : grid.points)
        mean = mean + p;
    mean = (1.0 / grid.sample_count()) * mean;
    CHECK(std::abs(mean.x) < 1e-12);
    CHECK(std::abs(mean.y) < 1e-12);
    CHECK(std::abs(mean.z) < 1e-12);
}

TEST_CASE("make_surface_grid: spacing never exceeded, total area preserved")
{
    // 0.1 / 0.03 is not an integer: cells shrink rather than stretch.
    SurfaceGrid grid = make_surface_grid({0.2, -0.1, 0.5}, {0, 0, 1}, 0.1, 0.07, 0.03);
    CHECK(grid.nx == 4);
    CHECK(grid.ny == 3);
    CHECK(grid.total_area == doctest::Approx(0.007).epsilon(1e-12));
    CHECK(grid.cell_area * grid.sample_count() == doctest::Approx(grid.total_area).epsilon(1e-12));
}

TEST_CASE("grid_for_aperture: default lambda/8 sampling")
{
    SurfaceGrid grid = grid_for_aperture({0, 0, 0}, {0, 0, 1}, 0.04, 0.04, 0.01);
    CHECK(grid.spacing <= 0.01 / 8.0 + 1e-15);
    CHECK(grid.nx == 32);
    CHECK(grid.ny == 32);
}

TEST_CASE("make_surface_grid: invalid arguments")
{
    CHECK_THROWS_AS(make_surface_grid({0, 0, 0}, {0, 0, 1}, 0.0, 0.1, 0.01), std::domain_error);
    CHECK_THROWS_AS(make_surface_grid({0, 0, 0}, {0, 0, 1}, 0.1, 0.1, -1.0), std::domain_error);
    CHECK_THROWS_AS(make_surface_grid({0, 0, 0}, {0, 0, 0}, 0.1, 0.1, 0.01), std::domain_error);
}

TEST_CASE("green_kernel: amplitude 1/(4 pi d), full-turn phase real")
{
    cplx g = green_kernel({0, 0, 0}, {0, 0, 2.0}, 1.0);
    CHECK(std::abs(g) == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-12));
    CHECK(g.imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.real() > 0.0);
}

TEST_CASE("build_operator: reactive-zone receivers rejected")
{
    SurfaceGrid grid = make_surface_grid({0, 0, 0}, {0, 0, 1}, 0.02, 0.02, 0.005);
    CHECK_THROWS_AS(build_operator(grid, {{0, 0, 0.005}}, 0.01), std::domain_error);
    CHECK_NOTHROW(build_operator(grid, {{0, 0, 0.5}}, 0.01));
}

TEST_CASE("build_operator: entries are the Green kernel")
{
    SurfaceGrid grid = make_surface_grid({0, 0, 0}, {0, 0, 1}, 0.02, 0.02, 0.01);
    std::vector<Vec3> rx = {{0, 0, 0.3}, {0.1, 0, 0.4}};
    RadiationOperator op = build_operator(grid, rx, 0.01);
    REQUIRE(op.g.rows() == 2);
    REQUIRE(op.g.cols() == grid.sample_count());
    for (int p = 0; p < 2; ++p)
        for (int k = 0; k < grid.sample_count(); ++k)
            CHECK(std::abs(op.g(p, k) - green_kernel(grid.points[k], rx[p], 0.01)) < 1e-15);
}

TEST_CASE("channel_gain: single cell reduces to the closed form")
{
    // One quadrature cell: gain = (G A_T / (4 pi d_t^2)) * (dA / (4 pi d_r))^2.
    SurfaceGrid grid = make_surface_grid({0, 0, 0}, {0, 0, 1}, 0.005, 0.005, 0.005);
    REQUIRE(grid.sample_count() == 1);
    CurrentDistribution j;
    j.j = Eigen::VectorXcd::Constant(1, cplx(1.0, 0.0));
    TxParams tx{2.0, 0.01, 3.0};
    Vec3 rx{0, 0, 1.5};
    double expected = (2.0 * 0.01 / (4.0 * pi * 9.0)) *
                      std::pow(grid.cell_area / (4.0 * pi * 1.5), 2);
    CHECK(channel_gain(grid, j, tx, rx, 0.01) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("channel_gain: co-phased current beats uniform current")
{
    SurfaceGrid grid = grid_for_aperture({0, 0, 0}, {0, 0, 1}, 0.1, 0.1, 0.02);
    Vec3 rx{0.05, 0, 0.4};
    TxParams tx{1.0, 0.005, 2.0};
    CurrentDistribution uniform;
    uniform.j = Eigen::VectorXcd::Constant(grid.sample_count(), cplx(1.0, 0.0));
    CurrentDistribution focused = cophased_current(grid, rx, 0.02);
    CHECK(channel_gain(grid, focused, tx, rx, 0.02) >=
          channel_gain(grid, uniform, tx, rx, 0.02) - 1e-18);
}

TEST_CASE("cophased_current: per-sample contributions aligned at the focus")
{
    SurfaceGrid grid = grid_for_aperture({0, 0, 0}, {0, 0, 1}, 0.06, 0.06, 0.02);
    Vec3 rx{0, 0.02, 0.3};
    CurrentDistribution focused = cophased_current(grid, rx, 0.02);
    for (int k = 0; k < grid.sample_count(); ++k)
    {
        cplx contrib = focused.j[k] * green_kernel(grid.points[k], rx, 0.02);
        CHECK(std::abs(std::arg(contrib)) < 1e-9);
    }
}

TEST_CASE("patch_emulation: piecewise-constant phases and partition validation")
{
    SurfaceGrid grid = make_surface_grid({0, 0, 0}, {0, 0, 1}, 0.02, 0.02, 0.005);
    auto partition = regular_partition(grid, 2, 2);
    REQUIRE(partition.size() == 4);
    std::vector<double> phases = {0.0, pi / 2.0, pi, -pi / 2.0};
    CurrentDistribution j = patch_emulation(grid, partition, phases);
    for (size_t e = 0; e < partition.size(); ++e)
        for (int k : partition[e])
            CHECK(std::abs(j.j[k] - std::polar(1.0, phases[e])) < 1e-12);

    // Missing a sample: not an exact cover.
    auto broken = partition;
    broken[0].pop_back();
    CHECK_THROWS_AS(patch_emulation(grid, broken, phases), std::invalid_argument);
    // Overlap.
    auto overlap = partition;
    overlap[0].push_back(overlap[1][0]);
    CHECK_THROWS_AS(patch_emulation(grid, overlap, phases), std::invalid_argument);
    // Phase count mismatch.
    CHECK_THROWS_AS(patch_emulation(grid, partition, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("patch_emulation: dense sampling converges toward the continuous limit")
{
    // Uniform phase across the whole surface: the emulated gain should
    // approach the continuous-aperture gain as the grid is refined.
    Vec3 rx{0, 0, 0.5};
    TxParams tx{1.0, 0.002, 1.0};
    double lambda = 0.02;
    auto gain_at = [&](int spw)
    {
        SurfaceGrid grid = grid_for_aperture({0, 0, 0}, {0, 0, 1}, 0.04, 0.04, lambda, spw);
        auto partition = regular_partition(grid, 1, 1);
        CurrentDistribution j = patch_emulation(grid, partition, {0.0});
        return channel_gain(grid, j, tx, rx, lambda);
    };
    double coarse = gain_at(4);
    double fine = gain_at(8);
    double finer = gain_at(16);
    CHECK(std::abs(fine - finer) < std::abs(coarse - finer));
    CHECK(std::abs(fine - finer) / finer < 0.01);
}

TEST_CASE("regular_partition: covers the grid exactly")
{
    SurfaceGrid grid = make_surface_grid({0, 0, 0}, {0, 0, 1}, 0.03, 0.02, 0.005);
    auto partition = regular_partition(grid, 2, 3);
    std::vector<int> seen(grid.sample_count(), 0);
    for (const auto &cell : partition)
        for (int k : cell)
            ++seen[k];
    for (int c : seen)
        CHECK(c == 1);
    CHECK_THROWS_AS(regular_partition(grid, 5, 2), std::invalid_argument);
}
