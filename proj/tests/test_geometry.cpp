// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/geometry.hpp"

#include <doctest.h>
#include <random>

using namespace nfris;

TEST_CASE("rayleigh_distance: 1 m aperture at 28 GHz is about 187 m")
{
    double lambda = 299792458.0 / 28e9;
    double rd = rayleigh_distance(1.0, lambda);
    CHECK(rd == doctest::Approx(186.7).epsilon(0.01));
    CHECK(std::abs(rd - 187.0) < 1.0);
}

TEST_CASE("rayleigh_distance: edge values")
{
    CHECK(rayleigh_distance(0.0, 0.01) == 0.0);
    CHECK(rayleigh_distance(0.1, 0.01) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(rayleigh_distance(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(rayleigh_distance(1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(rayleigh_distance(-0.1, 0.01), std::domain_error);
}

TEST_CASE("rayleigh_distance: homogeneous of degree 2 in the aperture")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 100; ++i)
    {
        double d = u(rng), lambda = u(rng) * 0.01, k = u(rng);
        CHECK(rayleigh_distance(k * d, lambda) ==
              doctest::Approx(k * k * rayleigh_distance(d, lambda)).epsilon(1e-12));
    }
}

TEST_CASE("build_planar_array: single element")
{
    auto g = build_planar_array(1, 1, 0.005, {1, 2, 3}, {0, 0, 1});
    CHECK(g.element_count() == 1);
    CHECK(g.aperture_diagonal == 0.0);
    CHECK(distance(g.element_positions[0], {1, 2, 3}) == 0.0);
}

TEST_CASE("build_planar_array: 2x2 grid geometry")
{
    auto g = build_planar_array(2, 2, 0.005, {0, 0, 0}, {0, 0, 1});
    REQUIRE(g.element_count() == 4);
    CHECK(g.aperture_diagonal == doctest::Approx(0.005 * std::sqrt(2.0)).epsilon(1e-12));
    for (const auto &p : g.element_positions)
    {
        CHECK(p.z == doctest::Approx(0.0));
        CHECK(std::abs(p.x) == doctest::Approx(0.0025).epsilon(1e-12));
        CHECK(std::abs(p.y) == doctest::Approx(0.0025).epsilon(1e-12));
    }
}

TEST_CASE("build_planar_array: 20x20 half-wavelength array spans 9.5 cm per side")
{
    auto g = build_planar_array(20, 20, 0.005, {0, 0, 0}, {0, 0, 1});
    double min_x = 1e9, max_x = -1e9;
    for (const auto &p : g.element_positions)
    {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
    }
    CHECK(max_x - min_x == doctest::Approx(0.095).epsilon(1e-12));
    CHECK(g.aperture_diagonal == doctest::Approx(0.095 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("build_planar_array: element set symmetric under reflection through center")
{
    for (int rows : {2, 3})
        for (int cols : {4, 5})
        {
            auto g = build_planar_array(rows, cols, 0.01, {0.5, -0.2, 1.0}, {1, 1, 0});
            for (const auto &p : g.element_positions)
            {
                Vec3 mirrored = g.center + (g.center - p);
                double best = 1e9;
                for (const auto &q : g.element_positions)
                    best = std::min(best, distance(mirrored, q));
                CHECK(best < 1e-12);
            }
        }
}

TEST_CASE("build_planar_array: invalid arguments")
{
    CHECK_THROWS_AS(build_planar_array(0, 1, 0.01, {0, 0, 0}, {0, 0, 1}), std::domain_error);
    CHECK_THROWS_AS(build_planar_array(1, 1, 0.0, {0, 0, 0}, {0, 0, 1}), std::domain_error);
    CHECK_THROWS_AS(build_planar_array(2, 2, 0.01, {0, 0, 0}, {0, 0, 0}), std::domain_error);
}

TEST_CASE("build_planar_array: elements coplanar for arbitrary normals")
{
    auto g = build_planar_array(5, 7, 0.003, {1, 1, 1}, {1, 2, 3});
    Vec3 n = g.normal;
    for (const auto &p : g.element_positions)
        CHECK(std::abs(dot(p - g.center, n)) < 1e-12);
}

TEST_CASE("classify_region: paper example, 100 m is near field of a 1 m aperture at 28 GHz")
{
    double lambda = 299792458.0 / 28e9;
    RisGeometry g;
    g.center = {0, 0, 0};
    g.aperture_diagonal = 1.0;
    CHECK(classify_region(g, {0, 0, 100}, lambda) == FieldRegion::NearField);
    CHECK(classify_region(g, {0, 0, 200}, lambda) == FieldRegion::FarField);
}

TEST_CASE("classify_region: boundary distance is far field")
{
    RisGeometry g;
    g.center = {0, 0, 0};
    g.aperture_diagonal = 0.1;
    double lambda = 0.01;
    double rd = rayleigh_distance(g.aperture_diagonal, lambda);
    CHECK(classify_region(g, {rd, 0, 0}, lambda) == FieldRegion::FarField);
    CHECK(classify_region(g, {std::nextafter(rd, 0.0), 0, 0}, lambda) == FieldRegion::NearField);
}

TEST_CASE("classify_region: 2x2 cm patch at 10 m is far field")
{
    RisGeometry g;
    g.center = {0, 0, 0};
    g.aperture_diagonal = 0.028;
    CHECK(rayleigh_distance(0.028, 0.01) == doctest::Approx(0.1568));
    CHECK(classify_region(g, {0, 0, 10}, 0.01) == FieldRegion::FarField);
}

TEST_CASE("classify_region: monotone along any ray from the center")
{
    RisGeometry g;
    g.center = {0.3, -0.1, 2.0};
    g.aperture_diagonal = 0.5;
    double lambda = 0.01;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        Vec3 dir = normalized({u(rng), u(rng), u(rng)});
        bool seen_far = false;
        for (double d = 1.0; d < 200.0; d *= 1.3)
        {
            bool far = classify_region(g, g.center + d * dir, lambda) == FieldRegion::FarField;
            if (seen_far)
                CHECK(far);
            seen_far = seen_far || far;
        }
    }
}

TEST_CASE("Wavelength: wavenumber and validation")
{
    Wavelength w(0.01);
    CHECK(w.wavenumber() == doctest::Approx(2.0 * pi / 0.01).epsilon(1e-14));
    CHECK_THROWS_AS(Wavelength(0.0), std::domain_error);
}
