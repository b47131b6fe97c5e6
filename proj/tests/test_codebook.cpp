// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/codebook.hpp"

#include <doctest.h>
#include <algorithm>
#include <cmath>

using namespace nfris;

namespace
{
    RisGeometry line_array(int n, double lambda = 0.01)
    {
        return build_planar_array(1, n, lambda / 2.0, {0, 0, 0}, {0, 0, 1});
    }
}

TEST_CASE("polar_point: distance and angle recovered")
{
    RisGeometry ris = line_array(8);
    Vec3 p = polar_point(ris, 0.3, 2.0);
    CHECK(distance(p, ris.center) == doctest::Approx(2.0).epsilon(1e-12));
    double along = dot(p - ris.center, ris.normal);
    CHECK(std::acos(along / 2.0) == doctest::Approx(0.3).epsilon(1e-12));
    // Broadside point lies on the normal.
    Vec3 b = polar_point(ris, 0.0, 1.5);
    CHECK(std::abs(cross(b - ris.center, ris.normal).norm()) < 1e-12);
}

TEST_CASE("centered_mask: centered contiguous block")
{
    auto m = centered_mask(8, 4);
    std::vector<bool> expected = {false, false, true, true, true, true, false, false};
    CHECK(m == expected);
    CHECK_THROWS_AS(centered_mask(5, 9), std::invalid_argument);
    CHECK_THROWS_AS(centered_mask(5, 0), std::invalid_argument);
    auto one = centered_mask(4, 1);
    CHECK(std::count(one.begin(), one.end(), true) == 1);
    // Contiguity for arbitrary sizes.
    for (int total = 1; total <= 9; ++total)
        for (int count = 1; count <= total; ++count)
        {
            auto mask = centered_mask(total, count);
            int first = -1, last = -1;
            for (int i = 0; i < total; ++i)
                if (mask[static_cast<size_t>(i)])
                {
                    if (first < 0)
                        first = i;
                    last = i;
                }
            CHECK(last - first + 1 == count);
        }
}

TEST_CASE("angular_codeword: broadside steering is all-ones")
{
    RisGeometry ris = line_array(8);
    Codeword cw = angular_codeword(ris, centered_mask(8, 8), 0.0, 0.01);
    for (int m = 0; m < 8; ++m)
        CHECK(std::abs(cw.profile.theta[m] - cplx(1.0, 0.0)) < 1e-12);
    CHECK(cw.active_count() == 8);
    CHECK(cw.region.theta_lo < 0.0);
    CHECK(cw.region.theta_hi > 0.0);
}

TEST_CASE("angular_codeword: steered response peaks near the target angle")
{
    RisGeometry ris = line_array(32);
    double target = 0.4;
    Codeword cw = angular_codeword(ris, centered_mask(32, 32), target, 0.01);
    double far = 1000.0; // effectively planar wavefront
    double at_target = std::abs(codeword_response(ris, cw, polar_point(ris, target, far), 0.01));
    CHECK(at_target > 0.99 * 32.0);
    double off = std::abs(codeword_response(ris, cw, polar_point(ris, target + 0.5, far), 0.01));
    CHECK(off < 0.3 * at_target);
}

TEST_CASE("angular_codeword: inactive elements off, active unit modulus")
{
    RisGeometry ris = line_array(16);
    Codeword cw = angular_codeword(ris, centered_mask(16, 4), 0.2, 0.01);
    for (int m = 0; m < 16; ++m)
    {
        double mag = std::abs(cw.profile.theta[m]);
        if (cw.active_mask[static_cast<size_t>(m)])
            CHECK(mag == doctest::Approx(1.0).epsilon(1e-12));
        else
            CHECK(mag == doctest::Approx(0.0).epsilon(1e-12));
    }
    // Wider beam for the smaller sub-array.
    Codeword full = angular_codeword(ris, centered_mask(16, 16), 0.2, 0.01);
    CHECK(cw.region.theta_hi - cw.region.theta_lo >
          full.region.theta_hi - full.region.theta_lo);
}

TEST_CASE("polar_codeword: focal point achieves the coherent optimum")
{
    RisGeometry ris = line_array(32);
    Codeword cw = polar_codeword(ris, centered_mask(32, 32), 0.25, 0.8, 0.01);
    Vec3 focus = polar_point(ris, 0.25, 0.8);
    CHECK(std::abs(codeword_response(ris, cw, focus, 0.01)) ==
          doctest::Approx(32.0).epsilon(1e-9));
}

TEST_CASE("polar_codeword: focusing beats angular steering in the near field")
{
    RisGeometry ris = line_array(64);
    double rd = rayleigh_distance(ris.aperture_diagonal, 0.01);
    double d = 0.1 * rd;
    Vec3 user = polar_point(ris, 0.3, d);
    Codeword focused = polar_codeword(ris, centered_mask(64, 64), 0.3, d, 0.01);
    Codeword steered = angular_codeword(ris, centered_mask(64, 64), 0.3, 0.01);
    CHECK(std::abs(codeword_response(ris, focused, user, 0.01)) >
          std::abs(codeword_response(ris, steered, user, 0.01)));
}

TEST_CASE("default_polar_dmin: clamped 5% Rayleigh rule")
{
    RisGeometry ris = line_array(64);
    double rd = rayleigh_distance(ris.aperture_diagonal, 0.01);
    double d_max = 0.5 * rd;
    double d_min = default_polar_dmin(ris, 0.01, d_max);
    CHECK(d_min >= 0.01);
    CHECK(d_min <= d_max / 10.0 + 1e-15);
    CHECK(d_min <= 0.05 * rd + 1e-15);
}

TEST_CASE("build_hierarchical: layer sizes, masks, and binary partition")
{
    RisGeometry ris = line_array(64); // ceil(log2 64) = 6
    int l1 = 3, l2 = 3;
    HierarchicalCodebook cb = build_hierarchical(ris, 0.01, l1, l2, 8, 2.0);
    REQUIRE(cb.layer_count() == 6);
    for (int l = 0; l < 6; ++l)
    {
        CHECK(static_cast<int>(cb.layers[static_cast<size_t>(l)].size()) == (1 << (l + 1)));
        for (const auto &cw : cb.layers[static_cast<size_t>(l)])
            CHECK(cw.active_count() == std::min(1 << (l + 1), 64));
    }
    // Every layer's regions tile the full domain: children partition parents.
    for (int l = 0; l + 1 < 6; ++l)
        for (size_t i = 0; i < cb.layers[static_cast<size_t>(l)].size(); ++i)
        {
            const auto &parent = cb.layers[static_cast<size_t>(l)][i].region;
            const auto &c0 = cb.layers[static_cast<size_t>(l) + 1][2 * i].region;
            const auto &c1 = cb.layers[static_cast<size_t>(l) + 1][2 * i + 1].region;
            // Children stay inside the parent with no gap between them.
            CHECK(c0.theta_lo >= parent.theta_lo - 1e-12);
            CHECK(c1.theta_hi <= parent.theta_hi + 1e-12);
            CHECK(c0.d_lo >= parent.d_lo - 1e-12);
            CHECK(c1.d_hi <= parent.d_hi + 1e-12);
            bool angle_split = std::abs(c0.theta_hi - c1.theta_lo) < 1e-12 &&
                               std::abs(c0.d_lo - c1.d_lo) < 1e-12 &&
                               std::abs(c0.d_hi - c1.d_hi) < 1e-12;
            bool dist_split = std::abs(c0.d_hi - c1.d_lo) < 1e-12 &&
                              std::abs(c0.theta_lo - c1.theta_lo) < 1e-12 &&
                              std::abs(c0.theta_hi - c1.theta_hi) < 1e-12;
            CHECK((angle_split || dist_split));
        }
    // First L1 layers split only in angle.
    for (int l = 0; l < l1; ++l)
        for (const auto &cw : cb.layers[static_cast<size_t>(l)])
        {
            CHECK(cw.region.d_lo == doctest::Approx(cb.d_min).epsilon(1e-12));
            CHECK(cw.region.d_hi == doctest::Approx(cb.d_max).epsilon(1e-12));
        }
}

TEST_CASE("build_hierarchical: sin-uniform angular partition at the top")
{
    RisGeometry ris = line_array(16);
    HierarchicalCodebook cb = build_hierarchical(ris, 0.01, 2, 2, 4, 1.0);
    const auto &top = cb.layers[0];
    REQUIRE(top.size() == 2);
    CHECK(std::sin(top[0].region.theta_hi) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::sin(top[0].region.theta_lo) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::sin(top[1].region.theta_hi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_hierarchical: distance splits at the inverse-distance midpoint")
{
    RisGeometry ris = line_array(16);
    int l1 = 2, l2 = 2;
    HierarchicalCodebook cb = build_hierarchical(ris, 0.01, l1, l2, 8, 1.0);
    // Layer l1 is the first polar layer; with 8 distance samples it splits
    // distance: children halve [d_lo, d_hi] at 2 d_lo d_hi / (d_lo + d_hi).
    const auto &parent = cb.layers[static_cast<size_t>(l1) - 1][0].region;
    const auto &child = cb.layers[static_cast<size_t>(l1)][0].region;
    double mid = 2.0 * parent.d_lo * parent.d_hi / (parent.d_lo + parent.d_hi);
    CHECK(child.d_lo == doctest::Approx(parent.d_lo).epsilon(1e-12));
    CHECK(child.d_hi == doctest::Approx(mid).epsilon(1e-12));
}

TEST_CASE("build_hierarchical: invalid layer budget rejected")
{
    RisGeometry ris = line_array(64);
    CHECK_THROWS_AS(build_hierarchical(ris, 0.01, 2, 2, 8, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(build_hierarchical(ris, 0.01, 7, 0, 8, 2.0), std::invalid_argument);
}

TEST_CASE("codeword_response: focused codeword dominates across the codebook's leaf regions")
{
    RisGeometry ris = line_array(32);
    HierarchicalCodebook cb = build_hierarchical(ris, 0.01, 3, 2, 8, 1.5);
    // A user in some leaf region: the leaf containing it should respond at
    // least as strongly as distant leaves at the same layer.
    const auto &leaves = cb.layers.back();
    Vec3 user = polar_point(ris, 0.31, 0.4);
    int home = -1;
    for (size_t i = 0; i < leaves.size(); ++i)
        if (leaves[i].region.contains(0.31, 0.4))
            home = static_cast<int>(i);
    REQUIRE(home >= 0);
    // The strongest-responding leaf must be the user's cell or one of its
    // neighbours in the (sin angle, 1/distance) grid.
    int best = 0;
    double best_resp = -1.0;
    for (size_t i = 0; i < leaves.size(); ++i)
    {
        double r = std::abs(codeword_response(ris, leaves[i], user, 0.01));
        if (r > best_resp)
        {
            best_resp = r;
            best = static_cast<int>(i);
        }
    }
    const auto &hr = leaves[static_cast<size_t>(home)].region;
    const auto &br = leaves[static_cast<size_t>(best)].region;
    double sin_cell = std::sin(hr.theta_hi) - std::sin(hr.theta_lo);
    double inv_cell = 1.0 / hr.d_lo - 1.0 / hr.d_hi;
    double sin_gap = std::abs(0.5 * (std::sin(br.theta_lo) + std::sin(br.theta_hi)) -
                              0.5 * (std::sin(hr.theta_lo) + std::sin(hr.theta_hi)));
    double inv_gap = std::abs(0.5 * (1.0 / br.d_lo + 1.0 / br.d_hi) -
                              0.5 * (1.0 / hr.d_lo + 1.0 / hr.d_hi));
    CHECK(sin_gap <= 1.5 * sin_cell);
    CHECK(inv_gap <= 1.5 * inv_cell);
}
