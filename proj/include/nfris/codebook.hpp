// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_CODEBOOK_HPP
#define NFRIS_CODEBOOK_HPP

#include "nfris/channel.hpp"

namespace nfris
{
    // Angle interval x distance interval over the RIS front half-space.
    // Intervals are half-open: [lo, hi).
    struct PolarRegion
    {
        double theta_lo = -pi / 2.0;
        double theta_hi = pi / 2.0;
        double d_lo = 0.0;
        double d_hi = 0.0;

        bool contains(double theta, double d) const
        {
            return theta >= theta_lo && theta < theta_hi && d >= d_lo && d < d_hi;
        }
    };

    struct Codeword
    {
        RisProfile profile; // inactive entries are zero ("off")
        PolarRegion region;
        std::vector<bool> active_mask; // centered contiguous block
        int layer = 0;

        int active_count() const;
    };

    struct HierarchicalCodebook
    {
        std::vector<std::vector<Codeword>> layers; // layer l has 2^(l+1-1)... 2^(l) codewords
        int branching = 2;
        int l1 = 0; // angular layers
        int l2 = 0; // polar layers
        double d_min = 0.0;
        double d_max = 0.0;

        int layer_count() const { return static_cast<int>(layers.size()); }
    };

    // Point at polar coordinates (theta, d) in front of the array: theta is
    // measured from the normal within the (normal, column-axis) plane.
    Vec3 polar_point(const RisGeometry &geometry, double theta, double d);

    // Centered contiguous block of `count` active elements.
    std::vector<bool> centered_mask(int total, int count);

    // Planar-wavefront steering codeword toward target_angle; region is the
    // half-power beamwidth of the active sub-array, full distance domain.
    Codeword angular_codeword(const RisGeometry &geometry, const std::vector<bool> &active_mask,
                              double target_angle, double lambda, double d_lo = 1e-3,
                              double d_hi = 1e6);

    // Spherical-wavefront beamfocusing codeword toward (target_angle,
    // target_distance); phases conjugate the exact per-element path length.
    Codeword polar_codeword(const RisGeometry &geometry, const std::vector<bool> &active_mask,
                            double target_angle, double target_distance, double lambda);

    // Lower edge of the polar distance domain: 5% of the Rayleigh distance,
    // clamped to [lambda, d_max/10].
    double default_polar_dmin(const RisGeometry &geometry, double lambda, double d_max);

    // Two-stage hierarchical codebook: L1 angular layers then L2 polar
    // layers, binary region descent, sub-array size 2^layer. Requires
    // L1 + L2 = ceil(log2 N).
    HierarchicalCodebook build_hierarchical(const RisGeometry &geometry, double lambda, int l1,
                                            int l2, int distance_samples, double d_max);

    // Unit-gain spherical-propagation array response of a codeword at a point.
    cplx codeword_response(const RisGeometry &geometry, const Codeword &codeword, const Vec3 &point,
                           double lambda);
}

#endif
