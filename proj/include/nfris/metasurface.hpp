// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_METASURFACE_HPP
#define NFRIS_METASURFACE_HPP

#include "nfris/channel.hpp"

namespace nfris
{
    // Uniform sampling of a quasi-continuous surface aperture.
    struct SurfaceGrid
    {
        std::vector<Vec3> points;
        double cell_area = 0.0;  // dA per sample
        double total_area = 0.0; // S = sum dA
        double spacing = 0.0;
        int nx = 0; // samples along the width axis
        int ny = 0; // samples along the height axis
        Vec3 center;
        Vec3 normal{0.0, 0.0, 1.0};

        int sample_count() const { return static_cast<int>(points.size()); }
    };

    // Normalized source current, one complex sample per grid point.
    struct CurrentDistribution
    {
        Eigen::VectorXcd j;
    };

    // Linear map from surface currents to the scattered field at receiver
    // sample points, row per receiver sample.
    struct RadiationOperator
    {
        Eigen::MatrixXcd g;
        double lambda = 0.0;
    };

    struct TxParams
    {
        double directivity = 1.0; // G
        double aperture = 0.0;    // A_T, m^2
        double distance = 0.0;    // d, tx-to-surface, m
    };

    // width x height rectangle centered at `center`, sampled on a uniform
    // grid of the given spacing (cells never exceed the requested spacing).
    SurfaceGrid make_surface_grid(const Vec3 &center, const Vec3 &normal, double width,
                                  double height, double spacing);

    // Spacing lambda/samples_per_wavelength, default lambda/8.
    SurfaceGrid grid_for_aperture(const Vec3 &center, const Vec3 &normal, double width,
                                  double height, double lambda, int samples_per_wavelength = 8);

    // Scalar free-space Green kernel exp(-j k d) / (4 pi d).
    cplx green_kernel(const Vec3 &source, const Vec3 &observer, double lambda);

    // G[p][k] = g(s_k, r_p); receivers closer than lambda (reactive zone)
    // are rejected.
    RadiationOperator build_operator(const SurfaceGrid &grid, const std::vector<Vec3> &rx_samples,
                                     double lambda);

    // End-to-end power gain (G A_T / (4 pi d^2)) * |sum_k J_k g(s_k, rx) dA|^2,
    // the midpoint-rule quadrature of the radiation integral.
    double channel_gain(const SurfaceGrid &grid, const CurrentDistribution &current,
                        const TxParams &tx, const Vec3 &rx, double lambda);

    // Piecewise-constant current: J = exp(j phi_e) on every sample of
    // element e. The partition must cover the grid exactly, no overlaps.
    CurrentDistribution patch_emulation(const SurfaceGrid &grid,
                                        const std::vector<std::vector<int>> &element_partition,
                                        const std::vector<double> &per_element_phase);

    // Phase-conjugate current toward a receiver point, J_k = exp(+j k d_k).
    CurrentDistribution cophased_current(const SurfaceGrid &grid, const Vec3 &rx, double lambda);

    // Regular rows x cols partition of a grid built by make_surface_grid.
    std::vector<std::vector<int>> regular_partition(const SurfaceGrid &grid, int e_rows, int e_cols);
}

#endif
