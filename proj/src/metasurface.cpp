// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/metasurface.hpp"
#include "nfris/parallel.hpp"

#include <cmath>

namespace nfris
{
    SurfaceGrid make_surface_grid(const Vec3 &center, const Vec3 &normal, double width,
                                  double height, double spacing)
    {
        if (!(width > 0.0) || !(height > 0.0))
            throw std::domain_error("make_surface_grid: aperture sides must be positive");
        if (!(spacing > 0.0))
            throw std::domain_error("make_surface_grid: spacing must be positive");

        Vec3 u, v;
        plane_basis(normal, u, v);

        SurfaceGrid grid;
        grid.center = center;
        grid.normal = normalized(normal);
        grid.nx = std::max(1, static_cast<int>(std::ceil(width / spacing)));
        grid.ny = std::max(1, static_cast<int>(std::ceil(height / spacing)));
        double dx = width / grid.nx;
        double dy = height / grid.ny;
        grid.spacing = std::max(dx, dy);
        grid.cell_area = dx * dy;
        grid.total_area = width * height;
        grid.points.reserve(static_cast<size_t>(grid.nx) * grid.ny);

        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix)
            {
                double a = (ix + 0.5) * dx - 0.5 * width;  // midpoint rule
                double b = (iy + 0.5) * dy - 0.5 * height;
                grid.points.push_back(center + a * u + b * v);
            }
        return grid;
    }

    SurfaceGrid grid_for_aperture(const Vec3 &center, const Vec3 &normal, double width,
                                  double height, double lambda, int samples_per_wavelength)
    {
        if (samples_per_wavelength < 1)
            throw std::domain_error("grid_for_aperture: samples_per_wavelength must be >= 1");
        return make_surface_grid(center, normal, width, height, lambda / samples_per_wavelength);
    }

    cplx green_kernel(const Vec3 &source, const Vec3 &observer, double lambda)
    {
        double d = distance(source, observer);
        return std::polar(1.0 / (4.0 * pi * d), -2.0 * pi * d / lambda);
    }

    RadiationOperator build_operator(const SurfaceGrid &grid, const std::vector<Vec3> &rx_samples,
                                     double lambda)
    {
        if (!(lambda > 0.0))
            throw std::domain_error("build_operator: lambda must be positive");
        for (const auto &r : rx_samples)
            for (const auto &s : grid.points)
                if (distance(s, r) < lambda)
                    throw std::domain_error("build_operator: receiver inside reactive zone (< lambda)");

        RadiationOperator op;
        op.lambda = lambda;
        op.g.resize(static_cast<Eigen::Index>(rx_samples.size()), grid.sample_count());
        parallel_for(rx_samples.size(), [&](size_t p) {
            for (int k = 0; k < grid.sample_count(); ++k)
                op.g(static_cast<Eigen::Index>(p), k) =
                    green_kernel(grid.points[static_cast<size_t>(k)], rx_samples[p], lambda);
        });
        return op;
    }

    double channel_gain(const SurfaceGrid &grid, const CurrentDistribution &current,
                        const TxParams &tx, const Vec3 &rx, double lambda)
    {
        if (current.j.size() != grid.sample_count())
            throw std::invalid_argument("channel_gain: grid/current size mismatch");
        if (!(tx.distance > 0.0))
            throw std::domain_error("channel_gain: tx distance must be positive");

        cplx field = 0.0;
        for (int k = 0; k < grid.sample_count(); ++k)
            field += current.j[k] * green_kernel(grid.points[static_cast<size_t>(k)], rx, lambda) *
                     grid.cell_area;

        double capture = tx.directivity * tx.aperture / (4.0 * pi * tx.distance * tx.distance);
        return capture * std::norm(field);
    }

    CurrentDistribution patch_emulation(const SurfaceGrid &grid,
                                        const std::vector<std::vector<int>> &element_partition,
                                        const std::vector<double> &per_element_phase)
    {
        if (element_partition.size() != per_element_phase.size())
            throw std::invalid_argument("patch_emulation: partition/phase size mismatch");

        std::vector<int> coverage(static_cast<size_t>(grid.sample_count()), 0);
        CurrentDistribution current;
        current.j.resize(grid.sample_count());
        for (size_t e = 0; e < element_partition.size(); ++e)
        {
            cplx j = std::polar(1.0, per_element_phase[e]);
            for (int k : element_partition[e])
            {
                if (k < 0 || k >= grid.sample_count())
                    throw std::invalid_argument("patch_emulation: sample index out of range");
                coverage[static_cast<size_t>(k)] += 1;
                current.j[k] = j;
            }
        }
        for (int c : coverage)
            if (c != 1)
                throw std::invalid_argument("patch_emulation: partition must cover grid exactly");
        return current;
    }

    CurrentDistribution cophased_current(const SurfaceGrid &grid, const Vec3 &rx, double lambda)
    {
        CurrentDistribution current;
        current.j.resize(grid.sample_count());
        for (int k = 0; k < grid.sample_count(); ++k)
        {
            double d = distance(grid.points[static_cast<size_t>(k)], rx);
            current.j[k] = std::polar(1.0, 2.0 * pi * d / lambda);
        }
        return current;
    }

    std::vector<std::vector<int>> regular_partition(const SurfaceGrid &grid, int e_rows, int e_cols)
    {
        if (e_rows < 1 || e_cols < 1)
            throw std::domain_error("regular_partition: element grid must be >= 1x1");
        if (grid.nx % e_cols != 0 || grid.ny % e_rows != 0)
            throw std::invalid_argument("regular_partition: element grid must divide sample grid");

        int per_x = grid.nx / e_cols;
        int per_y = grid.ny / e_rows;
        std::vector<std::vector<int>> partition(static_cast<size_t>(e_rows) * e_cols);
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix)
            {
                int e = (iy / per_y) * e_cols + (ix / per_x);
                partition[static_cast<size_t>(e)].push_back(iy * grid.nx + ix);
            }
        return partition;
    }
}
