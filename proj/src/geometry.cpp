// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/geometry.hpp"

#include <cmath>

namespace nfris
{
    double rayleigh_distance(double aperture, double lambda)
    {
        if (!(lambda > 0.0))
            throw std::domain_error("rayleigh_distance: lambda must be positive");
        if (aperture < 0.0)
            throw std::domain_error("rayleigh_distance: aperture must be non-negative");
        return 2.0 * aperture * aperture / lambda;
    }

    void plane_basis(const Vec3 &normal, Vec3 &u, Vec3 &v)
    {
        Vec3 n = normalized(normal);
        // Pick the global axis least aligned with n as the seed.
        Vec3 seed{1.0, 0.0, 0.0};
        if (std::abs(n.x) >= std::abs(n.y) && std::abs(n.x) >= std::abs(n.z))
            seed = {0.0, 1.0, 0.0};
        u = normalized(cross(seed, n));
        v = cross(n, u);
    }

    RisGeometry build_planar_array(int rows, int cols, double spacing, const Vec3 &center,
                                   const Vec3 &normal)
    {
        if (rows < 1 || cols < 1)
            throw std::domain_error("build_planar_array: rows and cols must be >= 1");
        if (!(spacing > 0.0))
            throw std::domain_error("build_planar_array: spacing must be positive");
        if (normal.norm() == 0.0)
            throw std::domain_error("build_planar_array: zero normal");

        Vec3 u, v;
        plane_basis(normal, u, v);

        RisGeometry g;
        g.rows = rows;
        g.cols = cols;
        g.spacing = spacing;
        g.center = center;
        g.normal = normalized(normal);
        g.element_positions.reserve(static_cast<size_t>(rows) * cols);

        const double row_off = 0.5 * (rows - 1);
        const double col_off = 0.5 * (cols - 1);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
            {
                double a = (c - col_off) * spacing;
                double b = (r - row_off) * spacing;
                g.element_positions.push_back(center + a * u + b * v);
            }

        double dr = rows - 1;
        double dc = cols - 1;
        g.aperture_diagonal = spacing * std::sqrt(dr * dr + dc * dc);
        return g;
    }

    RisGeometry single_antenna(const Vec3 &position)
    {
        RisGeometry g;
        g.rows = 1;
        g.cols = 1;
        g.spacing = 1.0;
        g.center = position;
        g.normal = {0.0, 0.0, 1.0};
        g.element_positions = {position};
        g.aperture_diagonal = 0.0;
        return g;
    }

    FieldRegion classify_region(const RisGeometry &geometry, const Vec3 &point, double lambda)
    {
        double d = distance(geometry.center, point);
        double rd = rayleigh_distance(geometry.aperture_diagonal, lambda);
        return d < rd ? FieldRegion::NearField : FieldRegion::FarField;
    }
}
