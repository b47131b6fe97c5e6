// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_GEOMETRY_HPP
#define NFRIS_GEOMETRY_HPP

#include "nfris/vec3.hpp"

#include <vector>

namespace nfris
{
    constexpr double pi = 3.14159265358979323846;

    // Carrier wavelength in meters plus the derived wavenumber.
    struct Wavelength
    {
        double lambda;

        explicit Wavelength(double lambda_m) : lambda(lambda_m)
        {
            if (!(lambda > 0.0))
                throw std::domain_error("wavelength must be positive");
        }

        double wavenumber() const { return 2.0 * pi / lambda; }
    };

    // Planar array of elements on a regular grid. Also reused for
    // transmitter/receiver antenna arrays.
    struct RisGeometry
    {
        std::vector<Vec3> element_positions;
        double spacing = 0.0;
        int rows = 0;
        int cols = 0;
        double aperture_diagonal = 0.0; // bounding-rectangle diagonal D
        Vec3 center;
        Vec3 normal{0.0, 0.0, 1.0};

        int element_count() const { return static_cast<int>(element_positions.size()); }
    };

    enum class FieldRegion
    {
        NearField,
        FarField
    };

    // Conventional near/far boundary 2*D^2/lambda for an aperture of size D.
    double rayleigh_distance(double aperture, double lambda);

    // Centered regular rows x cols grid in the plane orthogonal to `normal`.
    RisGeometry build_planar_array(int rows, int cols, double spacing, const Vec3 &center,
                                   const Vec3 &normal);

    // Single antenna helper: a 1x1 "array" at the given position.
    RisGeometry single_antenna(const Vec3 &position);

    // NearField iff the center-to-point distance is strictly below the
    // Rayleigh distance of the geometry's aperture.
    FieldRegion classify_region(const RisGeometry &geometry, const Vec3 &point, double lambda);

    // In-plane orthonormal basis (u, v) for a given unit normal; u is the
    // array's column axis, v the row axis. Deterministic for all normals.
    void plane_basis(const Vec3 &normal, Vec3 &u, Vec3 &v);
}

#endif
