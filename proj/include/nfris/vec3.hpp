// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_VEC3_HPP
#define NFRIS_VEC3_HPP

#include <cmath>
#include <stdexcept>

namespace nfris
{
    // Cartesian coordinate in meters.
    struct Vec3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        double norm() const { return std::sqrt(x * x + y * y + z * z); }

        bool finite() const
        {
            return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
        }
    };

    inline Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    inline Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    inline Vec3 operator*(double s, const Vec3 &v) { return {s * v.x, s * v.y, s * v.z}; }

    inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

    inline Vec3 cross(const Vec3 &a, const Vec3 &b)
    {
        return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    }

    inline double distance(const Vec3 &a, const Vec3 &b) { return (a - b).norm(); }

    inline Vec3 normalized(const Vec3 &v)
    {
        double n = v.norm();
        if (n == 0.0)
            throw std::domain_error("cannot normalize zero vector");
        return {v.x / n, v.y / n, v.z / n};
    }
}

#endif
