// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/codebook.hpp"

#include <cmath>

namespace nfris
{
    int Codeword::active_count() const
    {
        int n = 0;
        for (bool b : active_mask)
            n += b ? 1 : 0;
        return n;
    }

    Vec3 polar_point(const RisGeometry &geometry, double theta, double d)
    {
        Vec3 u, v;
        plane_basis(geometry.normal, u, v);
        return geometry.center + d * std::sin(theta) * u + d * std::cos(theta) * geometry.normal;
    }

    std::vector<bool> centered_mask(int total, int count)
    {
        if (count < 1 || count > total)
            throw std::invalid_argument("centered_mask: count out of range");
        std::vector<bool> mask(static_cast<size_t>(total), false);
        int start = (total - count) / 2;
        for (int i = start; i < start + count; ++i)
            mask[static_cast<size_t>(i)] = true;
        return mask;
    }

    namespace
    {
        struct ActiveAxis
        {
            Vec3 u;                // steering axis
            double centroid_x;     // mean active coordinate along u
            Vec3 centroid;         // mean active position
            std::vector<int> idx;  // active element indices
            std::vector<double> x; // coordinates of active elements along u
        };

        ActiveAxis active_axis(const RisGeometry &geometry, const std::vector<bool> &mask)
        {
            if (mask.size() != static_cast<size_t>(geometry.element_count()))
                throw std::invalid_argument("codeword: mask size mismatch");
            ActiveAxis ax;
            Vec3 v;
            plane_basis(geometry.normal, ax.u, v);
            Vec3 sum{0, 0, 0};
            for (int m = 0; m < geometry.element_count(); ++m)
                if (mask[static_cast<size_t>(m)])
                {
                    ax.idx.push_back(m);
                    ax.x.push_back(dot(geometry.element_positions[static_cast<size_t>(m)] -
                                           geometry.center,
                                       ax.u));
                    sum = sum + geometry.element_positions[static_cast<size_t>(m)];
                }
            if (ax.idx.empty())
                throw std::invalid_argument("codeword: empty active mask");
            ax.centroid = (1.0 / static_cast<double>(ax.idx.size())) * sum;
            ax.centroid_x = 0.0;
            for (double x : ax.x)
                ax.centroid_x += x;
            ax.centroid_x /= static_cast<double>(ax.x.size());
            return ax;
        }

        // Half-power beamwidth of a uniform aperture, in sin space.
        void half_power_interval(double sin0, double aperture_len, double lambda, double &lo,
                                 double &hi)
        {
            double width = aperture_len > 0.0 ? 0.886 * lambda / aperture_len : 2.0;
            lo = std::max(-1.0, sin0 - width / 2.0);
            hi = std::min(1.0, sin0 + width / 2.0);
        }
    }

    Codeword angular_codeword(const RisGeometry &geometry, const std::vector<bool> &active_mask,
                              double target_angle, double lambda, double d_lo, double d_hi)
    {
        if (!(std::abs(target_angle) < pi / 2.0))
            throw std::invalid_argument("angular_codeword: target outside front half-space");
        ActiveAxis ax = active_axis(geometry, active_mask);

        const double k = 2.0 * pi / lambda;
        const double s0 = std::sin(target_angle);

        Codeword cw;
        cw.active_mask = active_mask;
        cw.profile.mode = RisProfile::Mode::ReflectOnly;
        cw.profile.theta = Eigen::VectorXcd::Zero(geometry.element_count());
        for (size_t a = 0; a < ax.idx.size(); ++a)
            cw.profile.theta[ax.idx[a]] = std::polar(1.0, -k * s0 * (ax.x[a] - ax.centroid_x));

        double lo, hi;
        double aperture_len = static_cast<double>(ax.idx.size()) * geometry.spacing;
        half_power_interval(s0, aperture_len, lambda, lo, hi);
        cw.region = {std::asin(lo), std::asin(hi), d_lo, d_hi};
        return cw;
    }

    Codeword polar_codeword(const RisGeometry &geometry, const std::vector<bool> &active_mask,
                            double target_angle, double target_distance, double lambda)
    {
        if (!(std::abs(target_angle) < pi / 2.0))
            throw std::invalid_argument("polar_codeword: target behind surface");
        if (!(target_distance > lambda))
            throw std::invalid_argument("polar_codeword: target closer than one wavelength");
        ActiveAxis ax = active_axis(geometry, active_mask);

        const double k = 2.0 * pi / lambda;
        Vec3 p = polar_point(geometry, target_angle, target_distance);
        double ref = distance(ax.centroid, p);

        Codeword cw;
        cw.active_mask = active_mask;
        cw.profile.mode = RisProfile::Mode::ReflectOnly;
        cw.profile.theta = Eigen::VectorXcd::Zero(geometry.element_count());
        for (size_t a = 0; a < ax.idx.size(); ++a)
        {
            double d = distance(geometry.element_positions[static_cast<size_t>(ax.idx[a])], p);
            cw.profile.theta[ax.idx[a]] = std::polar(1.0, k * (d - ref));
        }

        double lo, hi;
        double aperture_len = static_cast<double>(ax.idx.size()) * geometry.spacing;
        half_power_interval(std::sin(target_angle), aperture_len, lambda, lo, hi);
        cw.region = {std::asin(lo), std::asin(hi), std::max(lambda, target_distance / 2.0),
                     2.0 * target_distance};
        return cw;
    }

    cplx codeword_response(const RisGeometry &geometry, const Codeword &codeword, const Vec3 &point,
                           double lambda)
    {
        const double k = 2.0 * pi / lambda;
        cplx acc = 0.0;
        for (int m = 0; m < geometry.element_count(); ++m)
        {
            if (!codeword.active_mask[static_cast<size_t>(m)])
                continue;
            double d = distance(geometry.element_positions[static_cast<size_t>(m)], point);
            acc += codeword.profile.theta[m] * std::polar(1.0, -k * d);
        }
        return acc;
    }

    namespace
    {
        struct CellRegion
        {
            double sin_lo, sin_hi;
            double d_lo, d_hi;
        };

        double inv_distance_mid(double d_lo, double d_hi)
        {
            return 2.0 * d_lo * d_hi / (d_lo + d_hi);
        }
    }

    double default_polar_dmin(const RisGeometry &geometry, double lambda, double d_max)
    {
        double rd = rayleigh_distance(geometry.aperture_diagonal, lambda);
        return std::max(lambda, std::min(0.05 * rd, d_max / 10.0));
    }

    HierarchicalCodebook build_hierarchical(const RisGeometry &geometry, double lambda, int l1,
                                            int l2, int distance_samples, double d_max)
    {
        const int n = geometry.element_count();
        if (n < 2)
            throw std::invalid_argument("build_hierarchical: need at least 2 elements");
        int lt = static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));
        if (l1 < 0 || l2 < 0 || l1 + l2 != lt)
            throw std::invalid_argument("build_hierarchical: L1 + L2 must equal ceil(log2(N))");
        if (distance_samples < 1)
            throw std::invalid_argument("build_hierarchical: distance_samples must be >= 1");

        double d_min = default_polar_dmin(geometry, lambda, d_max);
        if (!(d_min < d_max))
            throw std::invalid_argument("build_hierarchical: d_max too small for this aperture");

        HierarchicalCodebook book;
        book.branching = 2;
        book.l1 = l1;
        book.l2 = l2;
        book.d_min = d_min;
        book.d_max = d_max;

        std::vector<CellRegion> prev;
        int distance_splits = 0;
        for (int layer = 1; layer <= lt; ++layer)
        {
            std::vector<CellRegion> cells;
            if (layer <= l1)
            {
                int count = 1 << layer;
                for (int i = 0; i < count; ++i)
                {
                    double lo = -1.0 + 2.0 * i / count;
                    double hi = -1.0 + 2.0 * (i + 1) / count;
                    cells.push_back({lo, hi, d_min, d_max});
                }
            }
            else
            {
                // Binary split of each parent cell: refine distance (in 1/d)
                // until 2^splits reaches the requested sample count, then
                // refine angle.
                bool split_distance = (1 << distance_splits) < distance_samples;
                if (split_distance)
                    distance_splits += 1;
                for (const auto &p : prev)
                {
                    if (split_distance)
                    {
                        double mid = inv_distance_mid(p.d_lo, p.d_hi);
                        cells.push_back({p.sin_lo, p.sin_hi, p.d_lo, mid});
                        cells.push_back({p.sin_lo, p.sin_hi, mid, p.d_hi});
                    }
                    else
                    {
                        double mid = 0.5 * (p.sin_lo + p.sin_hi);
                        cells.push_back({p.sin_lo, mid, p.d_lo, p.d_hi});
                        cells.push_back({mid, p.sin_hi, p.d_lo, p.d_hi});
                    }
                }
            }

            int active = std::min(1 << layer, n);
            auto mask = centered_mask(n, active);
            std::vector<Codeword> row;
            row.reserve(cells.size());
            for (const auto &cell : cells)
            {
                double theta = std::asin(0.5 * (cell.sin_lo + cell.sin_hi));
                Codeword cw;
                if (layer <= l1)
                    cw = angular_codeword(geometry, mask, theta, lambda, d_min, d_max);
                else
                    cw = polar_codeword(geometry, mask, theta, inv_distance_mid(cell.d_lo, cell.d_hi),
                                        lambda);
                cw.layer = layer;
                cw.region = {std::asin(cell.sin_lo), std::asin(cell.sin_hi), cell.d_lo, cell.d_hi};
                row.push_back(std::move(cw));
            }
            book.layers.push_back(std::move(row));
            prev = std::move(cells);
        }
        return book;
    }
}
