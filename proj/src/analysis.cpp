// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/analysis.hpp"
#include "nfris/parallel.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace nfris
{
    RisProfile cophase_profile(const CascadedLinkSet &links, int rx_index, int tx_index)
    {
        RisProfile p;
        p.mode = RisProfile::Mode::ReflectOnly;
        p.theta.resize(links.elements());
        for (int m = 0; m < links.elements(); ++m)
            p.theta[m] = std::polar(1.0, -std::arg(links.gain(rx_index, tx_index, m)));
        return p;
    }

    namespace
    {
        double free_space_beta(double lambda, double d_rx, double d_tx)
        {
            return lambda * lambda / (16.0 * pi * pi * d_rx * d_tx);
        }

        ScalingPoint patch_point(const SweepConfig &cfg, double size)
        {
            int side = std::max(1, static_cast<int>(std::lround(std::sqrt(size))));
            double spacing = cfg.spacing > 0.0 ? cfg.spacing : cfg.lambda / 2.0;
            RisGeometry ris = build_planar_array(side, side, spacing, {0, 0, 0}, {0, 0, 1});
            auto links = cascaded_links(single_antenna(cfg.tx_pos), ris, single_antenna(cfg.rx_pos),
                                        cfg.lambda, PathlossModel::FreeSpaceCascaded);
            auto H = end_to_end(links, cophase_profile(links, 0, 0));

            ScalingPoint pt;
            pt.size_metric = static_cast<double>(side) * side;
            pt.pr_over_pt = std::norm(H.H(0, 0));
            pt.regime = classify_region(ris, cfg.rx_pos, cfg.lambda);
            pt.outside_validity = H.outside_validity;
            return pt;
        }

        // Co-phased current over a square aperture of area S. The per-cell
        // amplitude is the free-space cascaded gain weighted by cell area
        // relative to one half-wavelength patch element, so that a surface
        // of one element's aperture reproduces the one-element patch value.
        ScalingPoint metasurface_point(const SweepConfig &cfg, double aperture)
        {
            double side = std::sqrt(aperture);
            double spacing = cfg.lambda / cfg.samples_per_wavelength;
            SurfaceGrid grid = make_surface_grid({0, 0, 0}, {0, 0, 1}, side, side, spacing);
            double ref_area = (cfg.lambda / 2.0) * (cfg.lambda / 2.0);

            double amplitude = 0.0;
            for (const auto &s : grid.points)
            {
                double d_rx = distance(s, cfg.rx_pos);
                double d_tx = distance(s, cfg.tx_pos);
                amplitude += free_space_beta(cfg.lambda, d_rx, d_tx) * grid.cell_area / ref_area;
            }

            RisGeometry aperture_geom;
            aperture_geom.center = grid.center;
            aperture_geom.aperture_diagonal = side * std::sqrt(2.0);

            ScalingPoint pt;
            pt.size_metric = aperture;
            pt.pr_over_pt = amplitude * amplitude;
            pt.regime = classify_region(aperture_geom, cfg.rx_pos, cfg.lambda);
            pt.outside_validity = pt.pr_over_pt > 1.0;
            return pt;
        }
    }

    std::vector<ScalingPoint> power_scaling_sweep(const SweepConfig &config,
                                                  const std::vector<double> &sizes, RisKind kind)
    {
        for (size_t i = 1; i < sizes.size(); ++i)
            if (!(sizes[i] > sizes[i - 1]))
                throw std::invalid_argument("power_scaling_sweep: sizes must be strictly increasing");

        std::vector<ScalingPoint> out(sizes.size());
        parallel_for(sizes.size(), [&](size_t i) {
            out[i] = kind == RisKind::Patch ? patch_point(config, sizes[i])
                                            : metasurface_point(config, sizes[i]);
        });
        return out;
    }

    EdofReport effective_dof(const Eigen::MatrixXcd &H, double tau)
    {
        if (H.size() == 0 || H.norm() == 0.0)
            throw std::domain_error("effective_dof: matrix must be nonzero");

        Eigen::BDCSVD<Eigen::MatrixXcd> svd(H);
        EdofReport report;
        report.singular_values = svd.singularValues();
        report.tau = tau;

        double total = report.singular_values.sum();
        double entropy = 0.0;
        for (Eigen::Index k = 0; k < report.singular_values.size(); ++k)
        {
            double p = report.singular_values[k] / total;
            if (p > 0.0)
                entropy -= p * std::log(p);
        }
        report.effective_rank = std::exp(entropy);

        double sigma1 = report.singular_values[0];
        for (Eigen::Index k = 0; k < report.singular_values.size(); ++k)
            if (report.singular_values[k] >= tau * sigma1)
                report.threshold_count += 1;
        return report;
    }

    Eigen::MatrixXcd los_channel_matrix(const RisGeometry &from, const RisGeometry &to,
                                        double lambda)
    {
        if (!(lambda > 0.0))
            throw std::domain_error("los_channel_matrix: lambda must be positive");
        const double k = 2.0 * pi / lambda;
        Eigen::MatrixXcd H(to.element_count(), from.element_count());
        for (int i = 0; i < to.element_count(); ++i)
            for (int m = 0; m < from.element_count(); ++m)
            {
                double d = distance(to.element_positions[static_cast<size_t>(i)],
                                    from.element_positions[static_cast<size_t>(m)]);
                H(i, m) = std::polar(lambda / (4.0 * pi * d), -k * d);
            }
        return H;
    }

    double max_edof_prisms(double v_r, double v_t, double lambda, double r, double dz_t, double dz_r)
    {
        if (!(v_r > 0.0) || !(v_t > 0.0) || !(lambda > 0.0) || !(r > 0.0) || !(dz_t > 0.0) ||
            !(dz_r > 0.0))
            throw std::domain_error("max_edof_prisms: all arguments must be positive");
        return v_r * v_t / (4.0 * lambda * lambda * r * r * dz_t * dz_r);
    }

    EdofScalingResult metasurface_edof_scaling(const std::vector<double> &apertures,
                                               const std::vector<double> &distances,
                                               const EdofScalingConfig &config)
    {
        if (apertures.empty() || distances.empty())
            throw std::invalid_argument("metasurface_edof_scaling: empty sweep");

        EdofScalingResult result;
        result.points.resize(apertures.size() * distances.size());

        parallel_for(result.points.size(), [&](size_t idx) {
            double s = apertures[idx / distances.size()];
            double r = distances[idx % distances.size()];
            double side = std::sqrt(s);
            double spacing = config.lambda / config.samples_per_wavelength;

            SurfaceGrid ris = make_surface_grid({0, 0, 0}, {0, 0, 1}, side, side, spacing);
            SurfaceGrid rx = make_surface_grid({0, 0, r}, {0, 0, 1}, config.rx_width,
                                               config.rx_height, spacing);
            auto op = build_operator(ris, rx.points, config.lambda);
            auto report = effective_dof(op.g, config.tau);
            result.points[idx] = {s, r, report.threshold_count};
        });

        // Two-variable OLS: log EDoF = a + e_S log S + e_r log r.
        int first = result.points[0].edof;
        bool constant = true;
        for (const auto &p : result.points)
            constant = constant && p.edof == first;
        result.degenerate = constant;
        if (constant)
            return result;

        double sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0;
        double mx = 0, my = 0, mz = 0;
        for (const auto &p : result.points)
        {
            mx += std::log(p.aperture);
            my += std::log(p.distance);
            mz += std::log(static_cast<double>(std::max(1, p.edof)));
        }
        double n = static_cast<double>(result.points.size());
        mx /= n;
        my /= n;
        mz /= n;
        for (const auto &p : result.points)
        {
            double x = std::log(p.aperture) - mx;
            double y = std::log(p.distance) - my;
            double z = std::log(static_cast<double>(std::max(1, p.edof))) - mz;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
            sxz += x * z;
            syz += y * z;
        }
        double det = sxx * syy - sxy * sxy;
        if (det == 0.0)
        {
            // Collinear sweep: fall back to independent 1D fits.
            result.s_exponent = sxx > 0.0 ? sxz / sxx : 0.0;
            result.r_exponent = syy > 0.0 ? syz / syy : 0.0;
        }
        else
        {
            result.s_exponent = (syy * sxz - sxy * syz) / det;
            result.r_exponent = (sxx * syz - sxy * sxz) / det;
        }
        return result;
    }

    double fit_loglog_slope(const std::vector<double> &xs, const std::vector<double> &ys)
    {
        if (xs.size() != ys.size() || xs.size() < 2)
            throw std::invalid_argument("fit_loglog_slope: need >= 2 matched points");
        double mx = 0, my = 0;
        for (size_t i = 0; i < xs.size(); ++i)
        {
            mx += std::log(xs[i]);
            my += std::log(ys[i]);
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxx = 0, sxy = 0;
        for (size_t i = 0; i < xs.size(); ++i)
        {
            double dx = std::log(xs[i]) - mx;
            sxx += dx * dx;
            sxy += dx * (std::log(ys[i]) - my);
        }
        if (sxx == 0.0)
            throw std::invalid_argument("fit_loglog_slope: degenerate abscissa");
        return sxy / sxx;
    }
}
