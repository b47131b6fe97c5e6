// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_ANALYSIS_HPP
#define NFRIS_ANALYSIS_HPP

#include "nfris/metasurface.hpp"

namespace nfris
{
    enum class RisKind
    {
        Patch,
        Metasurface
    };

    struct ScalingPoint
    {
        double size_metric = 0.0; // element count (patch) or aperture m^2 (metasurface)
        double pr_over_pt = 0.0;
        FieldRegion regime = FieldRegion::FarField;
        bool outside_validity = false;
    };

    struct SweepConfig
    {
        double lambda = 0.01;
        Vec3 tx_pos{0.0, 0.0, 10.0};
        Vec3 rx_pos{0.0, 0.0, 10.0};
        double spacing = 0.0; // patch pitch; 0 -> lambda/2
        int samples_per_wavelength = 8;
    };

    struct EdofReport
    {
        Eigen::VectorXd singular_values; // non-increasing
        double effective_rank = 0.0;     // exp(entropy of the normalized spectrum)
        int threshold_count = 0;         // #{k : sigma_k >= tau * sigma_1}
        double tau = 0.0;
    };

    struct EdofScalingConfig
    {
        double lambda = 0.05;
        double rx_width = 0.2;
        double rx_height = 0.2;
        int samples_per_wavelength = 4;
        double tau = 0.01;
    };

    struct EdofScalingResult
    {
        struct Point
        {
            double aperture;
            double distance;
            int edof;
        };
        std::vector<Point> points;
        double s_exponent = 0.0;
        double r_exponent = 0.0;
        bool degenerate = false; // constant EDoF across the sweep
    };

    // theta_m = exp(-j arg(gains[i][j][m])): all contributions of the (i,j)
    // link add coherently, |H[i][j]| = sum_m |gains[i][j][m]|.
    RisProfile cophase_profile(const CascadedLinkSet &links, int rx_index, int tx_index);

    // Co-phased P_r/P_t versus RIS size at fixed transceiver positions.
    // Patch: sizes are element counts (rounded to square grids). Metasurface:
    // sizes are aperture areas in m^2 of a square surface, with the current
    // excitation normalized so one half-wavelength cell matches one patch
    // element.
    std::vector<ScalingPoint> power_scaling_sweep(const SweepConfig &config,
                                                  const std::vector<double> &sizes, RisKind kind);

    EdofReport effective_dof(const Eigen::MatrixXcd &H, double tau = 0.01);

    // One-hop LoS MIMO matrix between two arrays; entry (i, m) is
    // lambda/(4 pi d) exp(-j k d) for the m-th `from` and i-th `to` element.
    Eigen::MatrixXcd los_channel_matrix(const RisGeometry &from, const RisGeometry &to,
                                        double lambda);

    // Prism-to-prism EDoF ceiling V_R V_T / (4 (lambda r)^2 dz_T dz_R).
    double max_edof_prisms(double v_r, double v_t, double lambda, double r, double dz_t,
                           double dz_r);

    // ThresholdCount EDoF of the radiation operator between a square RIS of
    // aperture S and a parallel receiver patch at distance r, with fitted
    // log-log exponents in S and r over the full (S, r) product sweep.
    EdofScalingResult metasurface_edof_scaling(const std::vector<double> &apertures,
                                               const std::vector<double> &distances,
                                               const EdofScalingConfig &config);

    // Ordinary least-squares slope of log(y) vs log(x).
    double fit_loglog_slope(const std::vector<double> &xs, const std::vector<double> &ys);
}

#endif
