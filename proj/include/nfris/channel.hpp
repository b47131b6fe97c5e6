// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_CHANNEL_HPP
#define NFRIS_CHANNEL_HPP

#include "nfris/geometry.hpp"

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace nfris
{
    using cplx = std::complex<double>;

    enum class PathlossModel
    {
        UnitGain,          // beta = 1, isolates wavefront effects
        FreeSpaceCascaded  // beta = lambda^2 / ((4 pi)^2 d_rx d_tx)
    };

    // Per-RIS-element complex cascaded gains between each Tx and Rx antenna.
    // gains[m] is the Rx x Tx matrix of the m-th element's contribution.
    struct CascadedLinkSet
    {
        std::vector<Eigen::MatrixXcd> gains;
        double lambda = 0.0;
        PathlossModel model = PathlossModel::FreeSpaceCascaded;
        RisGeometry tx;
        RisGeometry ris;
        RisGeometry rx;

        int elements() const { return static_cast<int>(gains.size()); }
        int rx_count() const { return gains.empty() ? 0 : static_cast<int>(gains[0].rows()); }
        int tx_count() const { return gains.empty() ? 0 : static_cast<int>(gains[0].cols()); }

        cplx gain(int i, int j, int m) const { return gains[static_cast<size_t>(m)](i, j); }
    };

    // Unit-modulus reflection coefficients, or STAR amplitude/phase pairs.
    struct RisProfile
    {
        enum class Mode
        {
            ReflectOnly,
            Star
        };

        Mode mode = Mode::ReflectOnly;
        Eigen::VectorXcd theta;                 // ReflectOnly coefficients, |theta| = 1
        Eigen::VectorXd a_t, a_r, phi_t, phi_r; // Star coefficients, a_t^2 + a_r^2 <= 1

        int elements() const
        {
            return mode == Mode::ReflectOnly ? static_cast<int>(theta.size())
                                             : static_cast<int>(a_t.size());
        }

        cplx transmit_coefficient(int m) const
        {
            return a_t[m] * std::polar(1.0, phi_t[m]);
        }
        cplx reflect_coefficient(int m) const
        {
            return a_r[m] * std::polar(1.0, phi_r[m]);
        }

        static RisProfile identity(int n);
        static RisProfile from_phases(const Eigen::VectorXd &phases);
        void validate() const;
    };

    struct ChannelMatrix
    {
        Eigen::MatrixXcd H;
        // Set when any |H(i,j)|^2 exceeds 1 under FreeSpaceCascaded; the
        // result is still returned but lies outside model validity.
        bool outside_validity = false;
    };

    // Exact spherical-wavefront cascaded channel, one complex gain per
    // (rx antenna, tx antenna, RIS element) triple.
    CascadedLinkSet cascaded_links(const RisGeometry &tx, const RisGeometry &ris,
                                   const RisGeometry &rx, double lambda, PathlossModel model);

    // Planar-wavefront baseline: first-order phase expansion around the RIS
    // center on both links, common center-to-center path-loss amplitude.
    CascadedLinkSet farfield_links(const RisGeometry &tx, const RisGeometry &ris,
                                   const RisGeometry &rx, double lambda, PathlossModel model);

    // H[i][j] = sum_m theta_m * gains[i][j][m]. In Star mode the transmit- or
    // reflect-side coefficient is chosen by the half-space the rx antenna
    // lies in (transmit side = opposite the tx array).
    ChannelMatrix end_to_end(const CascadedLinkSet &links, const RisProfile &profile);
}

#endif
