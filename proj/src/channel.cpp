// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/channel.hpp"

#include <cmath>

namespace nfris
{
    RisProfile RisProfile::identity(int n)
    {
        RisProfile p;
        p.mode = Mode::ReflectOnly;
        p.theta = Eigen::VectorXcd::Ones(n);
        return p;
    }

    RisProfile RisProfile::from_phases(const Eigen::VectorXd &phases)
    {
        RisProfile p;
        p.mode = Mode::ReflectOnly;
        p.theta.resize(phases.size());
        for (Eigen::Index m = 0; m < phases.size(); ++m)
            p.theta[m] = std::polar(1.0, phases[m]);
        return p;
    }

    void RisProfile::validate() const
    {
        if (mode == Mode::ReflectOnly)
        {
            for (Eigen::Index m = 0; m < theta.size(); ++m)
                if (std::abs(std::abs(theta[m]) - 1.0) > 1e-12)
                    throw std::domain_error("RisProfile: reflect coefficients must be unit modulus");
        }
        else
        {
            for (Eigen::Index m = 0; m < a_t.size(); ++m)
            {
                if (a_t[m] < 0.0 || a_r[m] < 0.0)
                    throw std::domain_error("RisProfile: STAR amplitudes must be non-negative");
                if (a_t[m] * a_t[m] + a_r[m] * a_r[m] > 1.0 + 1e-12)
                    throw std::domain_error("RisProfile: STAR energy split exceeds unity");
            }
        }
    }

    namespace
    {
        double pathloss(PathlossModel model, double lambda, double d_rx, double d_tx)
        {
            switch (model)
            {
            case PathlossModel::UnitGain:
                return 1.0;
            case PathlossModel::FreeSpaceCascaded:
                return lambda * lambda / (16.0 * pi * pi * d_rx * d_tx);
            }
            return 1.0;
        }

        void check_separation(const RisGeometry &ris, const RisGeometry &antennas, double lambda)
        {
            for (const auto &s : ris.element_positions)
                for (const auto &a : antennas.element_positions)
                    if (distance(s, a) <= lambda / 10.0)
                        throw std::invalid_argument(
                            "cascaded_links: RIS element and antenna closer than lambda/10");
        }
    }

    CascadedLinkSet cascaded_links(const RisGeometry &tx, const RisGeometry &ris,
                                   const RisGeometry &rx, double lambda, PathlossModel model)
    {
        if (!(lambda > 0.0))
            throw std::domain_error("cascaded_links: lambda must be positive");
        check_separation(ris, tx, lambda);
        check_separation(ris, rx, lambda);

        const double k = 2.0 * pi / lambda;
        const int nr = rx.element_count();
        const int nt = tx.element_count();
        const int ne = ris.element_count();

        CascadedLinkSet links;
        links.lambda = lambda;
        links.model = model;
        links.tx = tx;
        links.ris = ris;
        links.rx = rx;
        links.gains.assign(static_cast<size_t>(ne), Eigen::MatrixXcd(nr, nt));

        for (int m = 0; m < ne; ++m)
        {
            const Vec3 &s = ris.element_positions[static_cast<size_t>(m)];
            for (int i = 0; i < nr; ++i)
            {
                double d_rx = distance(rx.element_positions[static_cast<size_t>(i)], s);
                for (int j = 0; j < nt; ++j)
                {
                    double d_tx = distance(s, tx.element_positions[static_cast<size_t>(j)]);
                    double beta = pathloss(model, lambda, d_rx, d_tx);
                    links.gains[static_cast<size_t>(m)](i, j) =
                        std::polar(beta, -k * (d_rx + d_tx));
                }
            }
        }
        return links;
    }

    CascadedLinkSet farfield_links(const RisGeometry &tx, const RisGeometry &ris,
                                   const RisGeometry &rx, double lambda, PathlossModel model)
    {
        if (!(lambda > 0.0))
            throw std::domain_error("farfield_links: lambda must be positive");
        check_separation(ris, tx, lambda);
        check_separation(ris, rx, lambda);

        const double k = 2.0 * pi / lambda;
        const int nr = rx.element_count();
        const int nt = tx.element_count();
        const int ne = ris.element_count();
        const Vec3 c = ris.center;

        CascadedLinkSet links;
        links.lambda = lambda;
        links.model = model;
        links.tx = tx;
        links.ris = ris;
        links.rx = rx;
        links.gains.assign(static_cast<size_t>(ne), Eigen::MatrixXcd(nr, nt));

        for (int i = 0; i < nr; ++i)
        {
            const Vec3 &r = rx.element_positions[static_cast<size_t>(i)];
            double d_rc = distance(r, c);
            Vec3 u_r = normalized(r - c);
            for (int j = 0; j < nt; ++j)
            {
                const Vec3 &t = tx.element_positions[static_cast<size_t>(j)];
                double d_tc = distance(t, c);
                Vec3 u_t = normalized(t - c);
                double beta = pathloss(model, lambda, d_rc, d_tc);
                for (int m = 0; m < ne; ++m)
                {
                    Vec3 off = ris.element_positions[static_cast<size_t>(m)] - c;
                    // ||r - s|| ~ ||r - c|| - u_r . (s - c), same on the tx link
                    double path = d_rc + d_tc - dot(u_r, off) - dot(u_t, off);
                    links.gains[static_cast<size_t>(m)](i, j) = std::polar(beta, -k * path);
                }
            }
        }
        return links;
    }

    ChannelMatrix end_to_end(const CascadedLinkSet &links, const RisProfile &profile)
    {
        if (profile.elements() != links.elements())
            throw std::invalid_argument("end_to_end: profile/links element count mismatch");
        profile.validate();

        const int nr = links.rx_count();
        const int nt = links.tx_count();
        ChannelMatrix out;
        out.H = Eigen::MatrixXcd::Zero(nr, nt);

        // Star mode: the transmit half-space is the side opposite the tx array.
        double tx_side = dot(links.ris.normal, links.tx.center - links.ris.center) >= 0.0 ? 1.0 : -1.0;

        for (int m = 0; m < links.elements(); ++m)
        {
            if (profile.mode == RisProfile::Mode::ReflectOnly)
            {
                out.H += profile.theta[m] * links.gains[static_cast<size_t>(m)];
            }
            else
            {
                for (int i = 0; i < nr; ++i)
                {
                    double side = dot(links.ris.normal,
                                      links.rx.element_positions[static_cast<size_t>(i)] -
                                          links.ris.center) >= 0.0
                                      ? 1.0
                                      : -1.0;
                    cplx coeff = (side == tx_side) ? profile.reflect_coefficient(m)
                                                   : profile.transmit_coefficient(m);
                    out.H.row(i) += coeff * links.gains[static_cast<size_t>(m)].row(i);
                }
            }
        }

        if (links.model == PathlossModel::FreeSpaceCascaded)
            for (int i = 0; i < nr; ++i)
                for (int j = 0; j < nt; ++j)
                    if (std::norm(out.H(i, j)) > 1.0)
                        out.outside_validity = true;
        return out;
    }
}
