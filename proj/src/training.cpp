// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/training.hpp"

#include <algorithm>
#include <cmath>

namespace nfris
{
    double MeasurementOracle::truth_gain() const
    {
        double sum = 0.0;
        for (Eigen::Index m = 0; m < gains.size(); ++m)
            sum += std::abs(gains[m]);
        return sum * sum;
    }

    MeasurementOracle make_oracle(const RisGeometry &ris, const Vec3 &user, double lambda,
                                  PathlossModel model, double noise_variance, std::uint64_t seed)
    {
        const double k = 2.0 * pi / lambda;
        Eigen::VectorXcd g(ris.element_count());
        for (int m = 0; m < ris.element_count(); ++m)
        {
            double d = distance(ris.element_positions[static_cast<size_t>(m)], user);
            double beta = model == PathlossModel::UnitGain ? 1.0 : lambda / (4.0 * pi * d);
            g[m] = std::polar(beta, -k * d);
        }
        return MeasurementOracle(std::move(g), noise_variance, seed);
    }

    MeasurementOracle oracle_from_links(const CascadedLinkSet &links, int rx_index, int tx_index,
                                        double noise_variance, std::uint64_t seed)
    {
        Eigen::VectorXcd g(links.elements());
        for (int m = 0; m < links.elements(); ++m)
            g[m] = links.gain(rx_index, tx_index, m);
        return MeasurementOracle(std::move(g), noise_variance, seed);
    }

    namespace
    {
        double noiseless_power(const MeasurementOracle &oracle, const Codeword &cw)
        {
            cplx s = 0.0;
            for (Eigen::Index m = 0; m < oracle.gains.size(); ++m)
                s += cw.profile.theta[m] * oracle.gains[m];
            return std::norm(s);
        }

        double sin_cell_mid(int index, int cells)
        {
            return -1.0 + 2.0 * (index + 0.5) / cells;
        }

        // Inverse-distance grid from d_max down to d_min; midpoint of cell s.
        double inv_cell_mid(int index, int cells, double d_min, double d_max)
        {
            double inv_lo = 1.0 / d_max;
            double step = (1.0 / d_min - 1.0 / d_max) / cells;
            return 1.0 / (inv_lo + (index + 0.5) * step);
        }

        void inv_cell_bounds(int index, int cells, double d_min, double d_max, double &d_lo,
                             double &d_hi)
        {
            double inv_lo = 1.0 / d_max;
            double step = (1.0 / d_min - 1.0 / d_max) / cells;
            d_hi = 1.0 / (inv_lo + index * step);
            d_lo = 1.0 / (inv_lo + (index + 1) * step);
        }
    }

    double measure(MeasurementOracle &oracle, const Codeword &codeword)
    {
        if (codeword.profile.theta.size() != oracle.gains.size())
            throw std::invalid_argument("measure: codeword incompatible with oracle");
        cplx s = 0.0;
        for (Eigen::Index m = 0; m < oracle.gains.size(); ++m)
            s += codeword.profile.theta[m] * oracle.gains[m];
        if (oracle.noise_variance > 0.0)
        {
            std::normal_distribution<double> n(0.0, std::sqrt(oracle.noise_variance / 2.0));
            s += cplx(n(oracle.rng), n(oracle.rng));
        }
        return std::norm(s);
    }

    std::vector<Codeword> build_flat_polar_codebook(const RisGeometry &geometry, double lambda,
                                                    int angles, int distances, double d_min,
                                                    double d_max)
    {
        if (angles < 1 || distances < 1)
            throw std::invalid_argument("build_flat_polar_codebook: empty grid");
        std::vector<bool> mask(static_cast<size_t>(geometry.element_count()), true);
        std::vector<Codeword> book;
        book.reserve(static_cast<size_t>(angles) * distances);
        for (int a = 0; a < angles; ++a)
        {
            double sin_lo = -1.0 + 2.0 * a / angles;
            double sin_hi = -1.0 + 2.0 * (a + 1) / angles;
            double theta = std::asin(sin_cell_mid(a, angles));
            for (int s = 0; s < distances; ++s)
            {
                double d = inv_cell_mid(s, distances, d_min, d_max);
                Codeword cw = polar_codeword(geometry, mask, theta, d, lambda);
                double d_lo, d_hi;
                inv_cell_bounds(s, distances, d_min, d_max, d_lo, d_hi);
                cw.region = {std::asin(sin_lo), std::asin(sin_hi), d_lo, d_hi};
                book.push_back(std::move(cw));
            }
        }
        return book;
    }

    TrainingResult exhaustive_training(MeasurementOracle &oracle, const RisGeometry &,
                                       double, const std::vector<Codeword> &codebook)
    {
        if (codebook.empty())
            throw std::invalid_argument("exhaustive_training: empty codebook");
        TrainingResult result;
        double best = -1.0;
        for (const auto &cw : codebook)
        {
            double p = measure(oracle, cw);
            result.pilot_count += 1;
            if (p > best)
            {
                best = p;
                result.chosen = cw;
            }
        }
        result.achieved_gain = noiseless_power(oracle, result.chosen);
        result.truth_gain = oracle.truth_gain();
        return result;
    }

    TrainingResult two_phase_training(MeasurementOracle &oracle, const RisGeometry &geometry,
                                      double lambda, int angles, int distances, double d_min,
                                      double d_max)
    {
        if (angles < 1 || distances < 1)
            throw std::invalid_argument("two_phase_training: need angles, distances >= 1");
        std::vector<bool> mask(static_cast<size_t>(geometry.element_count()), true);

        TrainingResult result;
        int best_angle = 0;
        double best = -1.0;
        for (int a = 0; a < angles; ++a)
        {
            double theta = std::asin(sin_cell_mid(a, angles));
            Codeword cw = angular_codeword(geometry, mask, theta, lambda, d_min, d_max);
            double p = measure(oracle, cw);
            result.pilot_count += 1;
            if (p > best)
            {
                best = p;
                best_angle = a;
            }
        }

        double theta = std::asin(sin_cell_mid(best_angle, angles));
        double sin_lo = -1.0 + 2.0 * best_angle / angles;
        double sin_hi = -1.0 + 2.0 * (best_angle + 1) / angles;
        best = -1.0;
        for (int s = 0; s < distances; ++s)
        {
            double d = inv_cell_mid(s, distances, d_min, d_max);
            Codeword cw = polar_codeword(geometry, mask, theta, d, lambda);
            double d_lo, d_hi;
            inv_cell_bounds(s, distances, d_min, d_max, d_lo, d_hi);
            cw.region = {std::asin(sin_lo), std::asin(sin_hi), d_lo, d_hi};
            double p = measure(oracle, cw);
            result.pilot_count += 1;
            if (p > best)
            {
                best = p;
                result.chosen = cw;
            }
        }
        result.achieved_gain = noiseless_power(oracle, result.chosen);
        result.truth_gain = oracle.truth_gain();
        return result;
    }

    TrainingResult hierarchical_training(MeasurementOracle &oracle, const RisGeometry &geometry,
                                         double lambda, const HierarchicalCodebook &codebook,
                                         int distance_branches)
    {
        if (codebook.layers.empty())
            throw std::invalid_argument("hierarchical_training: empty codebook");
        if (distance_branches < 1)
            throw std::invalid_argument("hierarchical_training: distance_branches must be >= 1");

        TrainingResult result;
        int cur = 0;
        for (int layer = 0; layer < codebook.layer_count(); ++layer)
        {
            const auto &row = codebook.layers[static_cast<size_t>(layer)];
            int child_base = layer == 0 ? 0 : 2 * cur;
            double best = -1.0;
            int best_child = child_base;

            if (layer < codebook.l1)
            {
                for (int c = child_base; c < child_base + 2; ++c)
                {
                    double p = measure(oracle, row[static_cast<size_t>(c)]);
                    result.pilot_count += 1;
                    if (p > best)
                    {
                        best = p;
                        best_child = c;
                        result.chosen = row[static_cast<size_t>(c)];
                    }
                }
            }
            else
            {
                // Probe each child at several focal distances across its
                // distance interval, uniform in 1/d.
                for (int c = child_base; c < child_base + 2; ++c)
                {
                    const Codeword &child = row[static_cast<size_t>(c)];
                    double theta =
                        std::asin(0.5 * (std::sin(child.region.theta_lo) +
                                         std::sin(child.region.theta_hi)));
                    for (int b = 0; b < distance_branches; ++b)
                    {
                        double d = inv_cell_mid(b, distance_branches, child.region.d_lo,
                                                child.region.d_hi);
                        Codeword probe =
                            polar_codeword(geometry, child.active_mask, theta, d, lambda);
                        probe.layer = child.layer;
                        probe.region = child.region;
                        double p = measure(oracle, probe);
                        result.pilot_count += 1;
                        if (p > best)
                        {
                            best = p;
                            best_child = c;
                            result.chosen = probe;
                        }
                    }
                }
            }
            cur = best_child;
        }

        result.achieved_gain = noiseless_power(oracle, result.chosen);
        result.truth_gain = oracle.truth_gain();
        return result;
    }

    namespace
    {
        std::uint64_t trial_seed(std::uint64_t base, int trial, int protocol)
        {
            std::uint64_t s = base;
            s = s * 6364136223846793005ULL + static_cast<std::uint64_t>(trial) * 1442695040888963407ULL;
            s ^= static_cast<std::uint64_t>(protocol) * 0x9e3779b97f4a7c15ULL;
            return s;
        }
    }

    EvalResult evaluate_protocols(const EvalConfig &config, const std::vector<Protocol> &protocols)
    {
        if (config.trials < 1)
            throw std::invalid_argument("evaluate_protocols: trials must be >= 1");

        const RisGeometry &geom = config.geometry;
        const int n = geom.element_count();
        int lt = static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));
        int l2 = config.l2 > 0 ? config.l2 : (lt + 1) / 2;
        int l1 = config.l1 > 0 ? config.l1 : lt - l2;
        double d_max = config.d_max > 0.0
                           ? config.d_max
                           : 0.5 * rayleigh_distance(geom.aperture_diagonal, config.lambda);
        double d_min = default_polar_dmin(geom, config.lambda, d_max);

        auto flat =
            build_flat_polar_codebook(geom, config.lambda, config.angles, config.distances, d_min, d_max);

        struct HierVariant
        {
            std::string name;
            HierarchicalCodebook book;
        };
        std::vector<HierVariant> hier;
        bool want_hier = false;
        for (Protocol p : protocols)
            want_hier = want_hier || p == Protocol::Hierarchical;
        if (want_hier)
        {
            hier.push_back({"hierarchical",
                            build_hierarchical(geom, config.lambda, l1, l2, config.distances, d_max)});
            for (auto [a, b] : config.extra_splits)
                hier.push_back({"hierarchical_L1=" + std::to_string(a) + "_L2=" + std::to_string(b),
                                build_hierarchical(geom, config.lambda, a, b, config.distances, d_max)});
        }

        EvalResult result;
        std::mt19937_64 placement_rng(config.seed);

        for (int trial = 0; trial < config.trials; ++trial)
        {
            double theta, d;
            if (config.on_grid_users)
            {
                int a = static_cast<int>(placement_rng() % static_cast<std::uint64_t>(config.angles));
                int s =
                    static_cast<int>(placement_rng() % static_cast<std::uint64_t>(config.distances));
                theta = std::asin(sin_cell_mid(a, config.angles));
                d = inv_cell_mid(s, config.distances, d_min, d_max);
            }
            else
            {
                std::uniform_real_distribution<double> u_sin(-1.0, 1.0);
                std::uniform_real_distribution<double> u_inv(1.0 / d_max, 1.0 / d_min);
                theta = std::asin(u_sin(placement_rng));
                d = 1.0 / u_inv(placement_rng);
            }
            Vec3 user = polar_point(geom, theta, d);

            int proto_idx = 0;
            auto run = [&](const std::string &name, auto &&fn) {
                auto oracle = make_oracle(geom, user, config.lambda,
                                          PathlossModel::FreeSpaceCascaded, config.noise_variance,
                                          trial_seed(config.seed, trial, proto_idx));
                TrainingResult r = fn(oracle);
                TrialRecord rec;
                rec.protocol = name;
                rec.trial = trial;
                rec.pilots = r.pilot_count;
                rec.achieved_gain = r.achieved_gain;
                rec.truth_gain = r.truth_gain;
                rec.hit = r.chosen.region.contains(theta, d);
                result.records.push_back(std::move(rec));
                proto_idx += 1;
            };

            for (Protocol p : protocols)
            {
                switch (p)
                {
                case Protocol::Exhaustive:
                    run("exhaustive", [&](MeasurementOracle &o) {
                        return exhaustive_training(o, geom, config.lambda, flat);
                    });
                    break;
                case Protocol::TwoPhase:
                    run("two-phase", [&](MeasurementOracle &o) {
                        return two_phase_training(o, geom, config.lambda, config.angles,
                                                  config.distances, d_min, d_max);
                    });
                    break;
                case Protocol::Hierarchical:
                    for (const auto &variant : hier)
                        run(variant.name, [&](MeasurementOracle &o) {
                            return hierarchical_training(o, geom, config.lambda, variant.book,
                                                         config.distance_branches);
                        });
                    break;
                }
            }
        }

        // Per-protocol summary rows.
        std::vector<std::string> names;
        for (const auto &rec : result.records)
            if (std::find(names.begin(), names.end(), rec.protocol) == names.end())
                names.push_back(rec.protocol);
        for (const auto &name : names)
        {
            ProtocolSummary s;
            s.protocol = name;
            int count = 0, hits = 0;
            for (const auto &rec : result.records)
                if (rec.protocol == name)
                {
                    count += 1;
                    hits += rec.hit ? 1 : 0;
                    s.mean_pilots += rec.pilots;
                    s.mean_gain_ratio += rec.truth_gain > 0.0 ? rec.achieved_gain / rec.truth_gain : 0.0;
                }
            s.mean_pilots /= count;
            s.mean_gain_ratio /= count;
            s.misidentification_rate = 1.0 - static_cast<double>(hits) / count;
            result.summaries.push_back(std::move(s));
        }
        return result;
    }
}
