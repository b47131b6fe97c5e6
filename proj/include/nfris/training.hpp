// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_TRAINING_HPP
#define NFRIS_TRAINING_HPP

#include "nfris/codebook.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace nfris
{
    // Pilot measurement oracle for the collapsed RIS-user link: the BS beam
    // is pre-fixed toward the RIS, leaving one complex cascaded gain per
    // RIS element. Deterministic given the seed; noiseless when the noise
    // variance is zero.
    struct MeasurementOracle
    {
        Eigen::VectorXcd gains;
        double noise_variance = 0.0;
        std::uint64_t rng_seed = 0;
        std::mt19937_64 rng;

        MeasurementOracle() = default;
        MeasurementOracle(Eigen::VectorXcd g, double noise_var, std::uint64_t seed)
            : gains(std::move(g)), noise_variance(noise_var), rng_seed(seed), rng(seed)
        {
        }

        // Co-phasing optimum on the full array.
        double truth_gain() const;
    };

    // One-hop spherical-wavefront gains toward a user point, amplitude
    // lambda / (4 pi d) (UnitGain model: amplitude 1).
    MeasurementOracle make_oracle(const RisGeometry &ris, const Vec3 &user, double lambda,
                                  PathlossModel model, double noise_variance, std::uint64_t seed);

    // Collapse an existing cascaded link set onto one (rx, tx) pair.
    MeasurementOracle oracle_from_links(const CascadedLinkSet &links, int rx_index, int tx_index,
                                        double noise_variance, std::uint64_t seed);

    struct TrainingResult
    {
        Codeword chosen;
        int pilot_count = 0;
        double achieved_gain = 0.0; // noiseless power of the chosen codeword
        double truth_gain = 0.0;
    };

    // Received pilot power |sum_m theta_m g_m + n|^2 with a complex Gaussian
    // noise draw from the oracle's stream.
    double measure(MeasurementOracle &oracle, const Codeword &codeword);

    // Flat polar codebook: `angles` sin-uniform cells x `distances`
    // 1/d-uniform cells, full-array beamfocusing codeword per cell.
    std::vector<Codeword> build_flat_polar_codebook(const RisGeometry &geometry, double lambda,
                                                    int angles, int distances, double d_min,
                                                    double d_max);

    // Measures every codeword, pilot_count = codebook size.
    TrainingResult exhaustive_training(MeasurementOracle &oracle, const RisGeometry &geometry,
                                       double lambda, const std::vector<Codeword> &codebook);

    // Phase 1: sweep `angles` full-array angular codewords. Phase 2: sweep
    // `distances` beamfocusing codewords at the winning angle.
    // pilot_count = angles + distances.
    TrainingResult two_phase_training(MeasurementOracle &oracle, const RisGeometry &geometry,
                                      double lambda, int angles, int distances, double d_min,
                                      double d_max);

    // Binary descent through the hierarchical codebook; in polar layers each
    // of the b children is probed at `distance_branches` focal distances
    // spanning its interval. pilot_count = b*L1 + b*distance_branches*L2.
    TrainingResult hierarchical_training(MeasurementOracle &oracle, const RisGeometry &geometry,
                                         double lambda, const HierarchicalCodebook &codebook,
                                         int distance_branches = 4);

    enum class Protocol
    {
        Exhaustive,
        TwoPhase,
        Hierarchical
    };

    struct TrialRecord
    {
        std::string protocol;
        int trial = 0;
        int pilots = 0;
        double achieved_gain = 0.0;
        double truth_gain = 0.0;
        bool hit = false; // chosen region contains the true user position
    };

    struct ProtocolSummary
    {
        std::string protocol;
        double mean_pilots = 0.0;
        double mean_gain_ratio = 0.0;
        double misidentification_rate = 0.0;
    };

    struct EvalConfig
    {
        RisGeometry geometry;
        double lambda = 0.01;
        int angles = 64;      // A
        int distances = 8;    // S
        int l1 = 0;           // 0 -> half split (rounded up)
        int l2 = 0;
        int distance_branches = 4;
        double d_max = 0.0;   // 0 -> half the Rayleigh distance
        double noise_variance = 0.0;
        int trials = 100;
        std::uint64_t seed = 1;
        bool on_grid_users = false; // place users exactly on flat-codebook cell centers
        // Extra (L1, L2) splits to sweep for the hierarchical protocol.
        std::vector<std::pair<int, int>> extra_splits;
    };

    struct EvalResult
    {
        std::vector<TrialRecord> records;
        std::vector<ProtocolSummary> summaries;
    };

    // Seeded Monte-Carlo over user placements, uniform in angle and in
    // inverse distance within the polar domain.
    EvalResult evaluate_protocols(const EvalConfig &config, const std::vector<Protocol> &protocols);
}

#endif
