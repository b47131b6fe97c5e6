// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_BEAMFORMING_HPP
#define NFRIS_BEAMFORMING_HPP

#include "nfris/channel.hpp"

namespace nfris
{
    struct SweepTrace
    {
        std::vector<double> objective_values; // one entry per element update
        int sweeps = 0;
        bool converged = false;
        long long evaluation_count = 0; // candidate objective evaluations, counted not timed
    };

    // Single-user received-power maximization by element-wise coordinate
    // descent with the closed-form co-phasing update. Converges to
    // |sum theta_m g_m| = sum |g_m| up to a global phase.
    std::pair<RisProfile, SweepTrace> elementwise_power(const CascadedLinkSet &links,
                                                        int max_sweeps = 50, double tol = 1e-6);
    std::pair<RisProfile, SweepTrace> elementwise_power(const CascadedLinkSet &links,
                                                        const RisProfile &init, int max_sweeps,
                                                        double tol);

    // Weighted-sum-rate instance: user k receives stream k from BS antenna k
    // through the shared RIS profile; SINR_k = |H_kk|^2 / (noise + sum_{i!=k} |H_ki|^2).
    struct SumRateProblem
    {
        std::vector<CascadedLinkSet> per_user_links; // one set per user, 1 rx antenna each
        Eigen::VectorXd weights;
        double noise_power = 1.0;

        int users() const { return static_cast<int>(per_user_links.size()); }
        void validate() const;
    };

    double sum_rate(const SumRateProblem &problem, const RisProfile &profile);

    // Element-wise grid search over Q candidate phases per coefficient
    // (Star mode: Q phases per side x an amplitude-split grid with
    // a_t^2 + a_r^2 = 1). Objective is nondecreasing per update; per-sweep
    // candidate evaluation count is N*Q*K (times the amplitude grid in Star
    // mode).
    std::pair<RisProfile, SweepTrace> elementwise_sumrate(const SumRateProblem &problem,
                                                          int phase_grid = 64,
                                                          bool star_mode = false,
                                                          int max_sweeps = 50,
                                                          int amplitude_grid = 17,
                                                          double tol = 1e-6,
                                                          const RisProfile *init = nullptr);

    struct RateExperimentConfig
    {
        double lambda = 0.01;
        double spacing = 0.0; // 0 -> lambda/2
        Vec3 bs_center{0.0, 3.0, 3.0};
        std::vector<Vec3> users;
        Eigen::VectorXd weights; // empty -> all ones
        double noise_power = 1e-18;
        std::vector<int> sides;  // per-side element counts, e.g. {8, 12, 16, 20}
        int phase_grid = 64;
        int max_sweeps = 50;
    };

    struct RatePoint
    {
        int elements = 0;
        double near_designed_rate = 0.0; // profile optimized on true channels
        double far_designed_rate = 0.0;  // profile optimized on planar-wavefront channels,
                                         // evaluated on the true channels
        double gap = 0.0;
    };

    // Fig.-6-style comparison: optimize under exact spherical-wavefront
    // channels versus under the far-field approximation, evaluate both on
    // the true near-field environment.
    std::vector<RatePoint> near_vs_far_rate_experiment(const RateExperimentConfig &config);
}

#endif
