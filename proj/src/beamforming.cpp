// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/beamforming.hpp"

#include <cmath>

namespace nfris
{
    std::pair<RisProfile, SweepTrace> elementwise_power(const CascadedLinkSet &links,
                                                        int max_sweeps, double tol)
    {
        return elementwise_power(links, RisProfile::identity(links.elements()), max_sweeps, tol);
    }

    std::pair<RisProfile, SweepTrace> elementwise_power(const CascadedLinkSet &links,
                                                        const RisProfile &init, int max_sweeps,
                                                        double tol)
    {
        if (links.rx_count() != 1 || links.tx_count() != 1)
            throw std::invalid_argument("elementwise_power: expects single-user links");
        if (init.mode != RisProfile::Mode::ReflectOnly || init.elements() != links.elements())
            throw std::invalid_argument("elementwise_power: bad initial profile");
        init.validate();

        const int n = links.elements();
        Eigen::VectorXcd g(n);
        for (int m = 0; m < n; ++m)
            g[m] = links.gain(0, 0, m);

        RisProfile profile = init;
        cplx total = 0.0;
        for (int m = 0; m < n; ++m)
            total += profile.theta[m] * g[m];

        SweepTrace trace;
        double prev = std::norm(total);
        for (int sweep = 0; sweep < max_sweeps; ++sweep)
        {
            for (int m = 0; m < n; ++m)
            {
                cplx rest = total - profile.theta[m] * g[m];
                // Align this element with the residual sum; with no residual
                // (N = 1) co-phase to the real axis.
                double phase = rest == cplx(0.0) ? -std::arg(g[m])
                                                 : std::arg(rest) - std::arg(g[m]);
                profile.theta[m] = std::polar(1.0, phase);
                total = rest + profile.theta[m] * g[m];
                trace.objective_values.push_back(std::norm(total));
                trace.evaluation_count += 1;
            }
            trace.sweeps += 1;
            double obj = std::norm(total);
            if (obj - prev <= tol * std::max(prev, 1e-300))
            {
                trace.converged = true;
                break;
            }
            prev = obj;
        }
        return {profile, trace};
    }

    void SumRateProblem::validate() const
    {
        if (per_user_links.empty())
            throw std::invalid_argument("SumRateProblem: need at least one user");
        if (!(noise_power > 0.0))
            throw std::invalid_argument("SumRateProblem: noise power must be positive");
        if (weights.size() != users())
            throw std::invalid_argument("SumRateProblem: weights/users size mismatch");
        for (Eigen::Index k = 0; k < weights.size(); ++k)
            if (!(weights[k] > 0.0))
                throw std::invalid_argument("SumRateProblem: weights must be positive");
        int ne = per_user_links[0].elements();
        int nt = per_user_links[0].tx_count();
        for (const auto &links : per_user_links)
        {
            if (links.rx_count() != 1)
                throw std::invalid_argument("SumRateProblem: each user has one rx antenna");
            if (links.elements() != ne || links.tx_count() != nt)
                throw std::invalid_argument("SumRateProblem: inconsistent link dimensions");
        }
        if (nt != users())
            throw std::invalid_argument("SumRateProblem: one BS antenna per user stream required");
    }

    namespace
    {
        // Side of user k relative to the surface, +1 on the tx side
        // (reflect half-space), -1 opposite (transmit half-space).
        bool user_on_reflect_side(const CascadedLinkSet &links)
        {
            double tx_side =
                dot(links.ris.normal, links.tx.center - links.ris.center) >= 0.0 ? 1.0 : -1.0;
            double rx_side =
                dot(links.ris.normal, links.rx.center - links.ris.center) >= 0.0 ? 1.0 : -1.0;
            return rx_side == tx_side;
        }

        struct SumRateState
        {
            const SumRateProblem *problem;
            int n, k_users;
            std::vector<bool> reflect_side;     // per user
            Eigen::MatrixXcd channels;          // K x K, channels(k, i) = H_ki
            std::vector<Eigen::MatrixXcd> g;    // per user: K(tx) x N element gains

            double user_rate(int k, const Eigen::RowVectorXcd &row) const
            {
                double interference = 0.0;
                for (int i = 0; i < k_users; ++i)
                    if (i != k)
                        interference += std::norm(row[i]);
                double sinr = std::norm(row[k]) / (problem->noise_power + interference);
                return problem->weights[k] * std::log2(1.0 + sinr);
            }

            double objective() const
            {
                double total = 0.0;
                for (int k = 0; k < k_users; ++k)
                    total += user_rate(k, channels.row(k));
                return total;
            }
        };

        SumRateState make_state(const SumRateProblem &problem, const RisProfile &profile)
        {
            SumRateState st;
            st.problem = &problem;
            st.k_users = problem.users();
            st.n = problem.per_user_links[0].elements();
            st.channels = Eigen::MatrixXcd::Zero(st.k_users, st.k_users);
            for (int k = 0; k < st.k_users; ++k)
            {
                const auto &links = problem.per_user_links[static_cast<size_t>(k)];
                st.reflect_side.push_back(user_on_reflect_side(links));
                Eigen::MatrixXcd gk(st.k_users, st.n);
                for (int m = 0; m < st.n; ++m)
                    for (int i = 0; i < st.k_users; ++i)
                        gk(i, m) = links.gain(0, i, m);
                st.g.push_back(std::move(gk));
            }
            for (int k = 0; k < st.k_users; ++k)
            {
                cplx coeff;
                for (int m = 0; m < st.n; ++m)
                {
                    if (profile.mode == RisProfile::Mode::ReflectOnly)
                        coeff = profile.theta[m];
                    else
                        coeff = st.reflect_side[static_cast<size_t>(k)]
                                    ? profile.reflect_coefficient(m)
                                    : profile.transmit_coefficient(m);
                    st.channels.row(k) += coeff * st.g[static_cast<size_t>(k)].col(m).transpose();
                }
            }
            return st;
        }
    }

    double sum_rate(const SumRateProblem &problem, const RisProfile &profile)
    {
        problem.validate();
        if (profile.elements() != problem.per_user_links[0].elements())
            throw std::invalid_argument("sum_rate: profile size mismatch");
        return make_state(problem, profile).objective();
    }

    std::pair<RisProfile, SweepTrace> elementwise_sumrate(const SumRateProblem &problem,
                                                          int phase_grid, bool star_mode,
                                                          int max_sweeps, int amplitude_grid,
                                                          double tol, const RisProfile *init)
    {
        problem.validate();
        if (phase_grid < 4)
            throw std::invalid_argument("elementwise_sumrate: phase grid must be >= 4");
        if (star_mode && amplitude_grid < 2)
            throw std::invalid_argument("elementwise_sumrate: amplitude grid must be >= 2");

        const int n = problem.per_user_links[0].elements();
        RisProfile profile;
        if (init)
        {
            profile = *init;
            profile.validate();
            if (profile.elements() != n)
                throw std::invalid_argument("elementwise_sumrate: bad initial profile");
        }
        else if (!star_mode)
        {
            profile = RisProfile::identity(n);
        }
        else
        {
            profile.mode = RisProfile::Mode::Star;
            double a = std::sqrt(0.5);
            profile.a_t = Eigen::VectorXd::Constant(n, a);
            profile.a_r = Eigen::VectorXd::Constant(n, a);
            profile.phi_t = Eigen::VectorXd::Zero(n);
            profile.phi_r = Eigen::VectorXd::Zero(n);
        }

        SumRateState st = make_state(problem, profile);
        SweepTrace trace;
        double objective = st.objective();
        double prev = objective;

        auto side_objective = [&](bool reflect, const Eigen::MatrixXcd &channels) {
            double total = 0.0;
            for (int k = 0; k < st.k_users; ++k)
                if (st.reflect_side[static_cast<size_t>(k)] == reflect)
                    total += st.user_rate(k, channels.row(k));
            return total;
        };

        auto shifted_rows = [&](int m, cplx delta, bool reflect, Eigen::MatrixXcd &out) {
            for (int k = 0; k < st.k_users; ++k)
                if (st.reflect_side[static_cast<size_t>(k)] == reflect)
                    out.row(k) = st.channels.row(k) +
                                 delta * st.g[static_cast<size_t>(k)].col(m).transpose();
        };

        Eigen::MatrixXcd scratch(st.k_users, st.k_users);
        for (int sweep = 0; sweep < max_sweeps; ++sweep)
        {
            for (int m = 0; m < n; ++m)
            {
                if (!star_mode && profile.mode == RisProfile::Mode::ReflectOnly)
                {
                    cplx cur = profile.theta[m];
                    double best_obj = objective;
                    cplx best = cur;
                    for (int q = 0; q < phase_grid; ++q)
                    {
                        cplx cand = std::polar(1.0, 2.0 * pi * q / phase_grid);
                        double obj = 0.0;
                        for (int k = 0; k < st.k_users; ++k)
                        {
                            Eigen::RowVectorXcd row =
                                st.channels.row(k) +
                                (cand - cur) * st.g[static_cast<size_t>(k)].col(m).transpose();
                            obj += st.user_rate(k, row);
                            trace.evaluation_count += 1;
                        }
                        if (obj > best_obj)
                        {
                            best_obj = obj;
                            best = cand;
                        }
                    }
                    if (best != cur)
                    {
                        for (int k = 0; k < st.k_users; ++k)
                            st.channels.row(k) +=
                                (best - cur) * st.g[static_cast<size_t>(k)].col(m).transpose();
                        profile.theta[m] = best;
                        objective = best_obj;
                    }
                }
                else
                {
                    // Star update: rates are separable by half-space, each
                    // side's phase optimized on its own users for every
                    // amplitude split.
                    cplx cur_t = profile.transmit_coefficient(m);
                    cplx cur_r = profile.reflect_coefficient(m);
                    double best_obj = objective;
                    double best_at = profile.a_t[m], best_pt = profile.phi_t[m];
                    double best_ar = profile.a_r[m], best_pr = profile.phi_r[m];

                    for (int a = 0; a < amplitude_grid; ++a)
                    {
                        double a_t = static_cast<double>(a) / (amplitude_grid - 1);
                        double a_r = std::sqrt(std::max(0.0, 1.0 - a_t * a_t));
                        double side_best[2] = {-1.0, -1.0}; // [transmit, reflect]
                        double side_phase[2] = {0.0, 0.0};
                        for (int q = 0; q < phase_grid; ++q)
                        {
                            double phase = 2.0 * pi * q / phase_grid;
                            cplx cand_t = std::polar(a_t, phase);
                            cplx cand_r = std::polar(a_r, phase);
                            shifted_rows(m, cand_t - cur_t, false, scratch);
                            double obj_t = side_objective(false, scratch);
                            shifted_rows(m, cand_r - cur_r, true, scratch);
                            double obj_r = side_objective(true, scratch);
                            trace.evaluation_count += st.k_users;
                            if (obj_t > side_best[0])
                            {
                                side_best[0] = obj_t;
                                side_phase[0] = phase;
                            }
                            if (obj_r > side_best[1])
                            {
                                side_best[1] = obj_r;
                                side_phase[1] = phase;
                            }
                        }
                        double total = side_best[0] + side_best[1];
                        if (total > best_obj)
                        {
                            best_obj = total;
                            best_at = a_t;
                            best_pt = side_phase[0];
                            best_ar = a_r;
                            best_pr = side_phase[1];
                        }
                    }

                    cplx new_t = std::polar(best_at, best_pt);
                    cplx new_r = std::polar(best_ar, best_pr);
                    if (new_t != cur_t || new_r != cur_r)
                    {
                        for (int k = 0; k < st.k_users; ++k)
                        {
                            cplx delta = st.reflect_side[static_cast<size_t>(k)] ? new_r - cur_r
                                                                                 : new_t - cur_t;
                            st.channels.row(k) +=
                                delta * st.g[static_cast<size_t>(k)].col(m).transpose();
                        }
                        profile.a_t[m] = best_at;
                        profile.phi_t[m] = best_pt;
                        profile.a_r[m] = best_ar;
                        profile.phi_r[m] = best_pr;
                        objective = best_obj;
                    }
                }
                trace.objective_values.push_back(objective);
            }
            trace.sweeps += 1;
            if (objective - prev <= tol * std::max(prev, 1e-300))
            {
                trace.converged = true;
                break;
            }
            prev = objective;
        }
        return {profile, trace};
    }

    std::vector<RatePoint> near_vs_far_rate_experiment(const RateExperimentConfig &config)
    {
        if (config.users.size() < 2)
            throw std::invalid_argument("near_vs_far_rate_experiment: need >= 2 users");
        if (config.sides.empty())
            throw std::invalid_argument("near_vs_far_rate_experiment: empty size sweep");

        const int k_users = static_cast<int>(config.users.size());
        double spacing = config.spacing > 0.0 ? config.spacing : config.lambda / 2.0;
        Eigen::VectorXd weights = config.weights.size() == k_users
                                      ? config.weights
                                      : Eigen::VectorXd::Ones(k_users);

        std::vector<RatePoint> out;
        for (int side : config.sides)
        {
            RisGeometry ris = build_planar_array(side, side, spacing, {0, 0, 0}, {0, 0, 1});
            RisGeometry bs = build_planar_array(1, k_users, config.lambda / 2.0, config.bs_center,
                                                {0, 0, 1});

            SumRateProblem near_problem, far_problem;
            near_problem.weights = far_problem.weights = weights;
            near_problem.noise_power = far_problem.noise_power = config.noise_power;
            for (const auto &user : config.users)
            {
                RisGeometry rx = single_antenna(user);
                near_problem.per_user_links.push_back(
                    cascaded_links(bs, ris, rx, config.lambda, PathlossModel::FreeSpaceCascaded));
                far_problem.per_user_links.push_back(
                    farfield_links(bs, ris, rx, config.lambda, PathlossModel::FreeSpaceCascaded));
            }

            auto near_opt = elementwise_sumrate(near_problem, config.phase_grid, false,
                                                config.max_sweeps);
            auto far_opt = elementwise_sumrate(far_problem, config.phase_grid, false,
                                               config.max_sweeps);

            RatePoint pt;
            pt.elements = side * side;
            pt.near_designed_rate = sum_rate(near_problem, near_opt.first);
            pt.far_designed_rate = sum_rate(near_problem, far_opt.first);
            pt.gap = pt.near_designed_rate - pt.far_designed_rate;
            out.push_back(pt);
        }
        return out;
    }
}
