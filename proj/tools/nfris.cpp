// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations
//
// Configuration-driven experiment runner. Subcommands: region,
// power-scaling, edof, train, beamform. Exit codes: 0 success, 2 config
// error, 3 runtime error.

#include "nfris/analysis.hpp"
#include "nfris/beamforming.hpp"
#include "nfris/csv.hpp"
#include "nfris/training.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::json;

namespace
{
    struct ConfigError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct RunContext
    {
        json config;
        std::string out_dir = ".";
        std::uint64_t seed = 0;
        std::uint64_t config_hash = 0;

        void write_csv(const std::string &name, const std::string &header,
                       const std::string &body) const
        {
            std::string content = nfris::manifest_line(config_hash, seed) + header + "\n" + body;
            nfris::write_text_atomic(out_dir + "/" + name, content);
        }
    };

    // Strict schema: any unrecognized key fails validation.
    void check_keys(const json &obj, const std::string &path,
                    const std::vector<std::string> &allowed)
    {
        if (!obj.is_object())
            throw ConfigError(path + ": expected an object");
        for (const auto &item : obj.items())
        {
            bool known = false;
            for (const auto &k : allowed)
                known = known || k == item.key();
            if (!known)
                throw ConfigError(path + "." + item.key() + ": unknown key");
        }
    }

    const json &require(const json &obj, const std::string &key, const std::string &path)
    {
        if (!obj.contains(key))
            throw ConfigError(path + "." + key + ": missing required key");
        return obj.at(key);
    }

    double get_number(const json &obj, const std::string &key, const std::string &path)
    {
        const json &v = require(obj, key, path);
        if (!v.is_number())
            throw ConfigError(path + "." + key + ": expected a number");
        return v.get<double>();
    }

    double get_number_or(const json &obj, const std::string &key, double fallback)
    {
        return obj.contains(key) ? obj.at(key).get<double>() : fallback;
    }

    int get_int_or(const json &obj, const std::string &key, int fallback)
    {
        return obj.contains(key) ? obj.at(key).get<int>() : fallback;
    }

    nfris::Vec3 get_vec3(const json &v, const std::string &path)
    {
        if (!v.is_array() || v.size() != 3)
            throw ConfigError(path + ": expected [x, y, z]");
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    struct CommonConfig
    {
        double lambda = 0.0;
        int rows = 1, cols = 1;
        double spacing = 0.0;
    };

    CommonConfig parse_geometry(const json &config)
    {
        const json &g = require(config, "geometry", "config");
        check_keys(g, "geometry", {"rows", "cols", "spacing", "lambda"});
        CommonConfig c;
        c.lambda = get_number(g, "lambda", "geometry");
        if (!(c.lambda > 0.0))
            throw ConfigError("geometry.lambda: must be positive");
        c.rows = get_int_or(g, "rows", 1);
        c.cols = get_int_or(g, "cols", 1);
        c.spacing = get_number_or(g, "spacing", c.lambda / 2.0);
        if (c.rows < 1 || c.cols < 1 || !(c.spacing > 0.0))
            throw ConfigError("geometry: rows, cols, spacing must be positive");
        return c;
    }

    const json &experiment_block(const json &config, const std::vector<std::string> &allowed)
    {
        const json &e = require(config, "experiment", "config");
        check_keys(e, "experiment", allowed);
        return e;
    }

    void check_top_level(const json &config)
    {
        check_keys(config, "config", {"geometry", "placement", "experiment", "seed", "output"});
    }

    int run_region(const RunContext &ctx)
    {
        auto geom = parse_geometry(ctx.config);
        const json &e = experiment_block(ctx.config, {"aperture_diagonal", "point"});

        double d_ap;
        if (e.contains("aperture_diagonal"))
            d_ap = e.at("aperture_diagonal").get<double>();
        else
            d_ap = nfris::build_planar_array(geom.rows, geom.cols, geom.spacing, {0, 0, 0},
                                             {0, 0, 1})
                       .aperture_diagonal;

        double rd = nfris::rayleigh_distance(d_ap, geom.lambda);
        std::cout << "aperture_diagonal_m=" << nfris::format_double(d_ap) << "\n";
        std::cout << "rayleigh_distance_m=" << nfris::format_double(rd) << "\n";
        if (e.contains("point"))
        {
            nfris::Vec3 p = get_vec3(e.at("point"), "experiment.point");
            nfris::RisGeometry g = nfris::build_planar_array(geom.rows, geom.cols, geom.spacing,
                                                             {0, 0, 0}, {0, 0, 1});
            g.aperture_diagonal = d_ap;
            auto region = nfris::classify_region(g, p, geom.lambda);
            std::cout << "region="
                      << (region == nfris::FieldRegion::NearField ? "near-field" : "far-field")
                      << "\n";
        }
        return 0;
    }

    int run_power_scaling(const RunContext &ctx)
    {
        auto geom = parse_geometry(ctx.config);
        const json &p = require(ctx.config, "placement", "config");
        check_keys(p, "placement", {"tx", "rx", "users"});
        const json &e = experiment_block(ctx.config, {"sizes", "ris_kind", "samples_per_wavelength"});

        nfris::SweepConfig cfg;
        cfg.lambda = geom.lambda;
        cfg.spacing = geom.spacing;
        cfg.tx_pos = get_vec3(require(p, "tx", "placement"), "placement.tx");
        cfg.rx_pos = get_vec3(require(p, "rx", "placement"), "placement.rx");
        cfg.samples_per_wavelength = get_int_or(e, "samples_per_wavelength", 8);

        std::vector<double> sizes;
        for (const auto &s : require(e, "sizes", "experiment"))
            sizes.push_back(s.get<double>());
        std::string kind_s = e.contains("ris_kind") ? e.at("ris_kind").get<std::string>() : "patch";
        nfris::RisKind kind;
        if (kind_s == "patch")
            kind = nfris::RisKind::Patch;
        else if (kind_s == "metasurface")
            kind = nfris::RisKind::Metasurface;
        else
            throw ConfigError("experiment.ris_kind: must be \"patch\" or \"metasurface\"");

        auto points = nfris::power_scaling_sweep(cfg, sizes, kind);
        std::ostringstream body;
        for (const auto &pt : points)
            body << nfris::format_double(pt.size_metric) << ","
                 << nfris::format_double(pt.pr_over_pt) << ","
                 << (pt.regime == nfris::FieldRegion::NearField ? "near" : "far") << "\n";
        ctx.write_csv("power_scaling.csv", "size_metric,pr_over_pt,regime", body.str());
        return 0;
    }

    int run_edof(const RunContext &ctx)
    {
        auto geom = parse_geometry(ctx.config);
        const json &e = experiment_block(
            ctx.config, {"rx_rows", "rx_cols", "rx_spacing", "distances", "apertures", "rx_width",
                         "rx_height", "samples_per_wavelength", "tau"});
        double tau = get_number_or(e, "tau", 0.01);

        std::vector<double> distances;
        for (const auto &d : require(e, "distances", "experiment"))
            distances.push_back(d.get<double>());

        if (e.contains("apertures"))
        {
            // Radiation operator EDoF vs aperture and distance.
            nfris::EdofScalingConfig cfg;
            cfg.lambda = geom.lambda;
            cfg.rx_width = get_number_or(e, "rx_width", 0.2);
            cfg.rx_height = get_number_or(e, "rx_height", 0.2);
            cfg.samples_per_wavelength = get_int_or(e, "samples_per_wavelength", 4);
            cfg.tau = tau;
            std::vector<double> apertures;
            for (const auto &a : e.at("apertures"))
                apertures.push_back(a.get<double>());

            auto result = nfris::metasurface_edof_scaling(apertures, distances, cfg);
            std::ostringstream body;
            for (const auto &pt : result.points)
                body << nfris::format_double(pt.aperture) << ","
                     << nfris::format_double(pt.distance) << "," << pt.edof << "\n";
            ctx.write_csv("edof_scaling.csv", "aperture,distance,edof", body.str());
            std::ostringstream fit;
            fit << nfris::format_double(result.s_exponent) << ","
                << nfris::format_double(result.r_exponent) << ","
                << (result.degenerate ? 1 : 0) << "\n";
            ctx.write_csv("edof_fit.csv", "s_exponent,r_exponent,degenerate", fit.str());
            return 0;
        }

        // Effective rank of the RIS-to-receiver LoS MIMO channel vs distance.
        nfris::RisGeometry ris = nfris::build_planar_array(geom.rows, geom.cols, geom.spacing,
                                                           {0, 0, 0}, {0, 0, 1});
        int rx_rows = get_int_or(e, "rx_rows", 2);
        int rx_cols = get_int_or(e, "rx_cols", 2);
        double rx_spacing = get_number_or(e, "rx_spacing", geom.lambda / 2.0);
        std::ostringstream body, sigma_body;
        for (double d : distances)
        {
            nfris::RisGeometry rx = nfris::build_planar_array(rx_rows, rx_cols, rx_spacing,
                                                              {0, 0, d}, {0, 0, 1});
            auto H = nfris::los_channel_matrix(ris, rx, geom.lambda);
            auto report = nfris::effective_dof(H, tau);
            body << nfris::format_double(d) << ","
                 << nfris::format_double(report.effective_rank) << "," << report.threshold_count
                 << "\n";
            for (Eigen::Index i = 0; i < report.singular_values.size(); ++i)
                sigma_body << nfris::format_double(d) << "," << i << ","
                           << nfris::format_double(report.singular_values[i]) << "\n";
        }
        ctx.write_csv("edof.csv", "distance,effective_rank,threshold_count", body.str());
        ctx.write_csv("sigma.csv", "distance,sigma_index,sigma_value", sigma_body.str());
        return 0;
    }

    int run_train(const RunContext &ctx)
    {
        auto geom = parse_geometry(ctx.config);
        const json &e = experiment_block(
            ctx.config, {"protocols", "trials", "angles", "distances", "l1", "l2",
                         "distance_branches", "d_max", "noise_variance", "on_grid"});

        nfris::EvalConfig cfg;
        cfg.geometry = nfris::build_planar_array(geom.rows, geom.cols, geom.spacing, {0, 0, 0},
                                                 {0, 0, 1});
        cfg.lambda = geom.lambda;
        cfg.angles = get_int_or(e, "angles", 64);
        cfg.distances = get_int_or(e, "distances", 8);
        cfg.l1 = get_int_or(e, "l1", 0);
        cfg.l2 = get_int_or(e, "l2", 0);
        cfg.distance_branches = get_int_or(e, "distance_branches", 4);
        cfg.d_max = get_number_or(e, "d_max", 0.0);
        cfg.noise_variance = get_number_or(e, "noise_variance", 0.0);
        cfg.trials = get_int_or(e, "trials", 100);
        cfg.on_grid_users = e.contains("on_grid") && e.at("on_grid").get<bool>();
        cfg.seed = ctx.seed;
        if (cfg.noise_variance > 0.0 && !ctx.config.contains("seed") && ctx.seed == 0)
            throw ConfigError("config.seed: required for stochastic experiments");

        std::vector<nfris::Protocol> protocols;
        for (const auto &p : require(e, "protocols", "experiment"))
        {
            std::string name = p.get<std::string>();
            if (name == "exhaustive")
                protocols.push_back(nfris::Protocol::Exhaustive);
            else if (name == "two-phase")
                protocols.push_back(nfris::Protocol::TwoPhase);
            else if (name == "hierarchical")
                protocols.push_back(nfris::Protocol::Hierarchical);
            else
                throw ConfigError("experiment.protocols: unknown protocol \"" + name + "\"");
        }

        auto result = nfris::evaluate_protocols(cfg, protocols);
        std::ostringstream body;
        for (const auto &rec : result.records)
            body << rec.protocol << "," << rec.trial << "," << rec.pilots << ","
                 << nfris::format_double(rec.achieved_gain) << ","
                 << nfris::format_double(rec.truth_gain) << "," << (rec.hit ? 1 : 0) << "\n";
        ctx.write_csv("train.csv", "protocol,trial,pilots,achieved_gain,truth_gain,hit", body.str());

        std::ostringstream summary;
        for (const auto &s : result.summaries)
            summary << s.protocol << "," << nfris::format_double(s.mean_pilots) << ","
                    << nfris::format_double(s.mean_gain_ratio) << ","
                    << nfris::format_double(s.misidentification_rate) << "\n";
        ctx.write_csv("train_summary.csv", "protocol,mean_pilots,mean_gain_ratio,misid_rate",
                      summary.str());

        // Codebook export for the default split.
        int n = cfg.geometry.element_count();
        int lt = static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));
        int l2 = cfg.l2 > 0 ? cfg.l2 : (lt + 1) / 2;
        int l1 = cfg.l1 > 0 ? cfg.l1 : lt - l2;
        double d_max = cfg.d_max > 0.0
                           ? cfg.d_max
                           : 0.5 * nfris::rayleigh_distance(cfg.geometry.aperture_diagonal,
                                                            cfg.lambda);
        auto book = nfris::build_hierarchical(cfg.geometry, cfg.lambda, l1, l2, cfg.distances,
                                              d_max);
        std::ostringstream cb;
        for (int layer = 0; layer < book.layer_count(); ++layer)
        {
            const auto &row = book.layers[static_cast<size_t>(layer)];
            for (size_t i = 0; i < row.size(); ++i)
                cb << (layer + 1) << "," << i << ","
                   << nfris::format_double(row[i].region.theta_lo) << ","
                   << nfris::format_double(row[i].region.theta_hi) << ","
                   << nfris::format_double(row[i].region.d_lo) << ","
                   << nfris::format_double(row[i].region.d_hi) << "," << row[i].active_count()
                   << "\n";
        }
        ctx.write_csv("codebook.csv", "layer,index,theta_lo,theta_hi,d_lo,d_hi,active_count",
                      cb.str());
        return 0;
    }

    int run_beamform(const RunContext &ctx)
    {
        auto geom = parse_geometry(ctx.config);
        const json &p = require(ctx.config, "placement", "config");
        check_keys(p, "placement", {"tx", "rx", "users"});
        const json &e = experiment_block(
            ctx.config, {"sides", "q", "noise_power", "weights", "max_sweeps"});

        nfris::RateExperimentConfig cfg;
        cfg.lambda = geom.lambda;
        cfg.spacing = geom.spacing;
        cfg.bs_center = get_vec3(require(p, "tx", "placement"), "placement.tx");
        for (const auto &u : require(p, "users", "placement"))
            cfg.users.push_back(get_vec3(u, "placement.users"));
        for (const auto &s : require(e, "sides", "experiment"))
            cfg.sides.push_back(s.get<int>());
        cfg.phase_grid = get_int_or(e, "q", 64);
        cfg.noise_power = get_number_or(e, "noise_power", 1e-18);
        cfg.max_sweeps = get_int_or(e, "max_sweeps", 50);
        if (e.contains("weights"))
        {
            cfg.weights.resize(static_cast<Eigen::Index>(e.at("weights").size()));
            Eigen::Index i = 0;
            for (const auto &w : e.at("weights"))
                cfg.weights[i++] = w.get<double>();
        }

        auto points = nfris::near_vs_far_rate_experiment(cfg);
        std::ostringstream body;
        for (const auto &pt : points)
            body << pt.elements << "," << nfris::format_double(pt.near_designed_rate) << ","
                 << nfris::format_double(pt.far_designed_rate) << ","
                 << nfris::format_double(pt.gap) << "\n";
        ctx.write_csv("beamform.csv", "elements,near_rate,far_rate,gap", body.str());

        // Convergence trace at the largest size, near-field design.
        int side = cfg.sides.back();
        nfris::RisGeometry ris = nfris::build_planar_array(
            side, side, cfg.spacing > 0.0 ? cfg.spacing : cfg.lambda / 2.0, {0, 0, 0}, {0, 0, 1});
        nfris::RisGeometry bs = nfris::build_planar_array(
            1, static_cast<int>(cfg.users.size()), cfg.lambda / 2.0, cfg.bs_center, {0, 0, 1});
        nfris::SumRateProblem problem;
        problem.noise_power = cfg.noise_power;
        problem.weights = cfg.weights.size() == static_cast<Eigen::Index>(cfg.users.size())
                              ? cfg.weights
                              : Eigen::VectorXd::Ones(static_cast<Eigen::Index>(cfg.users.size()));
        for (const auto &user : cfg.users)
            problem.per_user_links.push_back(nfris::cascaded_links(
                bs, ris, nfris::single_antenna(user), cfg.lambda,
                nfris::PathlossModel::FreeSpaceCascaded));
        auto opt = nfris::elementwise_sumrate(problem, cfg.phase_grid, false, cfg.max_sweeps);
        std::ostringstream trace;
        int n = ris.element_count();
        for (size_t i = 0; i < opt.second.objective_values.size(); ++i)
            trace << (static_cast<int>(i) / n + 1) << "," << (static_cast<int>(i) % n) << ","
                  << nfris::format_double(opt.second.objective_values[i]) << "\n";
        ctx.write_csv("beamform_trace.csv", "sweep,element,objective", trace.str());
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"nfris: near-field RIS simulation experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;

    std::vector<std::string> names = {"region", "power-scaling", "edof", "train", "beamform"};
    std::vector<CLI::App *> subs;
    for (const auto &name : names)
    {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "RNG seed (overrides config)")
            ->each([&](const std::string &) { seed_given = true; });
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);
    std::string cmd = app.get_subcommands().front()->get_name();

    try
    {
        std::ifstream in(config_path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot read config file: " + config_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        std::string raw = buffer.str();

        RunContext ctx;
        try
        {
            ctx.config = json::parse(raw);
        }
        catch (const json::parse_error &err)
        {
            throw ConfigError(std::string("config parse error: ") + err.what());
        }
        check_top_level(ctx.config);
        std::filesystem::create_directories(out_dir);
        ctx.out_dir = out_dir;
        ctx.config_hash = nfris::fnv1a64(raw);
        ctx.seed = seed_given ? seed : ctx.config.value("seed", std::uint64_t{0});

        if (cmd == "region")
            return run_region(ctx);
        if (cmd == "power-scaling")
            return run_power_scaling(ctx);
        if (cmd == "edof")
            return run_edof(ctx);
        if (cmd == "train")
            return run_train(ctx);
        if (cmd == "beamform")
            return run_beamform(ctx);
        return 3;
    }
    catch (const ConfigError &err)
    {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    }
    catch (const json::exception &err)
    {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    }
    catch (const std::exception &err)
    {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
}
