// SPDX-License-Identifier: Apache-2.0
//
// floquet-ris: time-Floquet RIS channel modelling and ambiguity-aligned estimation
// Copyright (C) 2026 The floquet-ris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "floquet/evaluation.hpp"
#include "floquet/experiments.hpp"
#include "floquet/io.hpp"

namespace fs = std::filesystem;
using namespace floquet;
using io::Json;

namespace
{

struct Options
{
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string config;
    std::string scenario;
    std::string proxies;
    std::string result;
    std::string campaign;
    std::string out;
    std::string out_dir;
    std::string mode = "m3";
    std::string snr_reference = "all_entries";
    std::string model;
    std::string experiment;
    std::size_t k = 0;
    std::size_t k1 = 0;
    std::size_t q = 3;
    std::size_t patterns = kEvaluationPatterns;
    std::size_t restarts = 4;
    std::size_t tx = 0;
    std::size_t rx = 0;
    int harmonic = 1;
    std::optional<double> snr_db;
    bool noiseless = false;
    bool surrogate = false;
    bool mc_unaware = false;
    double spread = 0.3;
    OptimizerConfig optimizer;
};

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(format_number(v)); }

void emit(const Json &j, const std::string &out)
{
    if (out.empty())
        std::cout << io::dump(j);
    else
        io::write_json(out, j);
}

int run_generate(const Options &o)
{
    ScenarioConfig c = io::scenario_config_from_json(io::read_json(o.config));
    if (o.seed_given)
        c.seed = o.seed;
    io::save_scenario(generate_scenario(c), o.out);
    return 0;
}

int run_campaign(const Options &o)
{
    const Scenario s = io::load_scenario(o.scenario);
    if (o.k < 1)
        throw ValidationError("--k must be at least 1");
    CampaignSpec spec{o.k, o.q, parse_mode(o.mode), o.noiseless ? std::nullopt : o.snr_db,
                      parse_snr_reference(o.snr_reference), o.seed};
    io::write_json(o.out, io::to_json(simulate_campaign(s, s.retained_grid(), spec)));
    return 0;
}

int run_step1(const Options &o)
{
    const Scenario s = io::load_scenario(o.scenario);
    const HarmonicGrid grid = s.retained_grid();
    const bool mc = !o.mc_unaware;
    if (o.surrogate)
    {
        io::write_json(o.out, io::to_json(surrogate_step1(s, grid, o.spread, o.seed, mc)));
        return 0;
    }
    const std::size_t k1 = o.k1 ? o.k1 : default_step1_k(s.config, mc);
    std::vector<StaticCampaign> camps;
    for (std::size_t h = 0; h < grid.size(); ++h)
        camps.push_back(simulate_static_campaign(s, grid.harmonics()[h], k1, o.snr_db,
                                                 derive_seed(o.seed, "step1/" + std::to_string(h))));
    Step1Config cfg;
    cfg.optimizer.seed = derive_seed(o.seed, "step1-fit");
    const Step1Result r = step1_estimate(camps, grid, cfg, mc);
    for (const auto &rep : r.reports)
        if (!rep.converged || rep.low_identifiability)
            std::cerr << "warning: harmonic " << rep.harmonic << (rep.converged ? "" : " did not converge")
                      << (rep.low_identifiability ? " has low identifiability" : "") << " (final loss "
                      << format_number(rep.final_loss) << ")\n";
    io::write_json(o.out, io::to_json(r.proxies));
    return 0;
}

int run_align(const Options &o)
{
    const ProxySet proxies = io::proxies_from_json(io::read_json(o.proxies));
    const Campaign camp = io::campaign_from_json(io::read_json(o.campaign));
    OptimizerConfig cfg = o.optimizer;
    cfg.seed = o.seed;
    const AlignmentResult r = align(proxies, camp, cfg);
    io::write_json(o.out, io::to_json(r));
    if (r.aborted)
    {
        std::cerr << "error: alignment aborted: " << r.abort_reason << "\n";
        return static_cast<int>(ExitCode::numerical);
    }
    return 0;
}

ProxySet model_proxies(const Options &o)
{
    if (!o.result.empty())
        return io::alignment_result_from_json(io::read_json(o.result)).aligned;
    return io::proxies_from_json(io::read_json(o.proxies));
}

int run_zeta(const Options &o)
{
    const Scenario s = io::load_scenario(o.scenario);
    const ChannelModel model = ChannelModel::from_proxies(model_proxies(o));
    const MeasurementMode mode = parse_mode(o.mode);
    const ZetaReport z = zeta_against_truth(s, model, mode, o.q, o.patterns, o.seed, Execution::parallel);
    Json norms = Json::array();
    for (double v : z.error_norms)
        norms.push_back(v);
    emit(Json{{"mode", to_string(mode)},
              {"q", o.q},
              {"seed", o.seed},
              {"patterns", z.patterns},
              {"infinite", z.infinite},
              {"zeta_linear", z.infinite ? Json("inf") : Json(z.zeta_linear)},
              {"zeta_db", z.infinite ? Json("inf") : Json(z.zeta_db)},
              {"error_norms", std::move(norms)}},
         o.out);
    return 0;
}

int run_gain(const Options &o)
{
    const Scenario s = io::load_scenario(o.scenario);
    const ChannelModel truth = ChannelModel::ground_truth(s, s.gt_grid(), true);
    const bool mc = !o.mc_unaware;
    std::optional<ChannelModel> model;
    if (o.model == "gt")
        model = truth;
    else if (o.model == "trunc-gt")
        model = ChannelModel::ground_truth(s, s.retained_grid(), mc);
    else if (o.model == "aligned")
    {
        if (o.result.empty())
            throw ValidationError("--model aligned needs --result");
        model = ChannelModel::from_proxies(io::alignment_result_from_json(io::read_json(o.result)).aligned);
    }
    else if (o.model == "unaligned")
    {
        if (o.proxies.empty())
            throw ValidationError("--model unaligned needs --proxies");
        model = ChannelModel::from_proxies(io::proxies_from_json(io::read_json(o.proxies)));
    }
    else
        throw ValidationError("unknown model '" + o.model + "' (expected gt, trunc-gt, aligned or unaligned)");
    const GainResult r = coordinate_ascent_gain(*model, truth, {o.tx, o.rx, o.harmonic, o.q, o.restarts, o.seed});
    Json states = Json::array();
    for (Eigen::Index i = 0; i < r.states.rows(); ++i)
    {
        Json row = Json::array();
        for (Eigen::Index q = 0; q < r.states.cols(); ++q)
            row.push_back(r.states(i, q) + 1);
        states.push_back(std::move(row));
    }
    emit(Json{{"model", o.model},
              {"mc_aware", mc},
              {"tx", o.tx},
              {"rx", o.rx},
              {"harmonic", o.harmonic},
              {"q", o.q},
              {"seed", o.seed},
              {"restarts", r.restarts},
              {"states", std::move(states)},
              {"predicted_gain_db", number(r.predicted_db)},
              {"true_gain_db", number(r.true_db)},
              {"traces", r.traces}},
         o.out);
    return 0;
}

int run_exp(const Options &o)
{
    ExperimentConfig c = experiment_config_from_json(io::read_json(o.config));
    if (o.seed_given)
        c.seed = o.seed;
    ExperimentOutput out;
    if (o.experiment == "fig3")
        out = experiment_fig3(c);
    else if (o.experiment == "fig4")
        out = experiment_fig4(c);
    else
        out = experiment_table1(c);
    const fs::path dir(o.out_dir);
    io::write_text(dir / (o.experiment + ".csv"), out.table.to_csv());
    io::write_json(dir / (o.experiment + ".json"), out.summary);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Multi-harmonic TF-RIS channel modeling: scenarios, campaigns, alignment, evaluation"};
    app.require_subcommand(1);
    Options o;
    auto seed_opt = [&](CLI::App *sub) {
        sub->add_option_function<std::uint64_t>(
               "--seed",
               [&](std::uint64_t v) {
                   o.seed = v;
                   o.seed_given = true;
               },
               "master seed (default 0)");
    };
    auto mode_opt = [&](CLI::App *sub) {
        sub->add_option("--mode", o.mode, "measurement mode")->check(CLI::IsMember({"m1", "m2", "m3"}))->required();
    };

    auto *gen = app.add_subcommand("generate", "draw a synthetic ground-truth scenario");
    gen->add_option("--config", o.config, "scenario config JSON")->required();
    gen->add_option("--out", o.out, "scenario JSON output")->required();
    seed_opt(gen);

    auto *camp = app.add_subcommand("campaign", "simulate a noisy measurement campaign");
    camp->add_option("--scenario", o.scenario)->required();
    mode_opt(camp);
    camp->add_option("--k", o.k, "number of random patterns")->required();
    camp->add_option("--q", o.q, "time slots per period")->required();
    auto *snr = camp->add_option("--snr-db", o.snr_db, "per-entry SNR in dB");
    camp->add_flag("--noiseless", o.noiseless)->excludes(snr);
    camp->add_option("--snr-reference", o.snr_reference)->check(CLI::IsMember({"all_entries", "fundamental_block"}));
    camp->add_option("--out", o.out)->required();
    seed_opt(camp);

    auto *s1 = app.add_subcommand("step1", "per-harmonic proxy estimation");
    s1->add_option("--scenario", o.scenario)->required();
    s1->add_flag("--surrogate", o.surrogate, "gauge-transformed ground truth instead of a fit");
    s1->add_option("--spread", o.spread, "surrogate gauge spread");
    s1->add_flag("--mc-unaware", o.mc_unaware);
    s1->add_option("--k1", o.k1, "static configurations per harmonic (default 20x unknowns / (N_R N_T))");
    s1->add_option("--snr-db", o.snr_db, "static campaign SNR in dB (default noiseless)");
    s1->add_option("--out", o.out)->required();
    seed_opt(s1);

    auto *al = app.add_subcommand("align", "cross-harmonic ambiguity alignment");
    al->add_option("--proxies", o.proxies)->required();
    al->add_option("--campaign", o.campaign)->required();
    al->add_option("--iters", o.optimizer.iterations);
    al->add_option("--lr-start", o.optimizer.lr_start);
    al->add_option("--lr-end", o.optimizer.lr_end);
    al->add_option("--init-spread", o.optimizer.init_spread);
    al->add_option("--out", o.out)->required();
    seed_opt(al);

    auto *ze = app.add_subcommand("zeta", "accuracy of a proxy model on unseen patterns");
    ze->add_option("--scenario", o.scenario)->required();
    auto *zp = ze->add_option("--proxies", o.proxies);
    auto *zr = ze->add_option("--result", o.result);
    zp->excludes(zr);
    mode_opt(ze);
    ze->add_option("--patterns", o.patterns);
    ze->add_option("--q", o.q)->required();
    ze->add_option("--out", o.out, "JSON output (default stdout)");
    seed_opt(ze);

    auto *ga = app.add_subcommand("gain", "coordinate-ascent harmonic gain");
    ga->add_option("--scenario", o.scenario)->required();
    ga->add_option("--model", o.model)->check(CLI::IsMember({"gt", "trunc-gt", "aligned", "unaligned"}))->required();
    ga->add_option("--proxies", o.proxies, "unaligned proxies");
    ga->add_option("--result", o.result, "alignment result");
    ga->add_flag("--mc-unaware", o.mc_unaware, "zero Gamma in the trunc-gt model");
    ga->add_option("--tx", o.tx)->required();
    ga->add_option("--rx", o.rx)->required();
    ga->add_option("--harmonic", o.harmonic);
    ga->add_option("--q", o.q)->required();
    ga->add_option("--restarts", o.restarts);
    ga->add_option("--out", o.out, "JSON output (default stdout)");
    seed_opt(ga);

    auto *ex = app.add_subcommand("exp", "experiment drivers");
    ex->add_option("experiment", o.experiment)->check(CLI::IsMember({"fig3", "fig4", "table1"}))->required();
    ex->add_option("--config", o.config)->required();
    ex->add_option("--out-dir", o.out_dir)->required();
    seed_opt(ex);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::validation);
    }

    try
    {
        if (gen->parsed())
            return run_generate(o);
        if (camp->parsed())
            return run_campaign(o);
        if (s1->parsed())
            return run_step1(o);
        if (al->parsed())
            return run_align(o);
        if (ze->parsed())
        {
            if (o.proxies.empty() && o.result.empty())
                throw ValidationError("zeta needs --proxies or --result");
            return run_zeta(o);
        }
        if (ga->parsed())
            return run_gain(o);
        return run_exp(o);
    }
    catch (const Error &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::numerical);
    }
}
