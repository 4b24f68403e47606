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

#include "floquet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace floquet
{

namespace
{

using io::Json;

std::string csv_escape(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string bool_label(bool b) { return b ? "true" : "false"; }

double median(std::vector<double> v)
{
    if (v.empty())
        return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Json number_or_string(double v)
{
    if (std::isfinite(v))
        return Json(v);
    return Json(format_number(v));
}

std::vector<Scenario> make_scenarios(const ExperimentConfig &c, Execution exec)
{
    std::vector<std::optional<Scenario>> tmp(c.replicates);
    for_each_index(c.replicates, exec, [&](std::size_t r) {
        ScenarioConfig sc = c.scenario;
        sc.seed = replicate_seed(c.seed, r);
        tmp[r] = generate_scenario(sc);
    });
    std::vector<Scenario> out;
    for (auto &s : tmp)
        out.push_back(std::move(*s));
    return out;
}

// Truth samples per replicate, one per evaluation Q. A failure is kept and rethrown by the cells
// that need it.
struct ReplicateTruths
{
    std::vector<std::optional<TruthSample>> samples;
    std::vector<std::string> errors;

    const TruthSample &get(std::size_t j) const
    {
        if (!samples[j])
            throw NumericalError(errors[j]);
        return *samples[j];
    }
};

std::vector<ReplicateTruths> make_truths(const std::vector<Scenario> &scenarios, const std::vector<std::size_t> &qs,
                                         std::size_t count, Execution exec)
{
    std::vector<ReplicateTruths> out(scenarios.size());
    for (auto &t : out)
    {
        t.samples.resize(qs.size());
        t.errors.resize(qs.size());
    }
    for_each_index(scenarios.size() * qs.size(), exec, [&](std::size_t i) {
        const std::size_t r = i / qs.size();
        const std::size_t j = i % qs.size();
        const Scenario &s = scenarios[r];
        try
        {
            out[r].samples[j] = truth_sample(s, s.retained_grid(), qs[j], count, s.config.seed, Execution::serial);
        }
        catch (const Error &e)
        {
            out[r].errors[j] = e.what();
        }
    });
    return out;
}

OptimizerConfig optimizer_for(const ExperimentConfig &c, std::uint64_t seed)
{
    OptimizerConfig o = c.optimizer;
    o.seed = seed;
    return o;
}

// Aligned, unaligned and truncated-truth zeta of one cell; an infinite zeta is written as "inf".
struct ZetaTriple
{
    double aligned = 0.0;
    double unaligned = 0.0;
    double trunc_gt = 0.0;
};

} // namespace

std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate)
{
    return derive_seed(master, "scenario/" + std::to_string(replicate));
}

std::string format_number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string snr_label(const std::optional<double> &snr_db) { return snr_db ? format_number(*snr_db) : "inf"; }

std::string CsvTable::to_csv() const
{
    std::string out;
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                out += ',';
            out += csv_escape(cells[i]);
        }
        out += '\n';
    };
    line(header);
    for (const auto &r : rows)
        line(r);
    return out;
}

std::size_t default_step1_k(const ScenarioConfig &c, bool mc_aware)
{
    const std::size_t unknowns =
        c.n_r * c.n_t + c.n_r * c.n_s + (mc_aware ? c.n_s * c.n_s : 0) + c.n_s * c.n_t + c.n_states;
    return (20 * unknowns + c.n_r * c.n_t - 1) / (c.n_r * c.n_t);
}

ProxySet make_proxies(const Scenario &scenario, const ExperimentConfig &config, bool mc_aware, std::uint64_t seed)
{
    const HarmonicGrid grid = scenario.retained_grid();
    if (config.proxy_source == "surrogate")
        return surrogate_step1(scenario, grid, config.spread, derive_seed(seed, "surrogate"), mc_aware);
    if (config.proxy_source != "step1")
        throw ValidationError("unknown proxy source '" + config.proxy_source + "' (expected surrogate or step1)");
    const std::size_t k1 = config.step1_k ? config.step1_k : default_step1_k(scenario.config, mc_aware);
    std::vector<StaticCampaign> camps;
    for (std::size_t h = 0; h < grid.size(); ++h)
        camps.push_back(simulate_static_campaign(scenario, grid.harmonics()[h], k1, std::nullopt,
                                                 derive_seed(seed, "step1/" + std::to_string(h))));
    Step1Config s1;
    s1.optimizer.seed = derive_seed(seed, "step1-fit");
    return step1_estimate(camps, grid, s1, mc_aware, Execution::serial).proxies;
}

TruthSample truth_sample(const Scenario &scenario, const HarmonicGrid &grid, std::size_t q, std::size_t count,
                         std::uint64_t seed, Execution exec)
{
    TruthSample t;
    t.states = evaluation_states(count, scenario.config.n_s, q, scenario.config.n_states, seed);
    t.channels.assign(count, FloquetChannel(grid, 0, 0, CMatrix()));
    for_each_index(count, exec,
                   [&](std::size_t k) { t.channels[k] = scenario.channel(scenario.pattern(t.states[k]), grid); });
    return t;
}

ZetaReport zeta_against_truth(const TruthSample &truth, const ChannelModel &model, MeasurementMode mode,
                              Execution exec)
{
    std::vector<FloquetChannel> p(truth.states.size(), FloquetChannel(model.grid(), 0, 0, CMatrix()));
    for_each_index(p.size(), exec, [&](std::size_t k) { p[k] = model.predict(truth.states[k]); });
    return zeta(truth.channels, p, mode);
}

ZetaReport zeta_against_truth(const Scenario &scenario, const ChannelModel &model, MeasurementMode mode,
                              std::size_t q, std::size_t count, std::uint64_t seed, Execution exec)
{
    return zeta_against_truth(truth_sample(scenario, model.grid(), q, count, seed, exec), model, mode, exec);
}

ExperimentConfig experiment_config_from_json(const Json &j)
{
    if (!j.is_object())
        throw ParseError("", "expected an object");
    ExperimentConfig c;
    auto get = [&](const char *key) -> const Json * { return j.contains(key) ? &j[key] : nullptr; };
    auto ptr = [](const char *key) { return std::string("/") + key; };
    auto uint_of = [&](const Json &v, const std::string &p) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ParseError(p, "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    };
    auto num_of = [&](const Json &v, const std::string &p) {
        if (!v.is_number())
            throw ParseError(p, "expected a number");
        return v.get<double>();
    };
    auto arr_of = [&](const Json &v, const std::string &p) -> const Json & {
        if (!v.is_array() || v.empty())
            throw ParseError(p, "expected a non-empty array");
        return v;
    };
    if (auto v = get("scenario"))
        c.scenario = io::scenario_config_from_json(*v, "/scenario");
    if (auto v = get("seed"))
        c.seed = uint_of(*v, ptr("seed"));
    if (auto v = get("replicates"))
        c.replicates = uint_of(*v, ptr("replicates"));
    if (auto v = get("k_list"))
    {
        c.k_list.clear();
        for (std::size_t i = 0; i < arr_of(*v, ptr("k_list")).size(); ++i)
            c.k_list.push_back(uint_of((*v)[i], ptr("k_list") + "/" + std::to_string(i)));
    }
    if (auto v = get("snr_db_list"))
    {
        c.snr_db_list.clear();
        for (std::size_t i = 0; i < arr_of(*v, ptr("snr_db_list")).size(); ++i)
        {
            const Json &e = (*v)[i];
            if (e.is_null())
                c.snr_db_list.push_back(std::nullopt);
            else
                c.snr_db_list.push_back(num_of(e, ptr("snr_db_list") + "/" + std::to_string(i)));
        }
    }
    auto mode_of = [&](const Json &v, const std::string &p) {
        if (!v.is_string())
            throw ParseError(p, "expected a mode string");
        try
        {
            return parse_mode(v.get<std::string>());
        }
        catch (const ValidationError &e)
        {
            throw ParseError(p, e.what());
        }
    };
    if (auto v = get("modes"))
    {
        c.modes.clear();
        for (std::size_t i = 0; i < arr_of(*v, ptr("modes")).size(); ++i)
            c.modes.push_back(mode_of((*v)[i], ptr("modes") + "/" + std::to_string(i)));
    }
    if (auto v = get("mc_flags"))
    {
        c.mc_flags.clear();
        for (std::size_t i = 0; i < arr_of(*v, ptr("mc_flags")).size(); ++i)
        {
            if (!(*v)[i].is_boolean())
                throw ParseError(ptr("mc_flags") + "/" + std::to_string(i), "expected a boolean");
            c.mc_flags.push_back((*v)[i].get<bool>());
        }
    }
    if (auto v = get("q"))
        c.q = uint_of(*v, ptr("q"));
    if (auto v = get("proxy_source"))
    {
        if (!v->is_string())
            throw ParseError(ptr("proxy_source"), "expected a string");
        c.proxy_source = v->get<std::string>();
        if (c.proxy_source != "surrogate" && c.proxy_source != "step1")
            throw ParseError(ptr("proxy_source"), "expected 'surrogate' or 'step1'");
    }
    if (auto v = get("spread"))
        c.spread = num_of(*v, ptr("spread"));
    if (auto v = get("step1_k"))
        c.step1_k = uint_of(*v, ptr("step1_k"));
    if (auto v = get("optimizer"))
        c.optimizer = io::optimizer_config_from_json(*v, "/optimizer");
    if (auto v = get("eval_patterns"))
        c.eval_patterns = uint_of(*v, ptr("eval_patterns"));
    if (auto v = get("q_eval_list"))
    {
        c.q_eval_list.clear();
        for (std::size_t i = 0; i < arr_of(*v, ptr("q_eval_list")).size(); ++i)
            c.q_eval_list.push_back(uint_of((*v)[i], ptr("q_eval_list") + "/" + std::to_string(i)));
    }
    if (auto v = get("k"))
        c.k = uint_of(*v, ptr("k"));
    if (auto v = get("mode"))
        c.mode = mode_of(*v, ptr("mode"));
    if (auto v = get("snr_db"))
        c.snr_db = v->is_null() ? std::nullopt : std::optional<double>(num_of(*v, ptr("snr_db")));
    if (auto v = get("models"))
    {
        c.models.clear();
        for (std::size_t i = 0; i < arr_of(*v, ptr("models")).size(); ++i)
        {
            const Json &e = (*v)[i];
            const std::string p = ptr("models") + "/" + std::to_string(i);
            if (!e.is_string())
                throw ParseError(p, "expected a model name");
            const std::string m = e.get<std::string>();
            if (m != "gt" && m != "trunc-gt" && m != "aligned" && m != "unaligned")
                throw ParseError(p, "unknown model '" + m + "' (expected gt, trunc-gt, aligned or unaligned)");
            c.models.push_back(m);
        }
    }
    if (auto v = get("tx"))
        c.tx = uint_of(*v, ptr("tx"));
    if (auto v = get("rx"))
        c.rx = uint_of(*v, ptr("rx"));
    if (auto v = get("harmonic"))
    {
        if (!v->is_number_integer())
            throw ParseError(ptr("harmonic"), "expected an integer");
        c.target_harmonic = v->get<int>();
    }
    if (auto v = get("restarts"))
        c.restarts = uint_of(*v, ptr("restarts"));

    static const char *known[] = {"scenario", "seed", "replicates", "k_list", "snr_db_list", "modes",
                                  "mc_flags", "q", "proxy_source", "spread", "step1_k", "optimizer",
                                  "eval_patterns", "q_eval_list", "k", "mode", "snr_db", "models",
                                  "tx", "rx", "harmonic", "restarts"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
            throw ParseError("/" + it.key(), "unknown experiment key");
    if (c.replicates < 1)
        throw ParseError("/replicates", "at least one replicate required");
    if (c.q < 1)
        throw ParseError("/q", "Q must be at least 1");
    if (c.eval_patterns < 2)
        throw ParseError("/eval_patterns", "at least two evaluation patterns required");
    try
    {
        c.scenario.validate();
    }
    catch (const ValidationError &e)
    {
        throw ParseError("/scenario", e.what());
    }
    return c;
}

Json to_json(const ExperimentConfig &c)
{
    Json snr = Json::array();
    for (const auto &s : c.snr_db_list)
        snr.push_back(s ? Json(*s) : Json(nullptr));
    Json modes = Json::array();
    for (auto m : c.modes)
        modes.push_back(to_string(m));
    return Json{{"scenario", io::to_json(c.scenario)},
                {"seed", c.seed},
                {"replicates", c.replicates},
                {"k_list", c.k_list},
                {"snr_db_list", std::move(snr)},
                {"modes", std::move(modes)},
                {"mc_flags", c.mc_flags},
                {"q", c.q},
                {"proxy_source", c.proxy_source},
                {"spread", c.spread},
                {"step1_k", c.step1_k},
                {"optimizer", io::to_json(c.optimizer)},
                {"eval_patterns", c.eval_patterns},
                {"q_eval_list", c.q_eval_list},
                {"k", c.k},
                {"mode", to_string(c.mode)},
                {"snr_db", c.snr_db ? Json(*c.snr_db) : Json(nullptr)},
                {"models", c.models},
                {"tx", c.tx},
                {"rx", c.rx},
                {"harmonic", c.target_harmonic},
                {"restarts", c.restarts}};
}

// ---- fig3 ------------------------------------------------------------------------------------

ExperimentOutput experiment_fig3(const ExperimentConfig &c, Execution exec)
{
    struct Cell
    {
        std::size_t replicate;
        std::size_t k;
        std::optional<double> snr;
        MeasurementMode mode;
        bool mc;
        std::string key() const
        {
            return "k=" + std::to_string(k) + "/snr=" + snr_label(snr) + "/mode=" + to_string(mode) +
                   "/mc=" + bool_label(mc);
        }
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < c.replicates; ++r)
        for (auto k : c.k_list)
            for (const auto &snr : c.snr_db_list)
                for (auto mode : c.modes)
                    for (bool mc : c.mc_flags)
                        cells.push_back({r, k, snr, mode, mc});

    const auto scenarios = make_scenarios(c, exec);
    // Every cell of a replicate is scored on the same unseen patterns.
    const auto truths = make_truths(scenarios, {c.q}, c.eval_patterns, exec);
    ExperimentOutput out;
    out.table.header = {"replicate", "scenario_seed", "k", "snr_db", "mode", "mc_aware", "q",
                        "zeta_aligned_db", "zeta_unaligned_db", "zeta_trunc_gt_db", "loss_initial", "loss_final",
                        "iterations", "status", "error"};
    out.table.rows.resize(cells.size());
    for_each_index(cells.size(), exec, [&](std::size_t i) {
        const Cell &cell = cells[i];
        const Scenario &s = scenarios[cell.replicate];
        const std::uint64_t ss = s.config.seed;
        std::vector<std::string> row{std::to_string(cell.replicate), std::to_string(ss), std::to_string(cell.k),
                                     snr_label(cell.snr), to_string(cell.mode), bool_label(cell.mc),
                                     std::to_string(c.q)};
        try
        {
            const ProxySet proxies = make_proxies(s, c, cell.mc, derive_seed(ss, "proxies/mc=" + bool_label(cell.mc)));
            CampaignSpec spec{cell.k, c.q, cell.mode, cell.snr, SnrReference::all_entries,
                              derive_seed(ss, "campaign/" + cell.key())};
            const Campaign camp = simulate_campaign(s, s.retained_grid(), spec, Execution::serial);
            const AlignmentResult res =
                align(proxies, camp, optimizer_for(c, derive_seed(ss, "align/" + cell.key())), Execution::serial);
            if (res.aborted)
                throw NumericalError(res.abort_reason);
            const TruthSample &truth = truths[cell.replicate].get(0);
            auto z = [&](const ChannelModel &m) {
                return zeta_against_truth(truth, m, cell.mode, Execution::serial).zeta_db;
            };
            row.push_back(format_number(z(ChannelModel::from_proxies(res.aligned))));
            row.push_back(format_number(z(ChannelModel::from_proxies(proxies))));
            row.push_back(format_number(z(ChannelModel::ground_truth(s, s.retained_grid(), cell.mc))));
            row.push_back(format_number(res.loss_trace.front()));
            row.push_back(format_number(res.loss_trace.back()));
            row.push_back(std::to_string(res.loss_trace.size() - 1));
            row.push_back("ok");
            row.push_back("");
        }
        catch (const Error &e)
        {
            row.resize(7);
            for (int k = 0; k < 6; ++k)
                row.push_back("");
            row.push_back("error");
            row.push_back(e.what());
        }
        out.table.rows[i] = std::move(row);
    });
    // Medians per (k, snr, mode, mc) over replicates.
    std::map<std::string, std::vector<ZetaTriple>> groups;
    for (const auto &row : out.table.rows)
        if (row[13] == "ok")
            groups[row[2] + "|" + row[3] + "|" + row[4] + "|" + row[5]].push_back(
                {std::stod(row[7]), std::stod(row[8]), std::stod(row[9])});
    Json med = Json::array();
    for (const auto &[key, v] : groups)
    {
        std::vector<double> a, u, t;
        for (const auto &z : v)
        {
            a.push_back(z.aligned);
            u.push_back(z.unaligned);
            t.push_back(z.trunc_gt);
        }
        med.push_back(Json{{"cell", key},
                           {"replicates", v.size()},
                           {"median_zeta_aligned_db", number_or_string(median(a))},
                           {"median_zeta_unaligned_db", number_or_string(median(u))},
                           {"median_zeta_trunc_gt_db", number_or_string(median(t))}});
    }
    out.summary = Json{{"experiment", "fig3"}, {"config", to_json(c)}, {"medians", std::move(med)}};
    return out;
}

// ---- fig4 ------------------------------------------------------------------------------------

ExperimentOutput experiment_fig4(const ExperimentConfig &c, Execution exec)
{
    struct Cell
    {
        std::size_t replicate;
        bool mc;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < c.replicates; ++r)
        for (bool mc : c.mc_flags)
            cells.push_back({r, mc});
    const auto scenarios = make_scenarios(c, exec);
    const auto truths = make_truths(scenarios, c.q_eval_list, c.eval_patterns, exec);
    ExperimentOutput out;
    out.table.header = {"replicate", "scenario_seed", "mc_aware", "q_cal", "q_eval", "k", "snr_db", "mode",
                        "zeta_aligned_db", "zeta_unaligned_db", "zeta_trunc_gt_db", "status", "error"};
    std::vector<std::vector<std::vector<std::string>>> per_cell(cells.size());
    for_each_index(cells.size(), exec, [&](std::size_t i) {
        const Cell &cell = cells[i];
        const Scenario &s = scenarios[cell.replicate];
        const std::uint64_t ss = s.config.seed;
        const std::string key = "mc=" + bool_label(cell.mc);
        auto prefix = [&](std::size_t qe) {
            return std::vector<std::string>{std::to_string(cell.replicate), std::to_string(ss), bool_label(cell.mc),
                                            std::to_string(c.q), std::to_string(qe), std::to_string(c.k),
                                            snr_label(c.snr_db), to_string(c.mode)};
        };
        try
        {
            const ProxySet proxies = make_proxies(s, c, cell.mc, derive_seed(ss, "proxies/" + key));
            CampaignSpec spec{c.k, c.q, c.mode, c.snr_db, SnrReference::all_entries,
                              derive_seed(ss, "campaign/cal/" + key)};
            const Campaign camp = simulate_campaign(s, s.retained_grid(), spec, Execution::serial);
            const AlignmentResult res =
                align(proxies, camp, optimizer_for(c, derive_seed(ss, "align/cal/" + key)), Execution::serial);
            if (res.aborted)
                throw NumericalError(res.abort_reason);
            const auto aligned = ChannelModel::from_proxies(res.aligned);
            const auto unaligned = ChannelModel::from_proxies(proxies);
            const auto trunc = ChannelModel::ground_truth(s, s.retained_grid(), cell.mc);
            for (std::size_t j = 0; j < c.q_eval_list.size(); ++j)
            {
                const std::size_t qe = c.q_eval_list[j];
                const TruthSample &truth = truths[cell.replicate].get(j);
                auto z = [&](const ChannelModel &m) {
                    return format_number(zeta_against_truth(truth, m, c.mode, Execution::serial).zeta_db);
                };
                auto row = prefix(qe);
                row.push_back(z(aligned));
                row.push_back(z(unaligned));
                row.push_back(z(trunc));
                row.push_back("ok");
                row.push_back("");
                per_cell[i].push_back(std::move(row));
            }
        }
        catch (const Error &e)
        {
            for (std::size_t qe : c.q_eval_list)
            {
                auto row = prefix(qe);
                row.insert(row.end(), {"", "", "", "error", e.what()});
                per_cell[i].push_back(std::move(row));
            }
        }
    });
    for (auto &rows : per_cell)
        for (auto &r : rows)
            out.table.rows.push_back(std::move(r));
    out.summary = Json{{"experiment", "fig4"}, {"config", to_json(c)}};
    return out;
}

// ---- table1 ----------------------------------------------------------------------------------

ExperimentOutput experiment_table1(const ExperimentConfig &c, Execution exec)
{
    const auto scenarios = make_scenarios(c, exec);
    struct Cell
    {
        std::size_t replicate;
        bool mc;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < c.replicates; ++r)
        for (bool mc : c.mc_flags)
            cells.push_back({r, mc});

    ExperimentOutput out;
    out.table.header = {"replicate", "scenario_seed", "model", "mc_aware", "q_eval", "true_gain_db",
                        "predicted_gain_db", "gap_db", "status", "error"};
    std::vector<std::vector<std::vector<std::string>>> per_cell(cells.size());
    for_each_index(cells.size(), exec, [&](std::size_t i) {
        const Cell &cell = cells[i];
        const Scenario &s = scenarios[cell.replicate];
        const std::uint64_t ss = s.config.seed;
        const std::string key = "mc=" + bool_label(cell.mc);
        const ChannelModel truth = ChannelModel::ground_truth(s, s.gt_grid(), true);
        std::optional<ProxySet> proxies;
        std::optional<ProxySet> aligned;
        std::string setup_error;
        try
        {
            const bool need_proxies = std::find(c.models.begin(), c.models.end(), "aligned") != c.models.end() ||
                                      std::find(c.models.begin(), c.models.end(), "unaligned") != c.models.end();
            if (need_proxies)
            {
                proxies = make_proxies(s, c, cell.mc, derive_seed(ss, "proxies/" + key));
                CampaignSpec spec{c.k, c.q, c.mode, c.snr_db, SnrReference::all_entries,
                                  derive_seed(ss, "campaign/cal/" + key)};
                const Campaign camp = simulate_campaign(s, s.retained_grid(), spec, Execution::serial);
                AlignmentResult res =
                    align(*proxies, camp, optimizer_for(c, derive_seed(ss, "align/cal/" + key)), Execution::serial);
                if (res.aborted)
                    throw NumericalError(res.abort_reason);
                aligned = std::move(res.aligned);
            }
        }
        catch (const Error &e)
        {
            setup_error = e.what();
        }
        for (const auto &model_name : c.models)
        {
            // The exact ground truth has no MC-unaware variant.
            if (model_name == "gt" && !cell.mc)
                continue;
            for (std::size_t qe : c.q_eval_list)
            {
                std::vector<std::string> row{std::to_string(cell.replicate), std::to_string(ss), model_name,
                                             bool_label(cell.mc), std::to_string(qe)};
                try
                {
                    const bool uses_proxies = model_name == "aligned" || model_name == "unaligned";
                    if (uses_proxies && !setup_error.empty())
                        throw NumericalError(setup_error);
                    const ChannelModel model =
                        model_name == "gt"         ? truth
                        : model_name == "trunc-gt" ? ChannelModel::ground_truth(s, s.retained_grid(), cell.mc)
                        : model_name == "aligned"  ? ChannelModel::from_proxies(*aligned)
                                                   : ChannelModel::from_proxies(*proxies);
                    GainConfig g{c.tx, c.rx, c.target_harmonic, qe, c.restarts,
                                 derive_seed(ss, "gain/" + model_name + "/" + key + "/q=" + std::to_string(qe))};
                    const GainResult r = coordinate_ascent_gain(model, truth, g);
                    row.push_back(format_number(r.true_db));
                    row.push_back(format_number(r.predicted_db));
                    row.push_back(format_number(r.true_db == r.predicted_db ? 0.0 : std::abs(r.true_db - r.predicted_db)));
                    row.push_back("ok");
                    row.push_back("");
                }
                catch (const Error &e)
                {
                    row.insert(row.end(), {"", "", "", "error", e.what()});
                }
                per_cell[i].push_back(std::move(row));
            }
        }
    });
    for (auto &rows : per_cell)
        for (auto &r : rows)
            out.table.rows.push_back(std::move(r));

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto &row : out.table.rows)
        if (row[8] == "ok")
        {
            auto &g = groups[row[2] + "|" + row[3] + "|" + row[4]];
            g.first.push_back(std::stod(row[5]));
            g.second.push_back(std::stod(row[7]));
        }
    Json med = Json::array();
    for (const auto &[key, v] : groups)
        med.push_back(Json{{"cell", key},
                           {"replicates", v.first.size()},
                           {"median_true_gain_db", number_or_string(median(v.first))},
                           {"median_gap_db", number_or_string(median(v.second))}});
    out.summary = Json{{"experiment", "table1"}, {"config", to_json(c)}, {"medians", std::move(med)}};
    return out;
}

} // namespace floquet
