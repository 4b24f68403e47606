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

#include "floquet/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace floquet::io
{

namespace
{

using Index = Eigen::Index;

const Json &child(const Json &j, const std::string &key, const std::string &ptr)
{
    if (!j.is_object())
        throw ParseError(ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(ptr + "/" + key, "missing field");
    return *it;
}

const Json &array(const Json &j, const std::string &ptr)
{
    if (!j.is_array())
        throw ParseError(ptr, "expected an array");
    return j;
}

double number(const Json &j, const std::string &ptr)
{
    if (!j.is_number())
        throw ParseError(ptr, "expected a number");
    return j.get<double>();
}

std::uint64_t unsigned_int(const Json &j, const std::string &ptr)
{
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw ParseError(ptr, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

int integer(const Json &j, const std::string &ptr)
{
    if (!j.is_number_integer())
        throw ParseError(ptr, "expected an integer");
    return j.get<int>();
}

bool boolean(const Json &j, const std::string &ptr)
{
    if (!j.is_boolean())
        throw ParseError(ptr, "expected a boolean");
    return j.get<bool>();
}

std::string text(const Json &j, const std::string &ptr)
{
    if (!j.is_string())
        throw ParseError(ptr, "expected a string");
    return j.get<std::string>();
}

double number_field(const Json &j, const std::string &key, const std::string &ptr)
{
    return number(child(j, key, ptr), ptr + "/" + key);
}

std::size_t size_field(const Json &j, const std::string &key, const std::string &ptr)
{
    return static_cast<std::size_t>(unsigned_int(child(j, key, ptr), ptr + "/" + key));
}

std::vector<double> reals(const Json &j, const std::string &ptr)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < array(j, ptr).size(); ++i)
        out.push_back(number(j[i], ptr + "/" + std::to_string(i)));
    return out;
}

HarmonicGrid grid_from_json(const Json &j, const std::string &ptr)
{
    const double f0 = number_field(j, "f0_hz", ptr);
    const double fm = number_field(j, "fm_hz", ptr);
    const Json &h = array(child(j, "harmonics", ptr), ptr + "/harmonics");
    std::vector<int> hs;
    for (std::size_t i = 0; i < h.size(); ++i)
        hs.push_back(integer(h[i], ptr + "/harmonics/" + std::to_string(i)));
    try
    {
        return HarmonicGrid(f0, fm, std::move(hs));
    }
    catch (const ValidationError &e)
    {
        throw ParseError(ptr, e.what());
    }
}

Json grid_to_json(const HarmonicGrid &g)
{
    return Json{{"f0_hz", g.f0()}, {"fm_hz", g.fm()}, {"harmonics", g.harmonics()}};
}

Json states_to_json(const Eigen::MatrixXi &s)
{
    Json rows = Json::array();
    for (Index i = 0; i < s.rows(); ++i)
    {
        Json row = Json::array();
        for (Index q = 0; q < s.cols(); ++q)
            row.push_back(s(i, q) + 1);
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXi states_from_json(const Json &j, const std::string &ptr)
{
    const Json &rows = array(j, ptr);
    if (rows.empty())
        throw ParseError(ptr, "empty state matrix");
    const std::size_t q = array(rows[0], ptr + "/0").size();
    Eigen::MatrixXi s(static_cast<Index>(rows.size()), static_cast<Index>(q));
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const std::string rp = ptr + "/" + std::to_string(i);
        if (array(rows[i], rp).size() != q)
            throw ParseError(rp, "ragged state matrix");
        for (std::size_t c = 0; c < q; ++c)
        {
            const int v = integer(rows[i][c], rp + "/" + std::to_string(c));
            if (v < 1)
                throw ParseError(rp + "/" + std::to_string(c), "load states are 1-based");
            s(static_cast<Index>(i), static_cast<Index>(c)) = v - 1;
        }
    }
    return s;
}

} // namespace

Json read_json(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    try
    {
        return Json::parse(buf.str());
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ParseError("", "'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::filesystem::path &path, const std::string &content)
{
    if (path.has_parent_path())
    {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

std::string dump(const Json &j) { return j.dump(1, '\t') + "\n"; }

void write_json(const std::filesystem::path &path, const Json &j) { write_text(path, dump(j)); }

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const CMatrix &m)
{
    Json rows = Json::array();
    for (Index r = 0; r < m.rows(); ++r)
    {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c)
            row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_to_json(const CVector &v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(complex_to_json(v(i)));
    return out;
}

Complex complex_from_json(const Json &j, const std::string &ptr)
{
    if (!j.is_array() || j.size() != 2)
        throw ParseError(ptr, "expected a [re, im] pair");
    return {number(j[0], ptr + "/0"), number(j[1], ptr + "/1")};
}

CMatrix matrix_from_json(const Json &j, const std::string &ptr)
{
    const Json &rows = array(j, ptr);
    const std::size_t nc = rows.empty() ? 0 : array(rows[0], ptr + "/0").size();
    CMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(nc));
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
        const std::string rp = ptr + "/" + std::to_string(r);
        if (array(rows[r], rp).size() != nc)
            throw ParseError(rp, "row length differs from row 0 (" + std::to_string(nc) + ")");
        for (std::size_t c = 0; c < nc; ++c)
            m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from_json(rows[r][c], rp + "/" + std::to_string(c));
    }
    return m;
}

CVector vector_from_json(const Json &j, const std::string &ptr)
{
    const Json &a = array(j, ptr);
    CVector v(static_cast<Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        v(static_cast<Index>(i)) = complex_from_json(a[i], ptr + "/" + std::to_string(i));
    return v;
}

Json to_json(const ScenarioConfig &c)
{
    return Json{{"f0_hz", c.f0_hz},
                {"fm_hz", c.fm_hz},
                {"gt_harmonics", c.gt_harmonics},
                {"retained_harmonics", c.retained_harmonics},
                {"n_t", c.n_t},
                {"n_r", c.n_r},
                {"n_s", c.n_s},
                {"n_states", c.n_states},
                {"q", c.q},
                {"reciprocal", c.reciprocal},
                {"passivity_margin", c.passivity_margin},
                {"dispersion_scale", c.dispersion_scale},
                {"delay_scale", c.delay_scale},
                {"seed", c.seed}};
}

ScenarioConfig scenario_config_from_json(const Json &j, const std::string &ptr)
{
    if (!j.is_object())
        throw ParseError(ptr, "expected an object");
    // Missing keys keep their defaults; present keys must have the right type.
    ScenarioConfig c;
    auto num = [&](const char *key, double &dst) {
        if (j.contains(key))
            dst = number(j[key], ptr + "/" + key);
    };
    auto cnt = [&](const char *key, std::size_t &dst) {
        if (j.contains(key))
            dst = static_cast<std::size_t>(unsigned_int(j[key], ptr + "/" + key));
    };
    num("f0_hz", c.f0_hz);
    num("fm_hz", c.fm_hz);
    cnt("gt_harmonics", c.gt_harmonics);
    cnt("retained_harmonics", c.retained_harmonics);
    cnt("n_t", c.n_t);
    cnt("n_r", c.n_r);
    cnt("n_s", c.n_s);
    cnt("n_states", c.n_states);
    cnt("q", c.q);
    if (j.contains("reciprocal"))
        c.reciprocal = boolean(j["reciprocal"], ptr + "/reciprocal");
    num("passivity_margin", c.passivity_margin);
    num("dispersion_scale", c.dispersion_scale);
    num("delay_scale", c.delay_scale);
    if (j.contains("seed"))
        c.seed = unsigned_int(j["seed"], ptr + "/seed");
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        static const char *known[] = {"f0_hz", "fm_hz", "gt_harmonics", "retained_harmonics", "n_t",
                                      "n_r", "n_s", "n_states", "q", "reciprocal",
                                      "passivity_margin", "dispersion_scale", "delay_scale", "seed"};
        if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
            throw ParseError(ptr + "/" + it.key(), "unknown configuration key");
    }
    return c;
}

Json to_json(const Scenario &s)
{
    Json model = Json::array();
    for (const auto &m : s.model.matrices())
        model.push_back(matrix_to_json(m));
    Json loads = Json::array();
    for (Index h = 0; h < s.loads.rho().rows(); ++h)
        loads.push_back(vector_to_json(s.loads.rho().row(h).transpose()));
    return Json{{"config", to_json(s.config)},
                {"static_model", std::move(model)},
                {"loads", std::move(loads)},
                {"delays_s", s.delays}};
}

Scenario scenario_from_json(const Json &j)
{
    const ScenarioConfig config = scenario_config_from_json(child(j, "config", ""), "/config");
    try
    {
        config.validate();
    }
    catch (const ValidationError &e)
    {
        throw ParseError("/config", e.what());
    }
    const HarmonicGrid grid = config.gt_grid();
    const std::size_t n = config.n_t + config.n_r + config.n_s;

    const Json &model = array(child(j, "static_model", ""), "/static_model");
    if (model.size() != grid.size())
        throw ParseError("/static_model", "expected " + std::to_string(grid.size()) +
                                              " per-harmonic matrices (config.gt_harmonics), found " +
                                              std::to_string(model.size()));
    std::vector<CMatrix> mats;
    for (std::size_t h = 0; h < model.size(); ++h)
    {
        const std::string p = "/static_model/" + std::to_string(h);
        CMatrix m = matrix_from_json(model[h], p);
        if (m.rows() != static_cast<Index>(n) || m.cols() != static_cast<Index>(n))
            throw ParseError(p, "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                    " but config.n_t + config.n_r + config.n_s = " + std::to_string(n));
        mats.push_back(std::move(m));
    }

    const Json &loads = array(child(j, "loads", ""), "/loads");
    if (loads.size() != grid.size())
        throw ParseError("/loads", "expected one load row per ground-truth harmonic");
    CMatrix rho(static_cast<Index>(grid.size()), static_cast<Index>(config.n_states));
    for (std::size_t h = 0; h < loads.size(); ++h)
    {
        const std::string p = "/loads/" + std::to_string(h);
        const CVector row = vector_from_json(loads[h], p);
        if (row.size() != static_cast<Index>(config.n_states))
            throw ParseError(p, "load row has " + std::to_string(row.size()) +
                                    " states but config.n_states = " + std::to_string(config.n_states));
        rho.row(static_cast<Index>(h)) = row.transpose();
    }

    std::vector<double> delays = reals(child(j, "delays_s", ""), "/delays_s");
    if (delays.size() != config.n_s)
        throw ParseError("/delays_s", "delays_s has " + std::to_string(delays.size()) +
                                          " entries but config.n_s = " + std::to_string(config.n_s));
    try
    {
        StaticScatterModel sm(grid, config.partition(), std::move(mats), config.reciprocal);
        LoadSet ls(grid, std::move(rho));
        return Scenario{config, std::move(sm), std::move(ls), std::move(delays)};
    }
    catch (const ParseError &)
    {
        throw;
    }
    catch (const ValidationError &e)
    {
        throw ParseError("", e.what());
    }
}

void save_scenario(const Scenario &s, const std::filesystem::path &path) { write_json(path, to_json(s)); }

Scenario load_scenario(const std::filesystem::path &path) { return scenario_from_json(read_json(path)); }

Json to_json(const ProxySet &p)
{
    Json per = Json::array();
    for (std::size_t h = 0; h < p.grid().size(); ++h)
    {
        const auto &t = p.at(h);
        per.push_back(Json{{"harmonic", p.grid().harmonics()[h]},
                           {"hd", matrix_to_json(t.hd)},
                           {"a", matrix_to_json(t.a)},
                           {"gamma", matrix_to_json(t.gamma)},
                           {"b", matrix_to_json(t.b)},
                           {"rho", vector_to_json(t.rho)}});
    }
    return Json{{"grid", grid_to_json(p.grid())}, {"mc_aware", p.mc_aware()}, {"harmonics", std::move(per)}};
}

ProxySet proxies_from_json(const Json &j, const std::string &ptr)
{
    const HarmonicGrid grid = grid_from_json(child(j, "grid", ptr), ptr + "/grid");
    const bool mc = boolean(child(j, "mc_aware", ptr), ptr + "/mc_aware");
    const Json &per = array(child(j, "harmonics", ptr), ptr + "/harmonics");
    if (per.size() != grid.size())
        throw ParseError(ptr + "/harmonics", "expected one entry per grid harmonic");
    std::vector<ProxyParams> params;
    for (std::size_t h = 0; h < per.size(); ++h)
    {
        const std::string p = ptr + "/harmonics/" + std::to_string(h);
        const Json &e = per[h];
        if (integer(child(e, "harmonic", p), p + "/harmonic") != grid.harmonics()[h])
            throw ParseError(p + "/harmonic", "harmonic does not match the grid order");
        ProxyParams t;
        t.hd = matrix_from_json(child(e, "hd", p), p + "/hd");
        t.a = matrix_from_json(child(e, "a", p), p + "/a");
        t.gamma = matrix_from_json(child(e, "gamma", p), p + "/gamma");
        t.b = matrix_from_json(child(e, "b", p), p + "/b");
        t.rho = vector_from_json(child(e, "rho", p), p + "/rho");
        t.mc_aware = mc;
        try
        {
            t.validate();
        }
        catch (const ValidationError &err)
        {
            throw ParseError(p, err.what());
        }
        params.push_back(std::move(t));
    }
    try
    {
        return ProxySet(grid, std::move(params));
    }
    catch (const ValidationError &err)
    {
        throw ParseError(ptr + "/harmonics", err.what());
    }
}

Json to_json(const Campaign &c)
{
    Json recs = Json::array();
    for (const auto &r : c.records)
    {
        Json obs;
        if (c.mode == MeasurementMode::m2)
        {
            Json rows = Json::array();
            for (Index i = 0; i < r.observation.data.rows(); ++i)
            {
                Json row = Json::array();
                for (Index k = 0; k < r.observation.data.cols(); ++k)
                    row.push_back(r.observation.data(i, k).real());
                rows.push_back(std::move(row));
            }
            obs = std::move(rows);
        }
        else
            obs = matrix_to_json(r.observation.data);
        recs.push_back(Json{{"states", states_to_json(r.pattern.states)},
                            {"delays_s", r.pattern.delays},
                            {"observation", std::move(obs)}});
    }
    return Json{{"mode", to_string(c.mode)},
                {"snr_db", c.snr_db ? Json(*c.snr_db) : Json(nullptr)},
                {"snr_reference", to_string(c.snr_reference)},
                {"noise_variance", c.noise_variance},
                {"grid", grid_to_json(c.grid)},
                {"n_t", c.n_t},
                {"n_r", c.n_r},
                {"q", c.q},
                {"seed", c.seed},
                {"records", std::move(recs)}};
}

Campaign campaign_from_json(const Json &j)
{
    Campaign c;
    try
    {
        c.mode = parse_mode(text(child(j, "mode", ""), "/mode"));
        c.snr_reference = parse_snr_reference(text(child(j, "snr_reference", ""), "/snr_reference"));
    }
    catch (const ParseError &)
    {
        throw;
    }
    catch (const ValidationError &e)
    {
        throw ParseError("/mode", e.what());
    }
    const Json &snr = child(j, "snr_db", "");
    if (!snr.is_null())
        c.snr_db = number(snr, "/snr_db");
    c.noise_variance = number_field(j, "noise_variance", "");
    c.grid = grid_from_json(child(j, "grid", ""), "/grid");
    c.n_t = size_field(j, "n_t", "");
    c.n_r = size_field(j, "n_r", "");
    c.q = size_field(j, "q", "");
    c.seed = unsigned_int(child(j, "seed", ""), "/seed");
    const Json &recs = array(child(j, "records", ""), "/records");
    for (std::size_t k = 0; k < recs.size(); ++k)
    {
        const std::string p = "/records/" + std::to_string(k);
        CampaignRecord r;
        r.pattern.states = states_from_json(child(recs[k], "states", p), p + "/states");
        r.pattern.delays = reals(child(recs[k], "delays_s", p), p + "/delays_s");
        if (r.pattern.delays.size() != r.pattern.n_s())
            throw ParseError(p + "/delays_s", "delays_s length differs from the number of state rows");
        r.observation.mode = c.mode;
        const Json &obs = child(recs[k], "observation", p);
        if (c.mode == MeasurementMode::m2)
        {
            const Json &rows = array(obs, p + "/observation");
            const std::size_t nc = rows.empty() ? 0 : array(rows[0], p + "/observation/0").size();
            r.observation.data.resize(static_cast<Index>(rows.size()), static_cast<Index>(nc));
            for (std::size_t i = 0; i < rows.size(); ++i)
            {
                const std::string rp = p + "/observation/" + std::to_string(i);
                if (array(rows[i], rp).size() != nc)
                    throw ParseError(rp, "ragged observation");
                for (std::size_t q = 0; q < nc; ++q)
                    r.observation.data(static_cast<Index>(i), static_cast<Index>(q)) =
                        number(rows[i][q], rp + "/" + std::to_string(q));
            }
        }
        else
            r.observation.data = matrix_from_json(obs, p + "/observation");
        c.records.push_back(std::move(r));
    }
    try
    {
        c.validate();
    }
    catch (const ValidationError &e)
    {
        throw ParseError("/records", e.what());
    }
    return c;
}

Json to_json(const OptimizerConfig &c)
{
    return Json{{"iterations", c.iterations},     {"lr_start", c.lr_start},
                {"lr_end", c.lr_end},             {"beta1", c.beta1},
                {"beta2", c.beta2},               {"epsilon", c.epsilon},
                {"bias_correction", c.bias_correction}, {"weight_decay", c.weight_decay},
                {"init_spread", c.init_spread},   {"seed", c.seed}};
}

OptimizerConfig optimizer_config_from_json(const Json &j, const std::string &ptr)
{
    if (!j.is_object())
        throw ParseError(ptr, "expected an object");
    OptimizerConfig c;
    if (j.contains("iterations"))
        c.iterations = static_cast<std::size_t>(unsigned_int(j["iterations"], ptr + "/iterations"));
    auto num = [&](const char *key, double &dst) {
        if (j.contains(key))
            dst = number(j[key], ptr + "/" + key);
    };
    num("lr_start", c.lr_start);
    num("lr_end", c.lr_end);
    num("beta1", c.beta1);
    num("beta2", c.beta2);
    num("epsilon", c.epsilon);
    num("weight_decay", c.weight_decay);
    num("init_spread", c.init_spread);
    if (j.contains("bias_correction"))
        c.bias_correction = boolean(j["bias_correction"], ptr + "/bias_correction");
    if (j.contains("seed"))
        c.seed = unsigned_int(j["seed"], ptr + "/seed");
    try
    {
        c.validate();
    }
    catch (const ValidationError &e)
    {
        throw ParseError(ptr, e.what());
    }
    return c;
}

Json to_json(const GaugeParams &g)
{
    return Json{{"variant", g.variant == GaugeVariant::mobius ? "mobius" : "affine"},
                {"d", vector_to_json(g.d)},
                {"gamma", complex_to_json(g.gamma)},
                {g.variant == GaugeVariant::mobius ? "mu" : "eta", complex_to_json(g.third)}};
}

GaugeParams gauge_from_json(const Json &j, const std::string &ptr)
{
    GaugeParams g;
    const std::string v = text(child(j, "variant", ptr), ptr + "/variant");
    if (v == "mobius")
        g.variant = GaugeVariant::mobius;
    else if (v == "affine")
        g.variant = GaugeVariant::affine;
    else
        throw ParseError(ptr + "/variant", "expected 'mobius' or 'affine'");
    g.d = vector_from_json(child(j, "d", ptr), ptr + "/d");
    g.gamma = complex_from_json(child(j, "gamma", ptr), ptr + "/gamma");
    const char *third = g.variant == GaugeVariant::mobius ? "mu" : "eta";
    g.third = complex_from_json(child(j, third, ptr), ptr + "/" + third);
    return g;
}

Json to_json(const AdmissibilityReport &r)
{
    Json v = Json::array();
    for (const auto &x : r.violations)
        v.push_back(Json{{"constraint", to_string(x.constraint)},
                         {"harmonic_index", x.harmonic_index},
                         {"element", x.element},
                         {"value", x.value}});
    return Json{{"ok", r.ok()}, {"violations", std::move(v)}};
}

Json to_json(const AlignmentResult &r)
{
    Json gauges = Json::array();
    for (const auto &g : r.gauges)
        gauges.push_back(to_json(g));
    return Json{{"seed", r.config.seed},
                {"config", to_json(r.config)},
                {"gauges", std::move(gauges)},
                {"loss_trace", r.loss_trace},
                {"admissibility", to_json(r.admissibility)},
                {"aborted", r.aborted},
                {"abort_reason", r.abort_reason},
                {"aligned_proxies", to_json(r.aligned)}};
}

AlignmentResult alignment_result_from_json(const Json &j)
{
    const OptimizerConfig cfg = optimizer_config_from_json(child(j, "config", ""), "/config");
    ProxySet aligned = proxies_from_json(child(j, "aligned_proxies", ""), "/aligned_proxies");
    std::vector<GaugeParams> gauges;
    const Json &ga = array(child(j, "gauges", ""), "/gauges");
    for (std::size_t h = 0; h < ga.size(); ++h)
        gauges.push_back(gauge_from_json(ga[h], "/gauges/" + std::to_string(h)));
    if (gauges.size() != aligned.grid().size())
        throw ParseError("/gauges", "expected one gauge per harmonic of aligned_proxies");
    AlignmentResult r{std::move(gauges), std::move(aligned), reals(child(j, "loss_trace", ""), "/loss_trace"),
                      AdmissibilityReport{}, cfg, boolean(child(j, "aborted", ""), "/aborted"),
                      text(child(j, "abort_reason", ""), "/abort_reason")};
    return r;
}

} // namespace floquet::io
