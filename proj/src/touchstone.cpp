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

#include "floquet/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace floquet::touchstone
{

namespace
{

using Index = Eigen::Index;

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

double to_double(const std::string &tok, std::size_t line)
{
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ValidationError("touchstone line " + std::to_string(line) + ": '" + tok + "' is not a number");
    return v;
}

struct Options
{
    double unit = 1e9;
    DataFormat fmt = DataFormat::ma;
    double reference = 50.0;
};

Options parse_options(const std::string &line, std::size_t lineno)
{
    Options o;
    const auto toks = split_ws(line.substr(1));
    for (std::size_t i = 0; i < toks.size(); ++i)
    {
        const std::string t = lower(toks[i]);
        if (t == "hz")
            o.unit = 1.0;
        else if (t == "khz")
            o.unit = 1e3;
        else if (t == "mhz")
            o.unit = 1e6;
        else if (t == "ghz")
            o.unit = 1e9;
        else if (t == "s")
            continue;
        else if (t == "y" || t == "z" || t == "h" || t == "g")
            throw ValidationError("touchstone line " + std::to_string(lineno) + ": only S-parameters are supported");
        else if (t == "ma")
            o.fmt = DataFormat::ma;
        else if (t == "db")
            o.fmt = DataFormat::db;
        else if (t == "ri")
            o.fmt = DataFormat::ri;
        else if (t == "r")
        {
            if (i + 1 >= toks.size())
                throw ValidationError("touchstone line " + std::to_string(lineno) + ": R without a value");
            o.reference = to_double(toks[++i], lineno);
        }
        else
            throw ValidationError("touchstone line " + std::to_string(lineno) + ": unknown option '" + toks[i] + "'");
    }
    return o;
}

Complex decode(double a, double b, DataFormat fmt)
{
    switch (fmt)
    {
    case DataFormat::ri:
        return {a, b};
    case DataFormat::ma:
        return std::polar(a, b * kPi / 180.0);
    case DataFormat::db:
        return std::polar(std::pow(10.0, a / 20.0), b * kPi / 180.0);
    }
    return {a, b};
}

std::pair<double, double> encode(Complex z, DataFormat fmt)
{
    switch (fmt)
    {
    case DataFormat::ri:
        return {z.real(), z.imag()};
    case DataFormat::ma:
        return {std::abs(z), std::arg(z) * 180.0 / kPi};
    case DataFormat::db:
        return {20.0 * std::log10(std::abs(z)), std::arg(z) * 180.0 / kPi};
    }
    return {z.real(), z.imag()};
}

std::string number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Index (row, col) of the k-th pair in a frequency record.
std::pair<Index, Index> pair_position(std::size_t k, std::size_t n, bool two_port_21_12)
{
    if (n == 2 && two_port_21_12)
    {
        static const Index r[] = {0, 1, 0, 1};
        static const Index c[] = {0, 0, 1, 1};
        return {r[k], c[k]};
    }
    return {static_cast<Index>(k / n), static_cast<Index>(k % n)};
}

} // namespace

NetworkData parse(std::string_view text, std::size_t n_ports)
{
    Options opt;
    bool seen_options = false;
    bool v2 = false;
    bool in_data = false;
    bool order_21_12 = true; // version 1 two-port convention
    std::size_t expected_freqs = 0;
    std::vector<std::pair<double, std::size_t>> values;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw))
    {
        ++lineno;
        std::string line = raw.substr(0, raw.find('!'));
        line = trim(line);
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            if (!seen_options)
                opt = parse_options(line, lineno);
            seen_options = true;
            continue;
        }
        if (line[0] == '[')
        {
            const auto close = line.find(']');
            if (close == std::string::npos)
                throw ValidationError("touchstone line " + std::to_string(lineno) + ": unterminated keyword");
            const std::string key = lower(line.substr(1, close - 1));
            const std::string arg = trim(line.substr(close + 1));
            if (key == "version")
                v2 = true;
            else if (key == "number of ports")
                n_ports = static_cast<std::size_t>(to_double(arg, lineno));
            else if (key == "two-port data order")
                order_21_12 = trim(arg) == "21_12";
            else if (key == "number of frequencies")
                expected_freqs = static_cast<std::size_t>(to_double(arg, lineno));
            else if (key == "matrix format")
            {
                if (lower(arg) != "full")
                    throw ValidationError("touchstone line " + std::to_string(lineno) +
                                          ": only [Matrix Format] Full is supported");
            }
            else if (key == "reference")
            {
                const auto toks = split_ws(arg);
                for (const auto &t : toks)
                    if (to_double(t, lineno) != opt.reference)
                        throw ValidationError("touchstone line " + std::to_string(lineno) +
                                              ": per-port reference impedances must all equal R");
            }
            else if (key == "network data")
                in_data = true;
            else if (key == "end")
                break;
            continue;
        }
        if (v2 && !in_data)
            continue;
        for (const auto &tok : split_ws(line))
            values.emplace_back(to_double(tok, lineno), lineno);
    }
    if (n_ports == 0)
        throw ValidationError("touchstone: unknown port count (use a .sNp extension or [Number of Ports])");
    if (opt.reference != 50.0)
        throw ValidationError("touchstone: reference impedance " + number(opt.reference) +
                              " ohm is not supported (50 ohm required)");

    const std::size_t per_point = 1 + 2 * n_ports * n_ports;
    if (values.size() % per_point != 0)
        throw ValidationError("touchstone: " + std::to_string(values.size()) +
                              " numbers do not form whole frequency records of " + std::to_string(per_point));
    NetworkData out;
    out.n_ports = n_ports;
    out.reference_ohm = opt.reference;
    const Index n = static_cast<Index>(n_ports);
    for (std::size_t base = 0; base < values.size(); base += per_point)
    {
        FrequencyPoint p;
        p.hz = values[base].first * opt.unit;
        if (!out.points.empty() && !(p.hz > out.points.back().hz))
            throw ValidationError("touchstone line " + std::to_string(values[base].second) +
                                  ": frequencies must be strictly increasing");
        p.s.resize(n, n);
        for (std::size_t k = 0; k < n_ports * n_ports; ++k)
        {
            const auto [r, c] = pair_position(k, n_ports, order_21_12);
            p.s(r, c) = decode(values[base + 1 + 2 * k].first, values[base + 2 + 2 * k].first, opt.fmt);
        }
        out.points.push_back(std::move(p));
    }
    if (expected_freqs != 0 && expected_freqs != out.points.size())
        throw ValidationError("touchstone: [Number of Frequencies] says " + std::to_string(expected_freqs) +
                              " but " + std::to_string(out.points.size()) + " records were found");
    return out;
}

NetworkData read(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    std::size_t n = 0;
    static const std::regex ext(R"(\.s(\d+)p)", std::regex::icase);
    std::smatch m;
    const std::string e = path.extension().string();
    if (std::regex_match(e, m, ext))
        n = static_cast<std::size_t>(std::stoul(m[1].str()));
    try
    {
        return parse(buf.str(), n);
    }
    catch (const ValidationError &err)
    {
        throw ValidationError(path.string() + ": " + err.what());
    }
}

std::string format(const NetworkData &data, Version version, DataFormat fmt)
{
    std::ostringstream out;
    const char *f = fmt == DataFormat::ri ? "RI" : fmt == DataFormat::ma ? "MA" : "DB";
    const std::size_t n = data.n_ports;
    if (version == Version::v2)
    {
        out << "[Version] 2.0\n";
        out << "# Hz S " << f << " R " << number(data.reference_ohm) << "\n";
        out << "[Number of Ports] " << n << "\n";
        if (n == 2)
            out << "[Two-Port Data Order] 12_21\n";
        out << "[Number of Frequencies] " << data.points.size() << "\n";
        out << "[Network Data]\n";
    }
    else
        out << "# Hz S " << f << " R " << number(data.reference_ohm) << "\n";
    const bool order_21_12 = version == Version::v1 && n == 2;
    for (const auto &p : data.points)
    {
        out << number(p.hz);
        for (std::size_t k = 0; k < n * n; ++k)
        {
            const auto [r, c] = pair_position(k, n, order_21_12);
            const auto [a, b] = encode(p.s(r, c), fmt);
            if (n > 2 && k % n == 0 && k > 0)
                out << "\n";
            out << " " << number(a) << " " << number(b);
        }
        out << "\n";
    }
    if (version == Version::v2)
        out << "[End]\n";
    return out.str();
}

void write(const std::filesystem::path &path, const NetworkData &data, Version version, DataFormat fmt)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << format(data, version, fmt);
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

NetworkData select_ports(const NetworkData &data, std::span<const std::size_t> ports)
{
    NetworkData out;
    out.n_ports = ports.size();
    out.reference_ohm = data.reference_ohm;
    for (std::size_t p : ports)
        if (p >= data.n_ports)
            throw ValidationError("port " + std::to_string(p) + " out of range for a " + std::to_string(data.n_ports) +
                                  "-port network");
    for (const auto &pt : data.points)
        out.points.push_back(FrequencyPoint{pt.hz, select_block(pt.s, ports, ports)});
    return out;
}

CMatrix terminate_ports(const CMatrix &s, std::span<const std::size_t> keep, const CVector &loads)
{
    std::vector<std::size_t> rest;
    for (std::size_t p = 0; p < static_cast<std::size_t>(s.rows()); ++p)
        if (std::find(keep.begin(), keep.end(), p) == keep.end())
            rest.push_back(p);
    if (static_cast<std::size_t>(loads.size()) != rest.size())
        throw DimensionError("one load reflection coefficient per terminated port required");
    const CMatrix skk = select_block(s, keep, keep);
    if (rest.empty())
        return skk;
    const CMatrix sku = select_block(s, keep, rest);
    const CMatrix suk = select_block(s, rest, keep);
    const CMatrix suu = select_block(s, rest, rest);
    const Index nu = static_cast<Index>(rest.size());
    const CMatrix x = CMatrix::Identity(nu, nu) - suu * loads.asDiagonal();
    return skk + sku * loads.asDiagonal() * x.partialPivLu().solve(suk);
}

ImportResult import_networks(std::span<const NetworkData> networks, const HarmonicGrid &grid,
                             const PortSelection &selection, bool reciprocal)
{
    if (networks.size() != grid.size() && networks.size() != 1)
        throw ValidationError("touchstone import: expected one file per harmonic (" + std::to_string(grid.size()) +
                              ") or a single file, got " + std::to_string(networks.size()));
    if (selection.tx.empty() || selection.rx.empty() || selection.ris.empty())
        throw ValidationError("touchstone import: transmit, receive and tunable port lists must be non-empty");
    std::vector<std::size_t> ports;
    ports.insert(ports.end(), selection.tx.begin(), selection.tx.end());
    ports.insert(ports.end(), selection.rx.begin(), selection.rx.end());
    ports.insert(ports.end(), selection.ris.begin(), selection.ris.end());
    std::vector<std::size_t> sorted = ports;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("touchstone import: a port is assigned to more than one group");

    std::vector<ImportWarning> warnings;
    std::vector<CMatrix> mats;
    for (std::size_t h = 0; h < grid.size(); ++h)
    {
        const NetworkData &net = networks.size() == 1 ? networks[0] : networks[h];
        const int harmonic = grid.harmonics()[h];
        if (net.points.empty())
            throw ValidationError("touchstone import: no data for harmonic " + std::to_string(harmonic));
        if (sorted.back() >= net.n_ports)
            throw DimensionError("touchstone import: port " + std::to_string(sorted.back()) + " selected, file has " +
                                 std::to_string(net.n_ports) + " ports");
        const double f = grid.frequency(harmonic);
        const auto best = std::min_element(net.points.begin(), net.points.end(), [&](const auto &a, const auto &b) {
            return std::abs(a.hz - f) < std::abs(b.hz - f);
        });
        const double gap = std::abs(best->hz - f);
        if (gap > grid.fm() / 10.0)
            warnings.push_back({ImportWarning::Kind::frequency_gap, harmonic, gap,
                                "harmonic " + std::to_string(harmonic) + ": nearest frequency point is " +
                                    number(gap) + " Hz away from " + number(f) + " Hz"});
        CMatrix s = select_block(best->s, ports, ports);
        const double sv = largest_singular_value(s);
        if (sv > kPassivityTolerance)
            warnings.push_back({ImportWarning::Kind::passivity_violation, harmonic, sv,
                                "harmonic " + std::to_string(harmonic) + ": largest singular value " + number(sv) +
                                    " exceeds the passivity tolerance"});
        else if (sv > 1.0 + 1e-9)
            warnings.push_back({ImportWarning::Kind::passivity_note, harmonic, sv,
                                "harmonic " + std::to_string(harmonic) + ": largest singular value " + number(sv) +
                                    " slightly above 1"});
        mats.push_back(std::move(s));
    }
    return ImportResult{StaticScatterModel(grid,
                                           PortPartition::contiguous(selection.tx.size(), selection.rx.size(), selection.ris.size()),
                                           std::move(mats), reciprocal),
                        std::move(warnings)};
}

ImportResult import_touchstone_set(std::span<const std::filesystem::path> files, const HarmonicGrid &grid,
                                   const PortSelection &selection, bool reciprocal)
{
    std::vector<NetworkData> nets;
    nets.reserve(files.size());
    for (const auto &f : files)
        nets.push_back(read(f));
    return import_networks(nets, grid, selection, reciprocal);
}

std::vector<NetworkData> export_networks(const StaticScatterModel &model)
{
    std::vector<NetworkData> out;
    for (std::size_t h = 0; h < model.grid().size(); ++h)
    {
        NetworkData d;
        d.n_ports = model.partition().n_ports();
        d.points.push_back(FrequencyPoint{model.grid().frequency(model.grid().harmonics()[h]), model.matrix(h)});
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace floquet::touchstone
