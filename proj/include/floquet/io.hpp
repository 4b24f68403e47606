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

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "floquet/estimation.hpp"

namespace floquet::io
{

using Json = nlohmann::ordered_json;

// File access. Failures to open or write raise IoError; malformed JSON raises ParseError.
Json read_json(const std::filesystem::path &path);
void write_text(const std::filesystem::path &path, const std::string &text);
void write_json(const std::filesystem::path &path, const Json &j);
std::string dump(const Json &j);

// Complex values are [re, im] pairs; matrices are arrays of rows.
Json complex_to_json(Complex z);
Json matrix_to_json(const CMatrix &m);
Json vector_to_json(const CVector &v);

// Readers take the JSON pointer of the node for error messages.
Complex complex_from_json(const Json &j, const std::string &ptr);
CMatrix matrix_from_json(const Json &j, const std::string &ptr);
CVector vector_from_json(const Json &j, const std::string &ptr);

Json to_json(const ScenarioConfig &c);
ScenarioConfig scenario_config_from_json(const Json &j, const std::string &ptr = "");

// Top-level keys: config, static_model, loads, delays_s.
Json to_json(const Scenario &s);
Scenario scenario_from_json(const Json &j);
void save_scenario(const Scenario &s, const std::filesystem::path &path);
Scenario load_scenario(const std::filesystem::path &path);

Json to_json(const ProxySet &p);
ProxySet proxies_from_json(const Json &j, const std::string &ptr = "");

// Pattern states are written 1-based.
Json to_json(const Campaign &c);
Campaign campaign_from_json(const Json &j);

Json to_json(const OptimizerConfig &c);
OptimizerConfig optimizer_config_from_json(const Json &j, const std::string &ptr = "");

Json to_json(const GaugeParams &g);
GaugeParams gauge_from_json(const Json &j, const std::string &ptr);

Json to_json(const AdmissibilityReport &r);

// Keys: seed, config, gauges, loss_trace, admissibility, aborted, abort_reason, aligned_proxies.
Json to_json(const AlignmentResult &r);
AlignmentResult alignment_result_from_json(const Json &j);

} // namespace floquet::io
