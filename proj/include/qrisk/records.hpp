// Copyright 2026 The qrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "qrisk/compiler.hpp"
#include "qrisk/estimation.hpp"
#include "qrisk/risk.hpp"

namespace qrisk {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const AmplitudeEstimate& est);
nlohmann::json to_json(const RiskReport& r);
nlohmann::json to_json(const CircuitMetrics& m);
nlohmann::json to_json(const CompileReport& r);

std::string read_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// Flat `key = value` lines; `#` starts a comment. Later keys win.
std::map<std::string, std::string> parse_config(const std::string& text);

}  // namespace qrisk
