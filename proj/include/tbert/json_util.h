// Copyright 2026 The tbert Authors
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

#ifndef TBERT_JSON_UTIL_H_
#define TBERT_JSON_UTIL_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tbert/matrix.h"

namespace tbert {

using Json = nlohmann::ordered_json;

// %.17g formatting; round-trips every finite double exactly.
std::string format_double(double value);

// Serializes like Json::dump but prints floating-point numbers with 17
// significant digits. Non-finite numbers become null.
std::string dump_json(const Json& j, int indent = -1);

Json matrix_to_json(const Matrix& m);  // {"rows", "cols", "data"}
Matrix matrix_from_json(const Json& j);

Json parse_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace tbert

#endif  // TBERT_JSON_UTIL_H_
