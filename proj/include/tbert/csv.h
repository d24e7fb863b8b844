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

#ifndef TBERT_CSV_H_
#define TBERT_CSV_H_

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tbert {

using CsvRow = std::vector<std::string>;

// Parses RFC 4180 CSV: comma separated, double-quoted fields may contain
// commas, line breaks and doubled quotes. Accepts CRLF or LF line endings.
// Throws std::runtime_error on an unterminated quoted field.
std::vector<CsvRow> parse_csv(std::string_view text);
std::vector<CsvRow> read_csv(std::istream& in);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const CsvRow& row);

}  // namespace tbert

#endif  // TBERT_CSV_H_
