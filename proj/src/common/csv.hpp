/* Copyright 2026 The rephrase-eval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rephrase {

// RFC 4180 tables: comma separated, double-quote escaping, quoted fields may
// span lines. Each row also carries the 1-based line it started on.
struct CsvRow {
  std::size_t line_number;
  std::vector<std::string> fields;
};

std::vector<CsvRow> ParseCsv(std::string_view text);

std::string CsvEscape(std::string_view field);
std::string CsvLine(const std::vector<std::string>& fields);

}  // namespace rephrase
