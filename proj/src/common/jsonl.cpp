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

#include "common/jsonl.hpp"

#include <sstream>

#include "common/error.hpp"
#include "common/text.hpp"

namespace rephrase {

std::vector<JsonLine> ReadJsonLines(const std::filesystem::path& path) {
  const std::string content = ReadFileToString(path);
  std::vector<JsonLine> rows;
  std::istringstream in(content);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (Trim(line).empty()) continue;
    try {
      rows.push_back({n, Json::parse(line)});
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kParse, path.string() + ": line " + std::to_string(n) +
                                         ": invalid JSON: " + e.what());
    }
  }
  return rows;
}

std::string ToJsonLines(const std::vector<Json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump(-1, ' ', false, Json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

void WriteJsonLines(const std::filesystem::path& path, const std::vector<Json>& rows) {
  WriteFileAtomic(path, ToJsonLines(rows));
}

}  // namespace rephrase
