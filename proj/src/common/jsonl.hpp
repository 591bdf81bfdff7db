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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace rephrase {

using Json = nlohmann::json;

struct JsonLine {
  std::size_t line_number;  // 1-based
  Json value;
};

// Parses one JSON value per non-blank line. Throws kParse naming the line.
std::vector<JsonLine> ReadJsonLines(const std::filesystem::path& path);

std::string ToJsonLines(const std::vector<Json>& rows);

void WriteJsonLines(const std::filesystem::path& path, const std::vector<Json>& rows);

}  // namespace rephrase
