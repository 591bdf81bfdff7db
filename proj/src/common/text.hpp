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

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

namespace rephrase {

// Trims ASCII and Unicode whitespace from both ends of UTF-8 text.
std::string_view Trim(std::string_view text);

// Number of code points in UTF-8 text. Malformed bytes count as one each.
std::size_t CodepointLength(std::string_view text);

bool StartsWithIgnoreCase(std::string_view text, std::string_view prefix);

std::string ReadFileToString(const std::filesystem::path& path);

// Writes via a temporary sibling and rename, so readers never see a torn file.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view content);

// UTC ISO-8601 timestamp. Honours SOURCE_DATE_EPOCH when set.
std::string UtcTimestamp();

}  // namespace rephrase
