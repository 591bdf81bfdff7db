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

#include "generation/extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "common/error.hpp"
#include "common/text.hpp"

namespace rephrase {
namespace {

constexpr std::string_view kCue = "non-hate speech:";
constexpr std::string_view kInputMarker = "hate speech:";

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view DropLeadingParagraph(std::string_view t) {
  if (!StartsWithIgnoreCase(t, "thought:") && !StartsWithIgnoreCase(t, kInputMarker)) return t;
  const auto pos = AsciiLower(t).find(kCue);
  if (pos == std::string::npos) return t;
  return t.substr(pos + kCue.size());
}

std::string_view DropEchoedCue(std::string_view t) {
  return StartsWithIgnoreCase(t, kCue) ? t.substr(kCue.size()) : t;
}

std::string_view TruncateAtNewInput(std::string_view t) {
  for (auto nl = t.find('\n'); nl != std::string_view::npos; nl = t.find('\n', nl + 1)) {
    if (StartsWithIgnoreCase(Trim(t.substr(nl + 1)), kInputMarker)) return t.substr(0, nl);
  }
  return t;
}

std::string_view StripWrappingQuotes(std::string_view t) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 2> kPairs = {{
      {"\"", "\""},
      {"“", "”"},
  }};
  for (const auto& [open, close] : kPairs) {
    if (t.size() >= open.size() + close.size() && t.starts_with(open) && t.ends_with(close)) {
      const auto inner = t.substr(open.size(), t.size() - open.size() - close.size());
      // A quote inside means the marks do not wrap one quotation.
      if (inner.find(open) == std::string_view::npos && inner.find(close) == std::string_view::npos) {
        return inner;
      }
    }
  }
  return t;
}

}  // namespace

std::string ExtractRephrasing(std::string_view raw_output) {
  std::string_view t = Trim(raw_output);
  for (;;) {
    std::string_view next = t;
    next = Trim(DropEchoedCue(next));
    next = Trim(DropLeadingParagraph(next));
    next = Trim(TruncateAtNewInput(next));
    next = Trim(StripWrappingQuotes(next));
    if (next == t) break;
    t = next;
  }
  if (t.empty()) throw Error(ErrorCode::kValidation, "empty generation");
  return std::string(t);
}

}  // namespace rephrase
