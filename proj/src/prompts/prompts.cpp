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

#include "prompts/prompts.hpp"

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/text.hpp"
#include "prompts/builtin_assets.hpp"

namespace rephrase {
namespace {

// Asset slot order: the four rephrasing kinds, then detection, spans.
constexpr std::array<std::string_view, 6> kAssetFiles = {
    "task_description.txt",  "task_with_definition.txt", "few_shot_demonstrations.txt",
    "chain_of_thought.txt",  "hate_detection.txt",       "hate_span_identification.txt"};

std::size_t SlotOf(PromptKind kind) { return static_cast<std::size_t>(kind); }

std::size_t SlotOf(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::kHateDetection: return 4;
    case ProbeKind::kHateSpanIdentification: return 5;
    case ProbeKind::kHateRephrasing: return SlotOf(PromptKind::kTaskDescription);
  }
  return 0;
}

std::size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

std::string_view CliName(PromptKind kind) {
  switch (kind) {
    case PromptKind::kTaskDescription: return "task";
    case PromptKind::kTaskWithDefinition: return "definition";
    case PromptKind::kFewShotDemonstrations: return "demonstrations";
    case PromptKind::kChainOfThought: return "cot";
  }
  return "task";
}

std::string_view DisplayName(PromptKind kind) {
  switch (kind) {
    case PromptKind::kTaskDescription: return "Task description";
    case PromptKind::kTaskWithDefinition: return "+ definition";
    case PromptKind::kFewShotDemonstrations: return "+ demonstrations";
    case PromptKind::kChainOfThought: return "+ chain-of-thought";
  }
  return "";
}

std::optional<PromptKind> ParsePromptKind(std::string_view name) {
  for (auto k : kAllPromptKinds) {
    if (name == CliName(k)) return k;
  }
  if (name == "TaskDescription") return PromptKind::kTaskDescription;
  if (name == "TaskWithDefinition") return PromptKind::kTaskWithDefinition;
  if (name == "FewShotDemonstrations") return PromptKind::kFewShotDemonstrations;
  if (name == "ChainOfThought") return PromptKind::kChainOfThought;
  return std::nullopt;
}

std::string_view CliName(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::kHateDetection: return "detection";
    case ProbeKind::kHateSpanIdentification: return "spans";
    case ProbeKind::kHateRephrasing: return "rephrasing";
  }
  return "detection";
}

std::optional<ProbeKind> ParseProbeKind(std::string_view name) {
  for (auto k : kAllProbeKinds) {
    if (name == CliName(k)) return k;
  }
  return std::nullopt;
}

std::string KindName(const TemplateKind& kind) {
  if (const auto* p = std::get_if<PromptKind>(&kind)) return std::string(CliName(*p));
  return "probe:" + std::string(CliName(std::get<ProbeKind>(kind)));
}

std::string StripAssetHeader(std::string_view content) {
  std::size_t pos = 0;
  bool had_header = false;
  while (pos < content.size() && content[pos] == '#') {
    const auto nl = content.find('\n', pos);
    pos = nl == std::string_view::npos ? content.size() : nl + 1;
    had_header = true;
  }
  if (had_header && pos < content.size() && content[pos] == '\n') ++pos;
  std::string_view body = content.substr(pos);
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.remove_suffix(1);
  return std::string(body);
}

std::string TemplateVersion(std::string_view body) {
  return "sha256:" + Sha256Hex(body).substr(0, 16);
}

TemplateStore::TemplateStore(std::array<std::string, kAssetCount> bodies) {
  for (std::size_t i = 0; i < kAssetCount; ++i) {
    if (CountOccurrences(bodies[i], kTextSlot) != 1) {
      throw Error(ErrorCode::kValidation, std::string("template ") + std::string(kAssetFiles[i]) +
                                              " must contain the {text} slot exactly once");
    }
    templates_[i].version = TemplateVersion(bodies[i]);
    templates_[i].body = std::move(bodies[i]);
  }
}

TemplateStore TemplateStore::Builtin() {
  std::array<std::string, kAssetCount> bodies;
  for (std::size_t i = 0; i < kAssetCount; ++i) {
    const auto content = builtin_assets::Find(kAssetFiles[i]);
    if (!content) {
      throw Error(ErrorCode::kInternal, "built-in template missing: " + std::string(kAssetFiles[i]));
    }
    bodies[i] = StripAssetHeader(*content);
  }
  return TemplateStore(std::move(bodies));
}

TemplateStore TemplateStore::FromDirectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "template directory not found: " + dir.string());
  }
  std::array<std::string, kAssetCount> bodies;
  for (std::size_t i = 0; i < kAssetCount; ++i) {
    const auto file = dir / kAssetFiles[i];
    if (std::filesystem::exists(file)) {
      bodies[i] = StripAssetHeader(ReadFileToString(file));
    } else {
      bodies[i] = StripAssetHeader(*builtin_assets::Find(kAssetFiles[i]));
    }
  }
  return TemplateStore(std::move(bodies));
}

std::string TemplateStore::RenderBody(const Template& t, std::string_view hate_text,
                                      bool reject_cue) const {
  if (Trim(hate_text).empty()) throw Error(ErrorCode::kInvalidArgument, "empty hate text");
  if (reject_cue && hate_text.find(kOutputCue) != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "hate text contains the output cue \"Non-hate Speech:\"");
  }
  const auto slot = t.body.find(kTextSlot);
  std::string out;
  out.reserve(t.body.size() + hate_text.size());
  out.append(t.body, 0, slot);
  out.append(hate_text);
  out.append(t.body, slot + kTextSlot.size());
  return out;
}

RenderedPrompt TemplateStore::Render(PromptKind kind, std::string_view hate_text) const {
  const auto& t = templates_[SlotOf(kind)];
  return {kind, t.version, RenderBody(t, hate_text, true)};
}

RenderedPrompt TemplateStore::RenderProbe(ProbeKind kind, std::string_view hate_text) const {
  const auto& t = templates_[SlotOf(kind)];
  return {kind, t.version, RenderBody(t, hate_text, kind == ProbeKind::kHateRephrasing)};
}

std::vector<TemplateInfo> TemplateStore::List() const {
  std::vector<TemplateInfo> out;
  for (auto k : kAllPromptKinds) {
    const auto& t = templates_[SlotOf(k)];
    out.push_back({KindName(k), t.version, CodepointLength(t.body)});
  }
  for (auto k : kAllProbeKinds) {
    const auto& t = templates_[SlotOf(k)];
    out.push_back({KindName(k), t.version, CodepointLength(t.body)});
  }
  return out;
}

const std::string& TemplateStore::Version(PromptKind kind) const {
  return templates_[SlotOf(kind)].version;
}

const std::string& TemplateStore::Body(PromptKind kind) const {
  return templates_[SlotOf(kind)].body;
}

}  // namespace rephrase
