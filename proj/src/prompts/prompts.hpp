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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rephrase {

enum class PromptKind {
  kTaskDescription,
  kTaskWithDefinition,
  kFewShotDemonstrations,
  kChainOfThought,
};

inline constexpr std::array<PromptKind, 4> kAllPromptKinds = {
    PromptKind::kTaskDescription, PromptKind::kTaskWithDefinition,
    PromptKind::kFewShotDemonstrations, PromptKind::kChainOfThought};

// Sub-task probes. HateRephrasing renders the task-description template.
enum class ProbeKind {
  kHateDetection,
  kHateSpanIdentification,
  kHateRephrasing,
};

inline constexpr std::array<ProbeKind, 3> kAllProbeKinds = {
    ProbeKind::kHateDetection, ProbeKind::kHateSpanIdentification, ProbeKind::kHateRephrasing};

using TemplateKind = std::variant<PromptKind, ProbeKind>;

// The slot every template carries exactly once.
inline constexpr std::string_view kTextSlot = "{text}";
// Generation cue closing every rephrasing prompt. Inputs containing it are
// rejected so that output extraction stays unambiguous.
inline constexpr std::string_view kOutputCue = "Non-hate Speech:";

// CLI names: task, definition, demonstrations, cot.
std::string_view CliName(PromptKind kind);
// Row labels used in comparison tables.
std::string_view DisplayName(PromptKind kind);
std::optional<PromptKind> ParsePromptKind(std::string_view name);

// CLI names: detection, spans, rephrasing.
std::string_view CliName(ProbeKind kind);
std::optional<ProbeKind> ParseProbeKind(std::string_view name);

std::string KindName(const TemplateKind& kind);

struct RenderedPrompt {
  TemplateKind kind;
  std::string template_version;
  std::string text;
};

struct TemplateInfo {
  std::string kind;
  std::string version;
  std::size_t length;  // code points of the unrendered template
};

// Drops leading "#" comment lines (and one blank line after them) and any
// trailing newlines from a template asset file.
std::string StripAssetHeader(std::string_view file_content);

// Content hash of an unrendered template, e.g. "sha256:1f0c...".
std::string TemplateVersion(std::string_view body);

// Immutable set of the six template assets. Rendering is const and
// thread-safe.
class TemplateStore {
 public:
  // Templates compiled into the library from assets/prompts.
  static TemplateStore Builtin();
  // Reads <dir>/<asset>.txt for each template; missing files fall back to the
  // built-in text.
  static TemplateStore FromDirectory(const std::filesystem::path& dir);

  RenderedPrompt Render(PromptKind kind, std::string_view hate_text) const;
  RenderedPrompt RenderProbe(ProbeKind kind, std::string_view hate_text) const;

  // Seven entries: the four rephrasing templates, then the three probes.
  std::vector<TemplateInfo> List() const;

  const std::string& Version(PromptKind kind) const;
  const std::string& Body(PromptKind kind) const;

 private:
  struct Template {
    std::string body;
    std::string version;
  };

  static constexpr std::size_t kAssetCount = 6;

  explicit TemplateStore(std::array<std::string, kAssetCount> bodies);
  std::string RenderBody(const Template& t, std::string_view hate_text, bool reject_cue) const;

  std::array<Template, kAssetCount> templates_;
};

}  // namespace rephrase
