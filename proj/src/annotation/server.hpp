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
#include <memory>
#include <optional>
#include <string>

#include "annotation/study.hpp"

namespace rephrase {

// JSON API over a Study:
//   GET  /api/health
//   GET  /api/tasks/next?annotator=ID   {"done": false, "task": {...}, "total": N} or {"done": true}
//   POST /api/annotations               AnnotationRecord body -> {"ok": true}
//   GET  /api/progress
//   GET  /api/results[?partial=1]       409 while incomplete
// Errors are {"error": {"code", "message"}}. Optionally serves a static
// directory at "/".
class AnnotationServer {
 public:
  AnnotationServer(Study& study, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~AnnotationServer();

  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Returns the bound port; throws kIo on failure.
  int BindAnyPort(const std::string& host = "127.0.0.1");
  void Bind(const std::string& host, int port);
  // Blocks until Stop().
  void Listen();
  void Stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rephrase
