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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "generation/backend.hpp"

namespace rephrase {

// Keyed store of raw backend responses, optionally persisted as JSONL.
//
// First write wins: while a key is being computed, concurrent requests for the
// same key wait for that computation instead of calling the backend again, so
// backend invocations equal the number of distinct keys requested.
class GenerationCache {
 public:
  struct Entry {
    std::string raw_output;
    std::chrono::milliseconds latency{0};
    std::optional<TokenUsage> usage;
  };

  struct Lookup {
    Entry entry;
    bool hit = false;
  };

  // In-memory only.
  GenerationCache() = default;
  // Loads <file> if it exists and appends every new entry to it.
  explicit GenerationCache(std::filesystem::path file);

  GenerationCache(const GenerationCache&) = delete;
  GenerationCache& operator=(const GenerationCache&) = delete;

  // Returns the stored entry, or runs `compute`, stores and returns its
  // result. Exceptions from `compute` propagate and nothing is stored. A
  // failed persistent write throws kIo.
  Lookup GetOrCompute(const std::string& key, const std::function<Entry()>& compute);

  std::optional<Entry> Find(const std::string& key) const;
  std::size_t size() const;

  // Rewrites the backing file with entries in key order.
  void Compact();

 private:
  void Append(const std::string& key, const Entry& entry);

  std::optional<std::filesystem::path> file_;
  std::ofstream out_;
  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
  std::unordered_map<std::string, std::shared_future<Entry>> in_flight_;
};

}  // namespace rephrase
