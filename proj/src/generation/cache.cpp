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

#include "generation/cache.hpp"

#include "common/error.hpp"
#include "common/jsonl.hpp"

namespace rephrase {
namespace {

Json EntryToJson(const std::string& key, const GenerationCache::Entry& e) {
  Json j = {{"key", key}, {"raw_output", e.raw_output}, {"latency_ms", e.latency.count()}};
  if (e.usage) {
    j["token_usage"] = {{"prompt", e.usage->prompt}, {"completion", e.usage->completion}};
  } else {
    j["token_usage"] = nullptr;
  }
  return j;
}

}  // namespace

GenerationCache::GenerationCache(std::filesystem::path file) : file_(std::move(file)) {
  if (std::filesystem::exists(*file_)) {
    for (const auto& line : ReadJsonLines(*file_)) {
      const auto& j = line.value;
      try {
        Entry e;
        e.raw_output = j.at("raw_output").get<std::string>();
        e.latency = std::chrono::milliseconds(j.value("latency_ms", std::int64_t{0}));
        if (auto u = j.find("token_usage"); u != j.end() && u->is_object()) {
          e.usage = TokenUsage{u->value("prompt", std::int64_t{0}),
                               u->value("completion", std::int64_t{0})};
        }
        // First write wins, also on replay.
        entries_.emplace(j.at("key").get<std::string>(), std::move(e));
      } catch (const Json::exception& ex) {
        throw Error(ErrorCode::kParse, file_->string() + ": line " +
                                           std::to_string(line.line_number) + ": " + ex.what());
      }
    }
  } else if (file_->has_parent_path()) {
    std::filesystem::create_directories(file_->parent_path());
  }
  out_.open(*file_, std::ios::binary | std::ios::app);
  if (!out_) throw Error(ErrorCode::kIo, "cannot open cache file " + file_->string());
}

GenerationCache::Lookup GenerationCache::GetOrCompute(const std::string& key,
                                                      const std::function<Entry()>& compute) {
  std::promise<Entry> promise;
  {
    std::unique_lock lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) return {it->second, true};
    if (auto it = in_flight_.find(key); it != in_flight_.end()) {
      auto pending = it->second;
      lock.unlock();
      return {pending.get(), true};
    }
    in_flight_.emplace(key, promise.get_future().share());
  }

  try {
    Entry entry = compute();
    std::lock_guard lock(mu_);
    Append(key, entry);
    entries_.emplace(key, entry);
    in_flight_.erase(key);
    promise.set_value(entry);
    return {std::move(entry), false};
  } catch (...) {
    std::lock_guard lock(mu_);
    in_flight_.erase(key);
    promise.set_exception(std::current_exception());
    throw;
  }
}

std::optional<GenerationCache::Entry> GenerationCache::Find(const std::string& key) const {
  std::lock_guard lock(mu_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::size_t GenerationCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void GenerationCache::Append(const std::string& key, const Entry& entry) {
  if (!file_) return;
  out_ << EntryToJson(key, entry).dump() << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorCode::kIo, "cache write failed: " + file_->string());
}

void GenerationCache::Compact() {
  std::lock_guard lock(mu_);
  if (!file_) return;
  std::vector<Json> rows;
  rows.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) rows.push_back(EntryToJson(key, entry));
  out_.close();
  WriteJsonLines(*file_, rows);
  out_.open(*file_, std::ios::binary | std::ios::app);
  if (!out_) throw Error(ErrorCode::kIo, "cannot reopen cache file " + file_->string());
}

}  // namespace rephrase
