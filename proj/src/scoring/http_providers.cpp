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

#include "scoring/http_providers.hpp"

#include "common/error.hpp"

namespace rephrase {
namespace {

HttpJsonClient::Headers BearerHeaders(const std::string& key) {
  HttpJsonClient::Headers h;
  if (!key.empty()) h.emplace("Authorization", "Bearer " + key);
  return h;
}

[[noreturn]] void Malformed(std::string_view provider, std::string_view what) {
  throw Error(ErrorCode::kBackend,
              "malformed " + std::string(provider) + " response: " + std::string(what));
}

}  // namespace

PerspectiveToxicity::PerspectiveToxicity(HttpProviderOptions options)
    : options_(std::move(options)), client_(options_.url, options_.timeout, options_.retry) {}

Json PerspectiveToxicity::BuildRequest(std::string_view text) {
  return {{"comment", {{"text", text}}},
          {"requestedAttributes", {{"TOXICITY", Json::object()}}},
          {"doNotStore", true}};
}

double PerspectiveToxicity::ParseResponse(const Json& body) {
  try {
    const double v =
        body.at("attributeScores").at("TOXICITY").at("summaryScore").at("value").get<double>();
    if (!(v >= 0.0 && v <= 1.0)) Malformed("toxicity", "score outside [0, 1]");
    return v;
  } catch (const Json::exception&) {
    Malformed("toxicity", "missing attributeScores.TOXICITY.summaryScore.value");
  }
}

double PerspectiveToxicity::DoScore(std::string_view text) {
  const std::string query = options_.api_key.empty() ? "" : "?key=" + options_.api_key;
  return ParseResponse(client_.PostJson(query, BuildRequest(text)).body);
}

HttpEmbedding::HttpEmbedding(HttpProviderOptions options)
    : options_(std::move(options)), client_(options_.url, options_.timeout, options_.retry) {}

std::string HttpEmbedding::identity() const {
  return "http-embedding:" + options_.model + "@" + options_.url;
}

std::vector<double> HttpEmbedding::DoEmbed(std::string_view text) {
  const Json req = {{"model", options_.model}, {"input", text}};
  const auto body = client_.PostJson("", req, BearerHeaders(options_.api_key)).body;
  try {
    return body.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const Json::exception&) {
    Malformed("embedding", "missing data[0].embedding");
  }
}

HttpLogProb::HttpLogProb(HttpProviderOptions options)
    : options_(std::move(options)), client_(options_.url, options_.timeout, options_.retry) {}

std::string HttpLogProb::identity() const {
  return "http-logprob:" + options_.model + "@" + options_.url;
}

std::vector<double> HttpLogProb::DoTokenLogProbs(std::string_view text) {
  const Json req = {{"model", options_.model}, {"prompt", text}, {"max_tokens", 0},
                    {"echo", true},            {"logprobs", 0},  {"temperature", 0}};
  const auto body = client_.PostJson("", req, BearerHeaders(options_.api_key)).body;
  std::vector<double> out;
  try {
    for (const auto& lp : body.at("choices").at(0).at("logprobs").at("token_logprobs")) {
      if (!lp.is_null()) out.push_back(lp.get<double>());
    }
  } catch (const Json::exception&) {
    Malformed("logprob", "missing choices[0].logprobs.token_logprobs");
  }
  return out;
}

HttpClassifier::HttpClassifier(HttpProviderOptions options, std::string positive_label)
    : options_(std::move(options)),
      positive_label_(std::move(positive_label)),
      client_(options_.url, options_.timeout, options_.retry) {}

std::string HttpClassifier::identity() const {
  return "http-classifier:" + options_.url + "#" + positive_label_;
}

std::string HttpClassifier::TopLabel(const Json& body) {
  const Json* list = &body;
  if (list->is_array() && !list->empty() && (*list)[0].is_array()) list = &(*list)[0];
  if (!list->is_array() || list->empty()) Malformed("classifier", "expected a list of labels");
  std::string best;
  double best_score = -1.0;
  for (const auto& item : *list) {
    if (!item.is_object() || !item.contains("label") || !item.contains("score")) {
      Malformed("classifier", "label entries need label and score");
    }
    const double s = item["score"].get<double>();
    if (s > best_score) {
      best_score = s;
      best = item["label"].get<std::string>();
    }
  }
  return best;
}

bool HttpClassifier::DoClassify(std::string_view text) {
  const Json req = {{"inputs", text}};
  return TopLabel(client_.PostJson("", req, BearerHeaders(options_.api_key)).body) ==
         positive_label_;
}

}  // namespace rephrase
