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

#include "annotation/server.hpp"

#include <httplib.h>

#include "common/error.hpp"

namespace rephrase {
namespace {

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kValidation:
    case ErrorCode::kParse:
      return 400;
    case ErrorCode::kState:
      return 409;
    default:
      return 500;
  }
}

void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  SendJson(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

// Runs a handler, translating exceptions into JSON error responses.
template <typename F>
httplib::Server::Handler Guard(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      SendError(res, HttpStatusFor(e.code()), ErrorCodeName(e.code()), e.what());
    } catch (const std::exception& e) {
      SendError(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

struct AnnotationServer::Impl {
  Study& study;
  httplib::Server server;
  std::string host;
  int port = -1;
  explicit Impl(Study& s) : study(s) {}
};

AnnotationServer::AnnotationServer(Study& study, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(study)) {
  auto& srv = impl_->server;
  Study* s = &study;

  srv.Get("/api/health", Guard([](const httplib::Request&, httplib::Response& res) {
            SendJson(res, 200, {{"status", "ok"}});
          }));

  srv.Get("/api/tasks/next", Guard([s](const httplib::Request& req, httplib::Response& res) {
            if (!req.has_param("annotator")) {
              throw Error(ErrorCode::kInvalidArgument, "missing query parameter 'annotator'");
            }
            const auto task = s->NextTask(req.get_param_value("annotator"));
            if (!task) {
              SendJson(res, 200, {{"done", true}, {"total", s->tasks().size()}});
              return;
            }
            SendJson(res, 200, {{"done", false}, {"task", ToJson(*task)}, {"total", s->tasks().size()}});
          }));

  srv.Post("/api/annotations", Guard([s](const httplib::Request& req, httplib::Response& res) {
             Json body;
             try {
               body = Json::parse(req.body);
             } catch (const Json::parse_error& e) {
               throw Error(ErrorCode::kParse, std::string("request body is not JSON: ") + e.what());
             }
             s->Submit(AnnotationRecordFromJson(body));
             SendJson(res, 200, {{"ok", true}});
           }));

  srv.Get("/api/progress", Guard([s](const httplib::Request&, httplib::Response& res) {
            SendJson(res, 200, ToJson(s->Progress()));
          }));

  srv.Get("/api/results", Guard([s](const httplib::Request& req, httplib::Response& res) {
            const bool partial = req.has_param("partial") && req.get_param_value("partial") != "0";
            SendJson(res, 200, ToJson(s->Results(partial)));
          }));

  if (static_dir) {
    if (!srv.set_mount_point("/", static_dir->string())) {
      throw Error(ErrorCode::kIo, "cannot serve static files from " + static_dir->string());
    }
  }
}

AnnotationServer::~AnnotationServer() { Stop(); }

int AnnotationServer::BindAnyPort(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
  impl_->host = host;
  impl_->port = port;
  return port;
}

void AnnotationServer::Bind(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->host = host;
  impl_->port = port;
}

void AnnotationServer::Listen() {
  if (impl_->port < 0) throw Error(ErrorCode::kState, "server is not bound");
  impl_->server.listen_after_bind();
}

void AnnotationServer::Stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool AnnotationServer::running() const { return impl_->server.is_running(); }

}  // namespace rephrase
