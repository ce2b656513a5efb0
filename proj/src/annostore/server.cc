// Copyright 2026 The Glor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "glor/annostore/server.h"

#include <filesystem>
#include <stdexcept>

#include "glor/core/errors.h"
#include "httplib.h"

namespace glor::annostore {
namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

constexpr const char* kFallbackPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>glor annotation service</title></head>
<body>
<h1>glor annotation service</h1>
<p>No UI bundle is mounted. Start the server with <code>--static DIR</code> to serve one.</p>
<ul>
<li>GET /api/next?annotator=ID</li>
<li>POST /api/submit {"annotator", "key", "choice"}</li>
<li>POST /api/skip {"annotator", "key"}</li>
<li>POST /api/register {"annotator", "role"}</li>
<li>GET /api/progress?annotator=ID</li>
<li>GET /api/export?role=R&amp;mode=M</li>
</ul>
</body></html>
)";

void Reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void Fail(httplib::Response& res, int status, const std::string& message) {
  Reply(res, status, Json{{"error", message}});
}

// Maps library exceptions to HTTP statuses.
template <typename Fn>
void Guarded(httplib::Response& res, Fn fn) {
  try {
    fn();
  } catch (const NotFoundError& e) {
    Fail(res, 404, e.what());
  } catch (const ConflictError& e) {
    Fail(res, 409, e.what());
  } catch (const UsageError& e) {
    Fail(res, 400, e.what());
  } catch (const ValidationError& e) {
    Fail(res, 400, e.what());
  } catch (const std::exception& e) {
    Fail(res, 500, e.what());
  }
}

std::string RequireParam(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty()) {
    throw UsageError(std::string("missing query parameter '") + name + "'");
  }
  return req.get_param_value(name);
}

Json Body(const httplib::Request& req) {
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw UsageError("request body must be a json object");
  return j;
}

std::string BodyString(const Json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_string() || j[name].get<std::string>().empty()) {
    throw UsageError(std::string("missing string field '") + name + "'");
  }
  return j[name].get<std::string>();
}

}  // namespace

Server::Server(Store& store, ServerOptions options)
    : store_(store), options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
  Routes();
}

Server::~Server() { Stop(); }

void Server::Routes() {
  httplib::Server& s = *http_;

  s.Get("/api/next", [this](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] {
      const std::string annotator = RequireParam(req, "annotator");
      const auto next = store_.Next(annotator);
      Json body;
      body["done"] = !next.has_value();
      if (next) body["comparison"] = next->AnnotatorView();
      body["progress"] = store_.ProgressFor(annotator).ToJson();
      Reply(res, 200, body);
    });
  });

  s.Post("/api/submit", [this](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] {
      const Json j = Body(req);
      const std::string annotator = BodyString(j, "annotator");
      const auto result = store_.Submit(annotator, BodyString(j, "key"),
                                        stats::ParseChoice(BodyString(j, "choice")));
      Json body;
      body["ok"] = true;
      body["duplicate"] = result.duplicate;
      body["progress"] = store_.ProgressFor(annotator).ToJson();
      Reply(res, 200, body);
    });
  });

  s.Post("/api/skip", [this](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] {
      const Json j = Body(req);
      const std::string annotator = BodyString(j, "annotator");
      store_.Skip(annotator, BodyString(j, "key"));
      Reply(res, 200, Json{{"ok", true}, {"progress", store_.ProgressFor(annotator).ToJson()}});
    });
  });

  s.Post("/api/register", [this](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] {
      const Json j = Body(req);
      const std::string annotator = BodyString(j, "annotator");
      store_.Register(annotator, BodyString(j, "role"));
      Reply(res, 200, Json{{"ok", true}, {"progress", store_.ProgressFor(annotator).ToJson()}});
    });
  });

  s.Get("/api/progress", [this](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] {
      Reply(res, 200, store_.ProgressFor(RequireParam(req, "annotator")).ToJson());
    });
  });

  s.Get("/api/export", [this](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] {
      ExportFilter filter;
      if (req.has_param("role")) filter.role = req.get_param_value("role");
      if (req.has_param("mode") && !req.get_param_value("mode").empty()) {
        filter.mode = arena::ParseMode(req.get_param_value("mode"));
      }
      Reply(res, 200, store_.Export(filter).ToJson());
    });
  });

  const bool has_bundle =
      !options_.static_dir.empty() && std::filesystem::is_directory(options_.static_dir);
  if (has_bundle) {
    if (!s.set_mount_point("/", options_.static_dir)) {
      throw IoError("cannot mount " + options_.static_dir);
    }
  } else {
    s.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kFallbackPage, "text/html; charset=utf-8");
    });
  }
}

int Server::Bind() {
  if (port_ >= 0) return port_;
  if (options_.port == 0) {
    port_ = http_->bind_to_any_port(options_.host);
  } else {
    port_ = http_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0) {
    throw IoError("cannot bind " + options_.host + ":" + std::to_string(options_.port));
  }
  return port_;
}

void Server::Run() {
  Bind();
  if (!http_->listen_after_bind()) throw IoError("server stopped with an error");
}

void Server::Stop() {
  if (http_) http_->stop();
}

}  // namespace glor::annostore
