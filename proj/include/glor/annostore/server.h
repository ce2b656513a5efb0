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
#ifndef GLOR_ANNOSTORE_SERVER_H_
#define GLOR_ANNOSTORE_SERVER_H_

#include <memory>
#include <string>

#include "glor/annostore/store.h"

namespace httplib {
class Server;
}

namespace glor::annostore {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Directory served at /. When empty or missing, / serves a minimal page.
  std::string static_dir;
};

// HTTP front end:
//   GET  /api/next?annotator=ID       -> {done, comparison?, progress}
//   POST /api/submit {annotator, key, choice}
//   POST /api/skip {annotator, key}
//   POST /api/register {annotator, role}
//   GET  /api/progress?annotator=ID   -> {answered, skipped, total}
//   GET  /api/export?role=R&mode=M    -> {annotations, win_matrix, total}
// Errors are {"error": message} with 400, 404 or 409.
class Server {
 public:
  Server(Store& store, ServerOptions options);
  ~Server();

  // Binds; returns the bound port.
  int Bind();
  // Blocks until Stop(). Binds first if needed.
  void Run();
  void Stop();

 private:
  void Routes();

  Store& store_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
  int port_ = -1;
};

}  // namespace glor::annostore

#endif  // GLOR_ANNOSTORE_SERVER_H_
