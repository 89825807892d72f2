#pragma once

#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

namespace httplib {
class Server;
}

namespace quanttm {

struct ServiceConfig {
  std::string project_path;
  std::string ui_origin;  // only this origin gets CORS headers; empty = none
};

// JSON API over one project file. The file is re-read per request; writes
// are serialized and replace the file atomically.
class ProjectService {
 public:
  explicit ProjectService(ServiceConfig config);

  void install(httplib::Server& server);

  const ServiceConfig& config() const noexcept { return config_; }

 private:
  ServiceConfig config_;
  std::mutex write_mutex_;
};

struct ApiError {
  int status = 400;
  std::string code;
  std::string message;
  std::string path;

  nlohmann::json to_json() const;
};

// Blocks serving on host:port. Returns false if binding fails.
bool serve(const ServiceConfig& config, const std::string& host, int port);

}  // namespace quanttm
