#pragma once

#include <memory>
#include <string>

#include "textable/service.hpp"

namespace httplib {
class Server;
}

namespace textable {

/// JSON-over-HTTP front end for SessionService.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void listen();
  void stop();
  bool running() const;

 private:
  SessionService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace textable
