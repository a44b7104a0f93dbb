#include "textable/http_server.hpp"

#include <httplib.h>

#include "textable/error.hpp"

namespace textable {

using nlohmann::json;

namespace {

int status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return 400;
    case ErrorKind::not_found: return 404;
    case ErrorKind::conflict: return 409;
    case ErrorKind::precondition: return 409;
  }
  return 500;
}

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_request";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::precondition: return "precondition_failed";
  }
  return "internal";
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view error, const std::string& detail) {
  send_json(res, status, {{"error", error}, {"detail", detail}});
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, status_of(e.kind()), error_name(e.kind()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "invalid_request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON body: ") + e.what());
  }
}

}  // namespace

HttpServer::HttpServer(SessionService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 201, service_.open_session(parse_body(req)));
         }));
  s.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, service_.handle(req.matches[1]));
        }));
  s.Get(R"(/sessions/([^/]+)/attributes/([^/]+)/candidate)",
        guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, service_.next_candidate(req.matches[1], req.matches[2]));
        }));
  s.Post(R"(/sessions/([^/]+)/attributes/([^/]+)/feedback)",
         guarded([this](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 200, service_.submit_feedback(req.matches[1], req.matches[2], parse_body(req)));
         }));
  s.Get(R"(/sessions/([^/]+)/table)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto format = req.has_param("format") ? req.get_param_value("format") : std::string("json");
          if (format != "csv" && format != "json") invalid("format must be csv or json");
          const auto table = service_.get_table(req.matches[1]);
          res.status = 200;
          if (format == "csv") {
            res.set_content(table_to_csv(table), "text/csv");
          } else {
            res.set_content(table_to_json(table).dump(), "application/json");
          }
        }));
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, res.status == 404 ? "not_found" : "error", "no such route");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) fail(ErrorKind::invalid_input, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

bool HttpServer::running() const { return server_->is_running(); }

}  // namespace textable
