#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>

#include <httplib.h>

#include "cubes/session.hpp"

namespace cubes {

/// Splits "host:port"; a bare port means 127.0.0.1.
inline std::optional<std::pair<std::string, int>> parse_listen_addr(std::string_view addr) {
    auto colon = addr.rfind(':');
    std::string host = colon == std::string_view::npos ? "127.0.0.1" : std::string(addr.substr(0, colon));
    std::string_view port_text = colon == std::string_view::npos ? addr : addr.substr(colon + 1);
    if (host.empty() || port_text.empty()) return std::nullopt;
    int port = 0;
    for (char c : port_text) {
        if (c < '0' || c > '9') return std::nullopt;
        port = port * 10 + (c - '0');
        if (port > 65535) return std::nullopt;
    }
    return std::pair{host, port};
}

inline std::string bearer_token(const httplib::Request& req) {
    auto h = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    if (h.rfind(prefix, 0) != 0) return {};
    return h.substr(prefix.size());
}

/// Wires the session service onto an httplib server. The service must outlive the server.
inline void install_routes(httplib::Server& server, SessionService& service,
                           std::function<void(const std::string&)> log = {}) {
    SessionService* svc = &service;
    const std::string origin = service.config().cors_origin;

    auto send = [](httplib::Response& res, const ServiceResponse& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    auto parse_body = [](const httplib::Request& req, wire::json& out) {
        if (req.body.empty()) {
            out = wire::json::object();
            return true;
        }
        out = wire::json::parse(req.body, nullptr, false);
        return !out.is_discarded();
    };
    auto bad_json = [](httplib::Response& res) {
        res.status = 400;
        res.set_content(R"({"error":{"kind":"InvalidRequest","message":"body is not valid JSON"}})",
                        "application/json");
    };

    server.set_payload_max_length(1 << 20);
    server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Allow-Headers", "Content-Type, Authorization");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    });
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    if (log) {
        server.set_logger([log](const httplib::Request& req, const httplib::Response& res) {
            log(req.method + " " + req.path + " " + std::to_string(res.status));
        });
    }

    server.Post("/sessions", [svc, send, parse_body, bad_json](const httplib::Request& req, httplib::Response& res) {
        wire::json body;
        if (!parse_body(req, body)) return bad_json(res);
        send(res, svc->create_session(body));
    });
    server.Post("/sessions/import", [svc, send, parse_body, bad_json](const httplib::Request& req,
                                                                    httplib::Response& res) {
        wire::json body;
        if (!parse_body(req, body)) return bad_json(res);
        send(res, svc->import_session(body));
    });
    server.Get(R"(/sessions/([0-9a-f]+))", [svc, send](const httplib::Request& req, httplib::Response& res) {
        send(res, svc->get_session(req.matches[1]));
    });
    server.Get(R"(/sessions/([0-9a-f]+)/export)", [svc, send](const httplib::Request& req, httplib::Response& res) {
        send(res, svc->export_session(req.matches[1]));
    });
    server.Post(R"(/sessions/([0-9a-f]+)/execute)", [svc, send, parse_body, bad_json](const httplib::Request& req,
                                                                                    httplib::Response& res) {
        wire::json body;
        if (!parse_body(req, body)) return bad_json(res);
        send(res, svc->execute(req.matches[1], body));
    });
    server.Post(R"(/sessions/([0-9a-f]+)/grade)", [svc, send, parse_body, bad_json](const httplib::Request& req,
                                                                                  httplib::Response& res) {
        wire::json body;
        if (!parse_body(req, body)) return bad_json(res);
        send(res, svc->grade_submission(req.matches[1], body));
    });
    server.Get("/exercises", [svc, send](const httplib::Request& req, httplib::Response& res) {
        bool instructor = req.get_param_value("instructor") == "true";
        send(res, svc->list_exercises(instructor, bearer_token(req)));
    });
    server.Get("/fixtures", [svc, send](const httplib::Request&, httplib::Response& res) {
        send(res, svc->list_fixtures());
    });
}

}  // namespace cubes
