#include "vpc/http.hpp"

#include "vpc/exec.hpp"
#include "vpc/syntax.hpp"

#include <httplib.h>

namespace vpc {

using nlohmann::json;

namespace {

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message,
                const std::optional<SourceSpan>& span = std::nullopt) {
    json body{{"code", code}, {"message", message}};
    if (span) body["span"] = json{{"line", span->line}, {"column", span->column}, {"length", span->length}};
    send(res, status, body);
}

json body_of(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    return json::parse(req.body);
}

Program premises_of(const json& body) {
    if (!body.contains("premises")) return {};
    const json& p = body.at("premises");
    if (p.is_string()) return parse_program(p.get<std::string>());
    Program out;
    for (const auto& s : p) out.stmts.push_back(parse_statement(s.get<std::string>()));
    return out;
}

template <class F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const ServiceError& e) {
            send_error(res, e.status(), e.code(), e.what());
        } catch (const ParseError& e) {
            send_error(res, 422, "parse_error", e.message(), e.span());
        } catch (const ValidityError& e) {
            send_error(res, 422, "invalid_program", e.what());
        } catch (const StaleOption& e) {
            send_error(res, 409, "stale_option", e.what());
        } catch (const EngineError& e) {
            send_error(res, 422, "rejected", e.what());
        } catch (const RegistryError& e) {
            send_error(res, 422, "registry_rejected", e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, "bad_request", e.what());
        } catch (const std::invalid_argument& e) {
            send_error(res, 422, "invalid_argument", e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "internal", e.what());
        }
    };
}

}  // namespace

void install_routes(httplib::Server& server, Service& svc) {
    auto session_of = [&svc](const httplib::Request& req) { return svc.get(req.matches[1]); };

    server.Get("/health", guarded([](const httplib::Request&, httplib::Response& res) { send(res, 200, {{"ok", true}}); }));

    server.Post("/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        auto s = svc.create(premises_of(body_of(req)));
        std::lock_guard lock(s->mutex());
        send(res, 201, to_json(*s));
    }));

    server.Get(R"(/sessions/([^/]+))", guarded([session_of](const httplib::Request& req, httplib::Response& res) {
        auto s = session_of(req);
        std::lock_guard lock(s->mutex());
        send(res, 200, to_json(*s));
    }));

    server.Get(R"(/sessions/([^/]+)/options)", guarded([&svc, session_of](const httplib::Request& req, httplib::Response& res) {
        auto s = session_of(req);
        std::lock_guard lock(s->mutex());
        auto opts = svc.read_registry([&](const Registry& r) { return s->options(r, svc.params()); });
        send(res, 200, {{"focus", s->focus_path()}, {"state", fingerprint(s->focused())}, {"options", to_json(opts)}});
    }));

    server.Post(R"(/sessions/([^/]+)/apply)", guarded([&svc, session_of](const httplib::Request& req, httplib::Response& res) {
        auto s = session_of(req);
        json body = body_of(req);
        std::lock_guard lock(s->mutex());
        std::string hash = body.value("hash", std::string());
        svc.read_registry([&](const Registry& r) {
            if (body.contains("option"))
                s->apply(r, body.at("option").get<std::size_t>(), hash, svc.params());
            else if (!hash.empty())
                s->apply_hash(r, hash, svc.params());
            else
                throw ServiceError(422, "missing_option", "give 'option' (number) and/or 'hash'");
            return 0;
        });
        send(res, 200, to_json(*s));
    }));

    server.Post(R"(/sessions/([^/]+)/split)", guarded([&svc, session_of](const httplib::Request& req, httplib::Response& res) {
        auto s = session_of(req);
        json body = body_of(req);
        std::lock_guard lock(s->mutex());
        s->split(body.at("label").get<std::size_t>(), svc.params());
        send(res, 200, to_json(*s));
    }));

    server.Post(R"(/sessions/([^/]+)/focus)", guarded([session_of](const httplib::Request& req, httplib::Response& res) {
        auto s = session_of(req);
        json body = body_of(req);
        std::lock_guard lock(s->mutex());
        s->focus(body.value("path", std::vector<std::size_t>{}));
        send(res, 200, to_json(*s));
    }));

    server.Post(R"(/sessions/([^/]+)/contract)", guarded([&svc, session_of](const httplib::Request& req, httplib::Response& res) {
        auto s = session_of(req);
        std::lock_guard lock(s->mutex());
        s->contract(svc.params());
        send(res, 200, to_json(*s));
    }));

    server.Post(R"(/sessions/([^/]+)/undo)", guarded([session_of](const httplib::Request& req, httplib::Response& res) {
        auto s = session_of(req);
        std::lock_guard lock(s->mutex());
        s->undo();
        send(res, 200, to_json(*s));
    }));

    server.Post(R"(/sessions/([^/]+)/extract)", guarded([&svc, session_of](const httplib::Request& req, httplib::Response& res) {
        auto s = session_of(req);
        json body = body_of(req);
        std::lock_guard lock(s->mutex());
        std::string id = body.at("id").get<std::string>();
        std::string kind = body.value("kind", std::string("theorem"));
        if (kind != "theorem" && kind != "lemma") throw ServiceError(422, "bad_kind", "kind must be theorem or lemma");
        Extraction x = svc.write_registry([&](Registry& r) {
            return s->extract(r, id, kind == "lemma" ? EntryKind::Lemma : EntryKind::Theorem, svc.params());
        });
        svc.persist();
        ProofScript script = to_script(s->root(), header_for(x.entry));
        send(res, 200,
             {{"entry", to_json(x.entry)},
              {"usedPremises", x.used_premises},
              {"warnings", x.warnings},
              {"listing", render_proof(script)},
              {"session", to_json(*s)}});
    }));

    server.Get("/axioms", guarded([&svc](const httplib::Request&, httplib::Response& res) {
        json out = svc.read_registry([](const Registry& r) {
            json list = json::array();
            for (const auto& e : r.entries()) list.push_back(to_json(e));
            return list;
        });
        send(res, 200, out);
    }));

    server.Get(R"(/axioms/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        std::string id = req.matches[1];
        json out = svc.read_registry([&](const Registry& r) {
            const Entry* e = r.find(id);
            if (!e) throw ServiceError(404, "unknown_entry", "no entry " + id);
            json j = to_json(*e);
            j["dependents"] = r.dependents(id);
            return j;
        });
        send(res, 200, out);
    }));

    server.Post("/exec", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        json body = body_of(req);
        Program p = validate_program(parse_program(body.at("program").get<std::string>()), svc.params());
        Env env;
        if (body.contains("bindings"))
            for (const auto& [k, v] : body.at("bindings").items()) {
                if (v.is_number_integer())
                    env.emplace(k, Value::integer(v.get<std::int64_t>(), svc.params()));
                else
                    env.emplace(k, Value::program(parse_program(v.get<std::string>())));
            }
        send(res, 200, to_json(exec_program(p, env, svc.params())));
    }));
}

void serve(Service& service, const std::string& host, int port) {
    httplib::Server server;
    install_routes(server, service);
    if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace vpc
