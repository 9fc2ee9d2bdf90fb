#include "vpc/service.hpp"

#include "vpc/rulebase.hpp"
#include "vpc/syntax.hpp"

#include <cstdio>

namespace vpc {

using nlohmann::json;

std::vector<DerivOption> Session::options(const Registry& reg, const MachineParams& params) const {
    return generate_options(focused(), reg, params);
}

void Session::checkpoint() {
    history_.emplace_back(root_, path_);
    updated_ = std::chrono::system_clock::now();
}

const DerivLine& Session::apply(const Registry& reg, std::size_t number, const std::string& hash,
                                const MachineParams& params) {
    auto opts = options(reg, params);
    if (number == 0 || number > opts.size())
        throw ServiceError(422, "no_such_option",
                           "option " + std::to_string(number) + " does not exist (" + std::to_string(opts.size()) +
                               " available)");
    const DerivOption& o = opts[number - 1];
    if (!hash.empty() && o.hash() != hash)
        throw ServiceError(409, "stale_option", "option " + std::to_string(number) + " no longer has hash " + hash);
    checkpoint();
    apply_option(focused_mut(), o, params);
    return focused().lines.back();
}

const DerivLine& Session::apply_hash(const Registry& reg, const std::string& hash, const MachineParams& params) {
    auto opts = options(reg, params);
    for (std::size_t i = 0; i < opts.size(); ++i)
        if (opts[i].hash() == hash) return apply(reg, i + 1, hash, params);
    throw ServiceError(409, "stale_option", "no current option has hash " + hash);
}

void Session::split(std::size_t label, const MachineParams& params) {
    Derivation copy = focused();
    try {
        vpc::split(copy, label, params);
    } catch (const EngineError& e) {
        throw ServiceError(422, "split_rejected", e.what());
    }
    checkpoint();
    focused_mut() = std::move(copy);
}

ContractResult Session::contract(const MachineParams& params) {
    std::vector<std::size_t> target = path_;
    if (!focused().has_split()) {
        if (target.empty()) throw ServiceError(422, "no_split", "no active split");
        target.pop_back();
    }
    Derivation copy = vpc::focus(root_, target);
    ContractResult r;
    try {
        r = vpc::contract(copy, params);
    } catch (const EngineError& e) {
        throw ServiceError(422, "contract_rejected", e.what());
    } catch (const ValidityError& e) {
        throw ServiceError(422, "contract_rejected", e.what());
    }
    checkpoint();
    vpc::focus(root_, target) = std::move(copy);
    path_ = std::move(target);
    return r;
}

void Session::focus(std::vector<std::size_t> path) {
    try {
        (void)vpc::focus(root_, path);
    } catch (const EngineError& e) {
        throw ServiceError(422, "bad_focus", e.what());
    }
    path_ = std::move(path);
    updated_ = std::chrono::system_clock::now();
}

Extraction Session::extract(Registry& reg, const std::string& id, EntryKind kind, const MachineParams& params) {
    Extraction x;
    try {
        x = extract_theorem(root_, id, kind, reg, {}, params);
    } catch (const EngineError& e) {
        throw ServiceError(422, "extract_rejected", e.what());
    }
    std::visit(
        [&](auto& entry) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(entry)>, SchemaEntry>) entry.proof = "session:" + id_;
        },
        x.entry);
    try {
        reg.add(x.entry, params);
    } catch (const RegistryError& e) {
        throw ServiceError(422, "registry_rejected", e.what());
    }
    checkpoint();
    root_.status = DerivStatus::Extracted;
    path_.clear();
    return x;
}

void Session::undo() {
    if (history_.empty()) throw ServiceError(422, "nothing_to_undo", "nothing to undo");
    root_ = std::move(history_.back().first);
    path_ = std::move(history_.back().second);
    history_.pop_back();
    updated_ = std::chrono::system_clock::now();
}

Service::Service(Registry reg, std::string registry_path, MachineParams params)
    : reg_(std::move(reg)), registry_path_(std::move(registry_path)), params_(params) {}

std::shared_ptr<Session> Service::create(const Program& premises) {
    Derivation d;
    try {
        d = new_derivation(premises, params_);
    } catch (const ValidityError& e) {
        throw ServiceError(422, "invalid_premises", e.what());
    }
    std::lock_guard lock(sessions_mutex_);
    char buf[24];
    std::snprintf(buf, sizeof buf, "s%06zu", ++counter_);
    auto s = std::make_shared<Session>(buf, std::move(d));
    sessions_.emplace(s->id(), s);
    return s;
}

std::shared_ptr<Session> Service::get(const std::string& id) const {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session " + id);
    return it->second;
}

void Service::persist() {
    if (registry_path_.empty()) return;
    std::shared_lock lock(reg_mutex_);
    save_registry(reg_, registry_path_);
}

std::optional<OracleReport> oracle_entry(const Entry& e, Domain domain, const MachineParams& params) {
    auto integer_level = [](const Program& p) {
        for (const auto& s : p.stmts)
            if (level_of(s) != Level::Integer) return false;
        return true;
    };
    if (const auto* c = std::get_if<CpeEntry>(&e)) {
        if (!integer_level(c->premise) || !integer_level(c->conclusion)) return std::nullopt;
        return cpe_oracle(c->premise, c->conclusion, domain, params);
    }
    if (const auto* f = std::get_if<FalseEntry>(&e)) {
        if (!integer_level(f->program)) return std::nullopt;
        return cpe_oracle(f->program, {}, domain, params);
    }
    return std::nullopt;
}

bool oracle_passes(const Entry& e, const OracleReport& r) {
    if (std::holds_alternative<FalseEntry>(e)) return r.premise_computable == 0;
    return r.sound();
}

json to_json(const ConnectionList& c) { return json{{"entry", c.entry}, {"labels", c.labels}, {"text", render_connection(c)}}; }

json to_json(const Derivation& d) {
    json lines = json::array();
    for (const auto& l : d.lines) {
        json conns = json::array();
        for (const auto& c : l.connections) conns.push_back(to_json(c));
        lines.push_back(json{{"label", l.label},
                             {"statement", l.statement ? json(render_statement(*l.statement)) : json(nullptr)},
                             {"text", l.statement ? render_statement(*l.statement) : std::string("False")},
                             {"connections", conns},
                             {"splitMark", l.split_mark},
                             {"premise", l.label <= d.base_count},
                             {"rendered", render_proof_line(l.label, l.statement, l.split_mark, l.connections)}});
    }
    json out{{"status", to_string(d.status)}, {"premiseCount", d.base_count}, {"lines", lines}};
    if (d.has_split()) {
        json branches = json::array();
        for (const auto& b : d.branches) branches.push_back(to_json(b));
        out["split"] = json{{"label", d.split_label}, {"branches", branches}};
    } else {
        out["split"] = nullptr;
    }
    return out;
}

json to_json(const Session& s) {
    auto stamp = [](auto tp) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(tp.time_since_epoch()).count();
    };
    json out = to_json(s.root());
    out["id"] = s.id();
    out["focus"] = s.focus_path();
    out["undoDepth"] = s.undo_depth();
    out["created"] = stamp(s.created());
    out["updated"] = stamp(s.updated());
    return out;
}

json to_json(const std::vector<DerivOption>& options) {
    json out = json::array();
    for (std::size_t i = 0; i < options.size(); ++i) {
        const auto& o = options[i];
        const char* kind = o.kind == OptionKind::Cpe ? "cpe" : o.kind == OptionKind::Falsity ? "falsity" : "schema";
        json conclusion = json::array();
        for (const auto& c : o.conclusion) conclusion.push_back(render_statement(c));
        out.push_back(json{{"number", i + 1},
                           {"kind", kind},
                           {"text", o.text()},
                           {"conclusion", conclusion},
                           {"connection", to_json(o.connection)},
                           {"hash", o.hash()}});
    }
    return out;
}

json to_json(const Entry& e) {
    json out{{"id", entry_id(e)}, {"deps", entry_deps(e)}};
    if (const auto* c = std::get_if<CpeEntry>(&e)) {
        out["kind"] = to_string(c->kind);
        out["premise"] = render_program(c->premise);
        out["conclusion"] = render_program(c->conclusion);
        out["imported"] = c->imported;
        out["proof"] = c->proof ? json(*c->proof) : json(nullptr);
        out["text"] = render_header_body(header_for(e));
    } else if (const auto* f = std::get_if<FalseEntry>(&e)) {
        out["kind"] = "false";
        out["falseKind"] = to_string(f->kind);
        out["program"] = render_program(f->program);
        out["imported"] = f->imported;
        out["proof"] = f->proof ? json(*f->proof) : json(nullptr);
        out["text"] = render_header_body(header_for(e));
    } else {
        const auto& s = std::get<SchemaEntry>(e);
        out["kind"] = "schema";
        out["rule"] = to_string(s.rule);
        out["level"] = to_string(s.level);
    }
    return out;
}

json to_json(const ExecOutcome& o) {
    json outputs = json::object();
    for (const auto& [k, v] : o.outputs) {
        if (v.is_int())
            outputs[k] = v.as_int();
        else
            outputs[k] = render_program(v.as_program());
    }
    json out{{"outcome", to_string(o.kind)}, {"outputs", outputs}};
    if (!o.ok()) {
        out["at"] = o.at;
        out["detail"] = o.detail;
    }
    return out;
}

ProofScript script_from_json(const json& derivation, const ProofHeader& header) {
    ProofScript s;
    s.header = header;
    for (const auto& l : derivation.at("lines")) {
        ProofLine pl;
        pl.label = l.at("label").get<std::size_t>();
        if (!l.at("statement").is_null()) pl.statement = parse_statement(l.at("statement").get<std::string>());
        pl.split_mark = l.at("splitMark").get<bool>();
        for (const auto& c : l.at("connections"))
            pl.connections.push_back(ConnectionList{c.at("entry").get<std::string>(), c.at("labels").get<std::vector<std::size_t>>()});
        s.lines.push_back(std::move(pl));
    }
    return s;
}

ProofHeader header_for(const Entry& e) {
    ProofHeader h;
    h.id = entry_id(e);
    if (const auto* c = std::get_if<CpeEntry>(&e)) {
        h.kind = c->kind == EntryKind::Lemma ? ProofKind::Lemma : ProofKind::Theorem;
        h.premise = c->premise;
        h.conclusion = c->conclusion;
    } else if (const auto* f = std::get_if<FalseEntry>(&e)) {
        h.kind = f->kind == EntryKind::Lemma ? ProofKind::Lemma : ProofKind::Theorem;
        h.falsity = true;
        h.premise = f->program;
    }
    return h;
}

}  // namespace vpc
