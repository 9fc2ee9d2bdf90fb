#include "vpc/registry.hpp"

#include "vpc/equivalence.hpp"
#include "vpc/syntax.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace vpc {

const char* to_string(EntryKind kind) {
    switch (kind) {
    case EntryKind::Axiom: return "axiom";
    case EntryKind::Theorem: return "theorem";
    case EntryKind::Lemma: return "lemma";
    case EntryKind::ConstructionRule: return "crule";
    }
    return "?";
}

const char* to_string(SchemaRule rule) {
    switch (rule) {
    case SchemaRule::IoInput: return "io-input";
    case SchemaRule::IoOutput: return "io-output";
    case SchemaRule::Substitution: return "substitution";
    case SchemaRule::SubstitutionOutput: return "substitution-output";
    }
    return "?";
}

const char* to_string(Level level) { return level == Level::Integer ? "int" : "prog"; }

const std::string& entry_id(const Entry& e) {
    return std::visit([](const auto& x) -> const std::string& { return x.id; }, e);
}

const std::vector<std::string>& entry_deps(const Entry& e) {
    static const std::vector<std::string> none;
    if (auto* c = std::get_if<CpeEntry>(&e)) return c->deps;
    if (auto* f = std::get_if<FalseEntry>(&e)) return f->deps;
    return none;
}

const Entry* Registry::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

const Entry& Registry::at(const std::string& id) const {
    const Entry* e = find(id);
    if (!e) throw RegistryError("unknown entry '" + id + "'");
    return *e;
}

void Registry::reindex() {
    index_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) index_[entry_id(entries_[i])] = i;
}

void Registry::add(Entry e, const MachineParams& params) {
    const std::string id = entry_id(e);
    if (!is_var_name(id)) throw RegistryError("invalid entry id '" + id + "'");
    if (contains(id)) throw RegistryError("duplicate entry id '" + id + "'");
    for (const auto& d : entry_deps(e)) {
        if (d == id) throw RegistryError("entry '" + id + "' depends on itself");
        if (!contains(d)) throw RegistryError("entry '" + id + "' depends on unknown entry '" + d + "'");
    }
    try {
        if (auto* c = std::get_if<CpeEntry>(&e)) {
            concat(c->premise, c->conclusion, params);
            if (c->conclusion.empty()) throw RegistryError("entry '" + id + "' has an empty conclusion");
            bool derived = c->kind == EntryKind::Theorem || c->kind == EntryKind::Lemma;
            if (derived && !c->imported && !c->proof)
                throw RegistryError("theorem '" + id + "' carries no proof reference");
            if (c->kind == EntryKind::Axiom && c->proof)
                throw RegistryError("axiom '" + id + "' cannot carry a proof reference");
        } else if (auto* f = std::get_if<FalseEntry>(&e)) {
            validate_program(f->program, params);
            if (f->program.empty()) throw RegistryError("falsity entry '" + id + "' has an empty program");
        }
    } catch (const ValidityError& err) {
        throw RegistryError("entry '" + id + "' is not a valid program: " + err.what());
    }
    entries_.push_back(std::move(e));
    index_[id] = entries_.size() - 1;
}

std::vector<std::string> Registry::dependents(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& e : entries_) {
        const auto& deps = entry_deps(e);
        if (std::find(deps.begin(), deps.end(), id) != deps.end()) out.push_back(entry_id(e));
    }
    return out;
}

std::vector<std::string> Registry::retract(const std::string& id) {
    if (!contains(id)) throw RegistryError("unknown entry '" + id + "'");
    std::set<std::string> doomed{id};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& e : entries_) {
            if (doomed.count(entry_id(e))) continue;
            for (const auto& d : entry_deps(e))
                if (doomed.count(d)) {
                    doomed.insert(entry_id(e));
                    grew = true;
                    break;
                }
        }
    }
    // Entries are only ever added after their dependencies, so storage order
    // is a topological order.
    std::vector<std::string> removed;
    std::vector<Entry> kept;
    for (auto& e : entries_) {
        if (doomed.count(entry_id(e)))
            removed.push_back(entry_id(e));
        else
            kept.push_back(std::move(e));
    }
    entries_ = std::move(kept);
    reindex();
    return removed;
}

namespace {

bool instance_search(const Program& program, const Program& tmpl, std::size_t k, const Substitution& s) {
    if (k == tmpl.size()) return true;
    for (std::size_t i = 0; i < program.size(); ++i) {
        bool found = false;
        match_statement(program.stmts[i], tmpl.stmts[k], s, [&](const Substitution& next) {
            if (!found) found = instance_search(program, tmpl, k + 1, next);
        });
        if (found) return true;
    }
    return false;
}

}  // namespace

bool contains_instance(const Program& program, const Program& tmpl) {
    return instance_search(program, tmpl, 0, {});
}

std::vector<std::string> Registry::purge_by_falsity(const std::string& false_id) {
    const auto* f = std::get_if<FalseEntry>(&at(false_id));
    if (!f) throw RegistryError("'" + false_id + "' is not a falsity entry");
    Program tmpl = f->program;
    std::vector<std::string> targets;
    for (const auto& e : entries_) {
        const auto* c = std::get_if<CpeEntry>(&e);
        if (!c || c->premise.empty()) continue;
        if (contains_instance(c->premise, tmpl)) targets.push_back(c->id);
    }
    std::vector<std::string> removed;
    for (const auto& id : targets) {
        if (!contains(id)) continue;
        auto r = retract(id);
        removed.insert(removed.end(), r.begin(), r.end());
    }
    return removed;
}

void Registry::promote(const std::string& id, const std::string& proof_ref, std::vector<std::string> deps) {
    auto it = index_.find(id);
    if (it == index_.end()) throw RegistryError("unknown entry '" + id + "'");
    Entry& e = entries_[it->second];
    auto* c = std::get_if<CpeEntry>(&e);
    auto* f = std::get_if<FalseEntry>(&e);
    EntryKind kind = c ? c->kind : f ? f->kind : EntryKind::ConstructionRule;
    if ((!c && !f) || kind != EntryKind::Axiom) throw RegistryError("'" + id + "' is not an axiom");
    std::set<std::string> seen;
    std::vector<std::string> clean;
    for (auto& d : deps) {
        if (d == id) throw RegistryError("proof of '" + id + "' cites the entry itself");
        if (!contains(d)) throw RegistryError("proof of '" + id + "' cites unknown entry '" + d + "'");
        if (seen.insert(d).second) clean.push_back(d);
    }
    // The new edges must not make the entry depend on one of its dependents.
    std::set<std::string> below;
    std::vector<std::string> stack{id};
    while (!stack.empty()) {
        auto cur = stack.back();
        stack.pop_back();
        for (const auto& dep : dependents(cur))
            if (below.insert(dep).second) stack.push_back(dep);
    }
    for (const auto& d : clean)
        if (below.count(d)) throw RegistryError("promoting '" + id + "' would create a dependency cycle via '" + d + "'");
    if (c) {
        c->kind = EntryKind::Theorem;
        c->proof = proof_ref;
        c->deps = std::move(clean);
    } else {
        f->kind = EntryKind::Theorem;
        f->proof = proof_ref;
        f->deps = std::move(clean);
    }
    // Dependencies may now sit later in storage; restore a topological order.
    std::vector<Entry> ordered;
    std::set<std::string> placed;
    std::vector<bool> done(entries_.size(), false);
    while (ordered.size() < entries_.size()) {
        bool progress = false;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (done[i]) continue;
            const auto& ds = entry_deps(entries_[i]);
            if (std::all_of(ds.begin(), ds.end(), [&](const std::string& d) { return placed.count(d) != 0; })) {
                placed.insert(entry_id(entries_[i]));
                ordered.push_back(entries_[i]);
                done[i] = progress = true;
            }
        }
        if (!progress) throw std::logic_error("dependency cycle in registry");
    }
    entries_ = std::move(ordered);
    reindex();
}

// --- file format ----------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

std::vector<std::string> split_commas(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        auto part = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!part.empty()) out.emplace_back(part);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<EntryKind> kind_from(std::string_view w) {
    if (w == "axiom") return EntryKind::Axiom;
    if (w == "theorem") return EntryKind::Theorem;
    if (w == "lemma") return EntryKind::Lemma;
    if (w == "crule") return EntryKind::ConstructionRule;
    return std::nullopt;
}

ParseError shifted(const ParseError& e, std::size_t first_line) {
    SourceSpan s = e.span();
    s.line += first_line - 1;
    return ParseError(s, e.message());
}

}  // namespace

Registry parse_registry(std::string_view text, const MachineParams& params) {
    std::vector<std::string> lines;
    {
        std::size_t start = 0;
        while (start < text.size()) {
            auto nl = text.find('\n', start);
            std::string_view l = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
            if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
            lines.emplace_back(l);
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
    }
    Registry reg;
    std::size_t i = 0;
    auto blank = [&](std::size_t k) { return trim(lines[k]).empty(); };
    auto comment = [&](std::size_t k) { return trim(lines[k]).substr(0, 1) == "#"; };
    while (i < lines.size()) {
        if (blank(i) || comment(i)) {
            ++i;
            continue;
        }
        const std::size_t head_line = i + 1;
        auto words = split_words(lines[i]);
        SourceSpan head_span{head_line, 1, lines[i].size()};
        if (words.size() < 2) throw ParseError(head_span, "expected '<kind> <id>'");
        const std::string& kw = words[0];
        const std::string& id = words[1];
        ++i;

        try {
            if (kw == "schema") {
                if (words.size() != 4) throw ParseError(head_span, "expected 'schema <id> <rule> <int|prog>'");
                SchemaEntry s;
                s.id = id;
                if (words[2] == "io-input") s.rule = SchemaRule::IoInput;
                else if (words[2] == "io-output") s.rule = SchemaRule::IoOutput;
                else if (words[2] == "substitution") s.rule = SchemaRule::Substitution;
                else if (words[2] == "substitution-output") s.rule = SchemaRule::SubstitutionOutput;
                else throw ParseError(head_span, "unknown schema rule '" + words[2] + "'");
                if (words[3] == "int") s.level = Level::Integer;
                else if (words[3] == "prog") s.level = Level::Program;
                else throw ParseError(head_span, "unknown schema level '" + words[3] + "'");
                reg.add(std::move(s), params);
                continue;
            }
            if (words.size() != 2) throw ParseError(head_span, "unexpected text after entry id");
            bool is_false = kw == "false";
            auto kind = kind_from(kw);
            if (!is_false && !kind) throw ParseError({head_line, 1, kw.size()}, "unknown entry kind '" + kw + "'");

            bool imported = false;
            std::vector<std::string> deps;
            std::optional<std::string> proof;
            EntryKind false_kind = EntryKind::Axiom;
            while (i < lines.size() && !blank(i)) {
                std::string_view l = trim(lines[i]);
                if (l == "imported") {
                    imported = true;
                } else if (l.rfind("deps:", 0) == 0) {
                    deps = split_commas(l.substr(5));
                } else if (l.rfind("proof:", 0) == 0) {
                    proof = std::string(trim(l.substr(6)));
                } else if (l.rfind("kind:", 0) == 0 && is_false) {
                    auto k = kind_from(trim(l.substr(5)));
                    if (!k) throw ParseError({i + 1, 1, l.size()}, "unknown kind in falsity entry");
                    false_kind = *k;
                } else if (comment(i)) {
                } else {
                    break;
                }
                ++i;
            }
            std::size_t body_line = i + 1;
            std::string body;
            while (i < lines.size() && !blank(i)) {
                if (!comment(i)) body += lines[i];
                body += "\n";
                ++i;
            }
            if (trim(body).empty()) throw ParseError(head_span, "entry '" + id + "' has no body");
            try {
                if (is_false) {
                    FalseEntry f;
                    f.id = id;
                    f.kind = false_kind;
                    f.program = parse_program(body);
                    f.deps = std::move(deps);
                    f.proof = std::move(proof);
                    f.imported = imported;
                    reg.add(std::move(f), params);
                } else {
                    ProofHeader h = parse_header_body(body);
                    if (h.falsity) throw ParseError({1, 1, 0}, "use a 'false' block for falsity entries");
                    CpeEntry c;
                    c.id = id;
                    c.kind = *kind;
                    c.premise = std::move(h.premise);
                    c.conclusion = std::move(h.conclusion);
                    c.deps = std::move(deps);
                    c.proof = std::move(proof);
                    c.imported = imported;
                    reg.add(std::move(c), params);
                }
            } catch (const ParseError& e) {
                throw shifted(e, body_line);
            }
        } catch (const RegistryError& e) {
            throw ParseError(head_span, e.what());
        }
    }
    return reg;
}

namespace {

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
    return out;
}

void render_meta(std::string& out, bool imported, const std::optional<std::string>& proof,
                 const std::vector<std::string>& deps) {
    if (imported) out += "imported\n";
    if (proof) out += "proof: " + *proof + "\n";
    if (!deps.empty()) out += "deps: " + join(deps) + "\n";
}

}  // namespace

std::string render_registry(const Registry& r) {
    std::string out;
    bool first = true;
    for (const auto& e : r.entries()) {
        if (!first) out += "\n";
        first = false;
        if (auto* s = std::get_if<SchemaEntry>(&e)) {
            out += std::string("schema ") + s->id + " " + to_string(s->rule) + " " + to_string(s->level) + "\n";
        } else if (auto* c = std::get_if<CpeEntry>(&e)) {
            out += std::string(to_string(c->kind)) + " " + c->id + "\n";
            render_meta(out, c->imported, c->proof, c->deps);
            ProofHeader h;
            h.premise = c->premise;
            h.conclusion = c->conclusion;
            out += render_header_body(h) + "\n";
        } else if (auto* f = std::get_if<FalseEntry>(&e)) {
            out += "false " + f->id + "\n";
            if (f->kind != EntryKind::Axiom) out += std::string("kind: ") + to_string(f->kind) + "\n";
            render_meta(out, f->imported, f->proof, f->deps);
            out += "[ ";
            for (std::size_t i = 0; i < f->program.size(); ++i)
                out += (i ? ", " : "") + render_statement(f->program.stmts[i]);
            out += " ]\n";
        }
    }
    return out;
}

Registry load_registry(const std::string& path, const MachineParams& params) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open registry file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_registry(ss.str(), params);
}

void save_registry(const Registry& r, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write registry file '" + path + "'");
        out << render_registry(r);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot replace registry file '" + path + "'");
}

}  // namespace vpc
