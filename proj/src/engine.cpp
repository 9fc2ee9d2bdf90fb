#include "vpc/engine.hpp"

#include "vpc/equivalence.hpp"
#include "vpc/rulebase.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>

namespace vpc {

const char* to_string(DerivStatus s) {
    switch (s) {
    case DerivStatus::Open: return "open";
    case DerivStatus::ConcludedFalse: return "concluded-false";
    case DerivStatus::Extracted: return "extracted";
    }
    return "?";
}

Program Derivation::program() const {
    Program p;
    for (const auto& l : lines)
        if (l.statement) p.stmts.push_back(*l.statement);
    return p;
}

std::set<std::string> Derivation::used_names() const { return variables(program()); }

Derivation new_derivation(const Program& premises, const MachineParams& params) {
    Program p = validate_program(premises, params);
    Derivation d;
    d.base_count = p.size();
    for (std::size_t i = 0; i < p.size(); ++i) d.lines.push_back(DerivLine{i + 1, p.stmts[i], {}, false, 0, {}, {}});
    return d;
}

namespace {

std::string fnv_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void fingerprint_into(const Derivation& d, std::string& out) {
    out += std::to_string(d.base_count) + "/" + to_string(d.status) + "\n";
    for (const auto& l : d.lines) {
        out += render_proof_line(l.label, l.statement, l.split_mark, l.connections) + "\n";
    }
    if (d.has_split()) {
        out += "split " + std::to_string(d.split_label) + "\n";
        for (const auto& b : d.branches) {
            out += "{\n";
            fingerprint_into(b, out);
            out += "}\n";
        }
    }
}

LineView view_of(const Derivation& d) {
    LineView v;
    for (const auto& l : d.lines) v.push_back(l.statement ? &*l.statement : nullptr);
    return v;
}

void collect_outputs(const Statement& s, std::vector<std::string>& out) {
    if (s.is_atomic()) {
        for (const auto& y : s.atomic().outputs) out.push_back(y);
        return;
    }
    for (const auto& y : statement_io(s).outputs) out.push_back(y);
}

// Conclusion under the substitution, with fresh names for unbound outputs.
std::optional<std::vector<Statement>> instantiate(const std::vector<Statement>& conclusion, Substitution s,
                                                  NameSupply names, std::set<std::string>& fresh) {
    std::vector<Statement> out;
    for (const auto& c : conclusion) {
        std::vector<std::string> ys;
        collect_outputs(c, ys);
        for (const auto& y : ys)
            if (!s.count(y)) {
                auto n = names.next();
                fresh.insert(n);
                s.emplace(y, Term::var(n));
            }
        std::set<std::string> vars;
        collect_variables(c, vars);
        for (const auto& v : vars)
            if (!s.count(v)) return std::nullopt;
        out.push_back(apply_substitution(c, s));
    }
    return out;
}

bool quick_candidate(const Statement& line, const Statement& tmpl) {
    if (tmpl.is_atomic() && !is_nonatomic_sugar(tmpl.atomic().name)) {
        return line.is_atomic() && line.atomic().name == tmpl.atomic().name;
    }
    return true;
}

// Every assignment of derivation lines (repetition allowed) to the template
// statements, in template order.
void match_lines(const LineView& lines, const std::vector<Statement>& tmpl, std::size_t k, const Substitution& s,
                 std::vector<std::size_t>& labels,
                 const std::function<void(const Substitution&, const std::vector<std::size_t>&)>& emit) {
    if (k == tmpl.size()) {
        emit(s, labels);
        return;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Statement* line = lines[i];
        if (!line || !quick_candidate(*line, tmpl[k])) continue;
        match_statement(*line, tmpl[k], s, [&](const Substitution& next) {
            labels.push_back(i + 1);
            match_lines(lines, tmpl, k + 1, next, labels, emit);
            labels.pop_back();
        });
    }
}

// Same as match_lines but against fixed cited labels.
void match_cited(const LineView& lines, const std::vector<Statement>& tmpl, const std::vector<std::size_t>& cited,
                 std::size_t k, const Substitution& s, const std::function<void(const Substitution&)>& emit) {
    if (k == tmpl.size()) {
        emit(s);
        return;
    }
    const Statement* line = lines[cited[k] - 1];
    match_statement(*line, tmpl[k], s, [&](const Substitution& next) { match_cited(lines, tmpl, cited, k + 1, next, emit); });
}

bool all_present(const std::vector<Statement>& stmts, const Program& current) {
    for (const auto& s : stmts)
        if (std::find(current.stmts.begin(), current.stmts.end(), s) == current.stmts.end()) return false;
    return true;
}

}  // namespace

std::string fingerprint(const Derivation& d) {
    std::string text;
    fingerprint_into(d, text);
    return fnv_hex(text);
}

std::string DerivOption::text() const {
    if (falsity()) return "False";
    std::string out;
    for (std::size_t i = 0; i < conclusion.size(); ++i) out += (i ? ", " : "") + render_statement(conclusion[i]);
    return out;
}

std::string DerivOption::hash() const { return fnv_hex(state + "\n" + text() + render_connection(connection)); }

std::vector<DerivOption> generate_options(const Derivation& d, const Registry& reg, const MachineParams& params) {
    std::vector<DerivOption> out;
    if (!d.open() || d.has_split()) return out;
    const std::string state = fingerprint(d);
    const LineView lines = view_of(d);
    const Program current = d.program();
    const NameSupply names(d.used_names());

    auto keep = [&](DerivOption opt) {
        if (!opt.falsity()) {
            if (opt.fresh.empty() && all_present(opt.conclusion, current)) return;
            Program extension{opt.conclusion};
            try {
                concat(current, extension, params);
            } catch (const ValidityError&) {
                return;
            }
        }
        opt.state = state;
        out.push_back(std::move(opt));
    };

    for (const auto& e : reg.entries()) {
        if (const auto* c = std::get_if<CpeEntry>(&e)) {
            std::vector<std::size_t> labels;
            match_lines(lines, c->premise.stmts, 0, {}, labels,
                        [&](const Substitution& s, const std::vector<std::size_t>& ls) {
                            DerivOption opt;
                            opt.kind = OptionKind::Cpe;
                            auto concl = instantiate(c->conclusion.stmts, s, names, opt.fresh);
                            if (!concl) return;
                            opt.conclusion = std::move(*concl);
                            opt.connection = {c->id, ls};
                            opt.substitution = s;
                            keep(std::move(opt));
                        });
        } else if (const auto* f = std::get_if<FalseEntry>(&e)) {
            std::vector<std::size_t> labels;
            match_lines(lines, f->program.stmts, 0, {}, labels,
                        [&](const Substitution& s, const std::vector<std::size_t>& ls) {
                            DerivOption opt;
                            opt.kind = OptionKind::Falsity;
                            opt.connection = {f->id, ls};
                            opt.substitution = s;
                            keep(std::move(opt));
                        });
        } else if (const auto* sc = std::get_if<SchemaEntry>(&e)) {
            for (auto& m : schema_options(lines, *sc, names)) {
                DerivOption opt;
                opt.kind = OptionKind::Schema;
                opt.connection = {m.schema, m.labels};
                opt.conclusion = std::move(m.conclusion);
                opt.substitution = std::move(m.substitution);
                opt.fresh = std::move(m.fresh);
                keep(std::move(opt));
            }
        }
    }

    std::vector<std::pair<std::string, std::size_t>> keys;
    for (std::size_t i = 0; i < out.size(); ++i)
        keys.emplace_back(out[i].text() + "\x1f" + render_connection(out[i].connection), i);
    std::sort(keys.begin(), keys.end());
    std::vector<DerivOption> sorted;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i && keys[i].first == keys[i - 1].first) continue;
        sorted.push_back(std::move(out[keys[i].second]));
    }
    return sorted;
}

std::string render_options(const std::vector<DerivOption>& options) {
    std::string out;
    for (std::size_t i = 0; i < options.size(); ++i) {
        std::string num = std::to_string(i + 1);
        if (num.size() < 4) num.insert(0, 4 - num.size(), ' ');
        std::string text = options[i].text();
        if (text.size() < 20) text.append(20 - text.size(), ' ');
        else text += ' ';
        out += num + " " + text + render_connection(options[i].connection) + "\n";
    }
    return out;
}

namespace {

void append_checked(Derivation& d, DerivLine line, const MachineParams& params) {
    if (line.statement) {
        Program p = d.program();
        p.stmts.push_back(*line.statement);
        validate_program(p, params);
    }
    line.label = d.lines.size() + 1;
    d.lines.push_back(std::move(line));
}

}  // namespace

void apply_option(Derivation& d, const DerivOption& option, const MachineParams& params) {
    if (!d.open()) throw EngineError(std::string("derivation is ") + to_string(d.status));
    if (d.has_split()) throw EngineError("a split is active; work in a branch or contract first");
    if (option.state != fingerprint(d)) throw StaleOption("option was generated for a different derivation state");
    if (option.falsity()) {
        append_checked(d, DerivLine{0, std::nullopt, {option.connection}, false, 0, {}, {}}, params);
        d.status = DerivStatus::ConcludedFalse;
        return;
    }
    Derivation next = d;
    for (const auto& s : option.conclusion) append_checked(next, DerivLine{0, s, {option.connection}, false, 0, {}, {}}, params);
    d = std::move(next);
}

void split(Derivation& d, std::size_t label, const MachineParams& params) {
    if (!d.open()) throw EngineError(std::string("derivation is ") + to_string(d.status));
    if (d.has_split()) throw EngineError("a split is already active on line " + std::to_string(d.split_label));
    if (label == 0 || label > d.lines.size()) throw EngineError("no line " + std::to_string(label));
    const auto& line = d.lines[label - 1];
    if (!line.statement) throw EngineError("line " + std::to_string(label) + " is False");
    Statement expanded = expand_nonatomic(*line.statement);
    if (!expanded.is_disjunction())
        throw EngineError("line " + std::to_string(label) + " is not a disjunction: " + render_statement(*line.statement));
    std::vector<Program> operands = split_disjunction(d.program(), label - 1, params);
    d.lines[label - 1].split_mark = true;
    d.split_label = label;
    d.operand_sizes.clear();
    d.branches.clear();
    for (std::size_t i = 0; i < operands.size(); ++i) {
        d.operand_sizes.push_back(expanded.disjunction().operands[i].size());
        Derivation b;
        b.base_count = operands[i].size();
        for (std::size_t j = 0; j < operands[i].size(); ++j)
            b.lines.push_back(DerivLine{j + 1, operands[i].stmts[j], {}, false, 0, {}, {}});
        d.branches.push_back(std::move(b));
    }
}

ContractResult contract(Derivation& d, const MachineParams& params) {
    if (!d.has_split()) throw EngineError("no active split");
    for (std::size_t i = 0; i < d.branches.size(); ++i)
        if (d.branches[i].has_split())
            throw EngineError("branch " + std::to_string(i + 1) + " has an active split of its own");

    const std::size_t s = d.split_label;
    std::set<std::string> allowed;
    for (const auto& l : d.lines)
        if (l.label != s && l.statement) collect_variables(*l.statement, allowed);
    {
        MainIO io = statement_io(expand_nonatomic(*d.lines[s - 1].statement));
        for (const auto& t : io.inputs)
            if (t.is_var()) allowed.insert(t.name());
        for (const auto& y : io.outputs) allowed.insert(y);
    }
    const std::set<std::string> main_names = d.used_names();
    auto eligible = [&](const Statement& c) {
        std::vector<std::string> outs;
        collect_outputs(c, outs);
        std::set<std::string> vars;
        collect_variables(c, vars);
        for (const auto& v : vars) {
            if (allowed.count(v)) continue;
            bool own_output = std::find(outs.begin(), outs.end(), v) != outs.end();
            if (!own_output || main_names.count(v)) return false;
        }
        return true;
    };
    auto derived_line = [](const Derivation& b, const Statement& c) -> const DerivLine* {
        for (std::size_t k = b.base_count; k < b.lines.size(); ++k)
            if (b.lines[k].statement && *b.lines[k].statement == c) return &b.lines[k];
        return nullptr;
    };

    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < d.branches.size(); ++i) {
        if (d.branches[i].status == DerivStatus::ConcludedFalse) continue;
        open.push_back(i);
    }

    std::optional<Statement> common;
    if (!open.empty()) {
        const Derivation& first = d.branches[open[0]];
        for (std::size_t k = first.lines.size(); k-- > first.base_count;) {
            const auto& cand = first.lines[k].statement;
            if (!cand || !eligible(*cand)) continue;
            bool everywhere = true;
            for (std::size_t j = 1; j < open.size() && everywhere; ++j)
                everywhere = derived_line(d.branches[open[j]], *cand) != nullptr;
            if (everywhere) {
                common = *cand;
                break;
            }
        }
        if (!common) throw EngineError("the open branches share no eligible derived conclusion");
    }

    DerivLine line;
    for (const auto& b : d.branches) {
        if (b.status == DerivStatus::ConcludedFalse) {
            const auto& conns = b.lines.back().connections;
            line.connections.insert(line.connections.end(), conns.begin(), conns.end());
        } else {
            const auto& conns = derived_line(b, *common)->connections;
            line.connections.insert(line.connections.end(), conns.begin(), conns.end());
        }
    }
    line.statement = common;
    line.contracted_split = s;
    line.contracted_sizes = d.operand_sizes;
    line.contracted_branches = d.branches;
    append_checked(d, std::move(line), params);

    ContractResult r;
    r.conclusion = common;
    if (!common) {
        r.which = ContractResult::Case::AllFalse;
        d.status = DerivStatus::ConcludedFalse;
    } else {
        r.which = open.size() == d.branches.size() ? ContractResult::Case::Common : ContractResult::Case::CommonWithFalse;
    }
    d.split_label = 0;
    d.operand_sizes.clear();
    d.branches.clear();
    return r;
}

Derivation& focus(Derivation& root, const std::vector<std::size_t>& path) {
    Derivation* cur = &root;
    for (auto i : path) {
        if (!cur->has_split() || i >= cur->branches.size()) throw EngineError("no such branch");
        cur = &cur->branches[i];
    }
    return *cur;
}

const Derivation& focus(const Derivation& root, const std::vector<std::size_t>& path) {
    return focus(const_cast<Derivation&>(root), path);
}

namespace {

struct Reach {
    std::set<std::string> deps;
    std::set<std::pair<const Derivation*, std::size_t>> seen;

    void visit(const Derivation& d, std::size_t label, const std::function<void(std::size_t)>& on_base) {
        if (label == 0 || label > d.lines.size()) return;
        if (!seen.insert({&d, label}).second) return;
        if (label <= d.base_count) {
            on_base(label);
            return;
        }
        const DerivLine& l = d.lines[label - 1];
        for (const auto& c : l.connections) deps.insert(c.entry);
        if (l.contracted_split) {
            const std::size_t s = l.contracted_split;
            for (std::size_t i = 0; i < l.contracted_branches.size() && i < l.connections.size(); ++i) {
                const Derivation& b = l.contracted_branches[i];
                const std::size_t m = l.contracted_sizes[i];
                auto to_host = [&, s, m](std::size_t bl) {
                    std::size_t host = bl < s ? bl : bl < s + m ? s : bl - m + 1;
                    visit(d, host, on_base);
                };
                for (auto bl : l.connections[i].labels) visit(b, bl, to_host);
            }
            return;
        }
        for (const auto& c : l.connections)
            for (auto x : c.labels) visit(d, x, on_base);
    }
};

Program pick(const Derivation& d, const std::vector<std::size_t>& labels) {
    Program p;
    for (auto l : labels) p.stmts.push_back(*d.lines[l - 1].statement);
    return p;
}

}  // namespace

Extraction extract_theorem(const Derivation& d, const std::string& id, EntryKind kind, const Registry& reg,
                           const ExtractOptions& opts, const MachineParams& params) {
    if (d.has_split()) throw EngineError("contract the active split before extracting");
    if (d.status == DerivStatus::Extracted) throw EngineError("derivation was already extracted");
    if (d.lines.size() <= d.base_count) throw EngineError("derivation has no derived lines");

    Reach reach;
    std::set<std::size_t> used;
    reach.visit(d, d.lines.size(), [&](std::size_t l) { used.insert(l); });
    Extraction x;
    x.used_premises.assign(used.begin(), used.end());
    std::vector<std::string> deps(reach.deps.begin(), reach.deps.end());
    Program premise = pick(d, x.used_premises);

    if (!d.lines.back().statement) {
        if (premise.empty()) throw EngineError("False was reached without using any premise");
        for (std::size_t drop = 0; drop < premise.size() && premise.size() > 1 && opts.minimality_depth > 0; ++drop) {
            Program smaller = premise;
            smaller.stmts.erase(smaller.stmts.begin() + static_cast<long>(drop));
            Derivation probe = saturate(new_derivation(smaller, params), reg, opts.minimality_depth, params);
            if (probe.status == DerivStatus::ConcludedFalse)
                throw MinimalityFailure(smaller, "a strict sublist is already false: " + render_program(smaller));
        }
        FalseEntry f;
        f.id = id;
        f.kind = kind;
        f.program = std::move(premise);
        f.deps = std::move(deps);
        x.entry = std::move(f);
        return x;
    }

    if (opts.halt_guard && !premise.empty()) {
        Derivation probe = saturate(new_derivation(premise, params), reg, opts.guard_depth, params);
        if (probe.status == DerivStatus::ConcludedFalse)
            x.warnings.push_back("the premise saturates to False; the theorem holds vacuously");
    }
    CpeEntry c;
    c.id = id;
    c.kind = kind;
    c.premise = std::move(premise);
    c.conclusion.stmts.push_back(*d.lines.back().statement);
    c.deps = std::move(deps);
    x.entry = std::move(c);
    return x;
}

Derivation saturate(const Derivation& d, const Registry& reg, std::size_t depth, const MachineParams& params,
                    std::size_t max_lines) {
    if (depth == 0) throw std::invalid_argument("saturation depth must be at least 1");
    Derivation cur = d;
    for (std::size_t round = 0; round < depth && cur.open() && !cur.has_split(); ++round) {
        auto opts = generate_options(cur, reg, params);
        auto f = std::find_if(opts.begin(), opts.end(), [](const DerivOption& o) { return o.falsity(); });
        if (f != opts.end()) {
            apply_option(cur, *f, params);
            break;
        }
        bool grew = false;
        for (const auto& opt : opts) {
            if (cur.lines.size() >= max_lines) break;
            NameSupply names(cur.used_names());
            Substitution rename;
            std::set<std::string> fresh;
            for (const auto& n : opt.fresh) {
                auto m = names.next();
                rename.emplace(n, Term::var(m));
                fresh.insert(m);
            }
            std::vector<Statement> concl;
            for (const auto& s : opt.conclusion) concl.push_back(apply_substitution(s, rename));
            bool present = true;
            for (const auto& s : concl) {
                bool found = false;
                for (const auto& l : cur.lines)
                    if (l.statement && same_up_to_renaming(s, *l.statement, fresh, {})) {
                        found = true;
                        break;
                    }
                if (!found) {
                    present = false;
                    break;
                }
            }
            if (present) continue;
            Derivation next = cur;
            try {
                for (const auto& s : concl)
                    append_checked(next, DerivLine{0, s, {opt.connection}, false, 0, {}, {}}, params);
            } catch (const ValidityError&) {
                continue;
            }
            cur = std::move(next);
            grew = true;
        }
        if (!grew) break;
    }
    return cur;
}

// --- listing replay -------------------------------------------------------------

namespace {

struct Verdict {
    bool ok = false;
    std::string message;
    std::vector<std::size_t> cited;   // for the oracle
};

std::string show(const std::optional<Statement>& s) { return s ? render_statement(*s) : std::string("False"); }

Verdict verify_step(const Derivation& d, const ConnectionList& conn, const std::optional<Statement>& printed,
                    const Registry& reg) {
    Verdict v;
    const Entry* e = reg.find(conn.entry);
    if (!e) {
        v.message = "unknown entry " + conn.entry;
        return v;
    }
    for (auto l : conn.labels) {
        if (l == 0 || l > d.lines.size()) {
            v.message = "label " + std::to_string(l) + " does not refer to an earlier line";
            return v;
        }
        if (!d.lines[l - 1].statement) {
            v.message = "label " + std::to_string(l) + " refers to False";
            return v;
        }
    }
    v.cited = conn.labels;
    const LineView lines = view_of(d);
    const std::set<std::string> taken = d.used_names();
    const NameSupply names(taken);

    if (const auto* sc = std::get_if<SchemaEntry>(e)) {
        if (!printed) {
            v.message = conn.entry + " does not conclude False";
            return v;
        }
        auto insts = schema_instances_at(lines, *sc, conn.labels, names);
        if (insts.empty()) {
            v.message = conn.entry + " does not apply to lines " + render_connection(conn);
            return v;
        }
        for (const auto& m : insts)
            for (const auto& c : m.conclusion)
                if (same_up_to_renaming(c, *printed, m.fresh, taken)) {
                    v.ok = true;
                    return v;
                }
        v.message = conn.entry + " yields " + render_statements(insts[0].conclusion) + ", listing has " + show(printed);
        return v;
    }

    const std::vector<Statement>& tmpl = std::holds_alternative<CpeEntry>(*e) ? std::get<CpeEntry>(*e).premise.stmts
                                                                               : std::get<FalseEntry>(*e).program.stmts;
    if (tmpl.size() != conn.labels.size()) {
        v.message = conn.entry + " has " + std::to_string(tmpl.size()) + " premise statement(s), " +
                    std::to_string(conn.labels.size()) + " cited";
        return v;
    }
    bool matched = false;
    std::string expected;
    match_cited(lines, tmpl, conn.labels, 0, {}, [&](const Substitution& s) {
        if (v.ok) return;
        matched = true;
        if (const auto* f = std::get_if<FalseEntry>(e)) {
            (void)f;
            v.ok = !printed;
            if (!v.ok) expected = "False";
            return;
        }
        const auto& c = std::get<CpeEntry>(*e);
        std::set<std::string> fresh;
        auto concl = instantiate(c.conclusion.stmts, s, names, fresh);
        if (!concl) return;
        if (concl->size() != 1) {
            expected = render_statements(*concl) + " (multi-statement conclusions are not listed on one line)";
            return;
        }
        if (printed && same_up_to_renaming(concl->front(), *printed, fresh, taken))
            v.ok = true;
        else if (expected.empty())
            expected = render_statement(concl->front());
    });
    if (v.ok) return v;
    if (!matched)
        v.message = "cited lines do not match the premise of " + conn.entry;
    else
        v.message = conn.entry + " yields " + expected + ", listing has " + show(printed);
    return v;
}

std::optional<std::string> oracle_step(const Derivation& d, const Verdict& v, const std::optional<Statement>& printed,
                                       const CheckOptions& opts, const MachineParams& params) {
    std::vector<std::size_t> labels = v.cited;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    Program premise = pick(d, labels);
    for (const auto& s : premise.stmts)
        if (level_of(s) != Level::Integer) return std::nullopt;
    if (printed && level_of(*printed) != Level::Integer) return std::nullopt;
    try {
        Program conclusion;
        if (printed) conclusion.stmts.push_back(*printed);
        OracleReport r = cpe_oracle(premise, conclusion, opts.domain, params);
        if (!printed && r.premise_computable != 0)
            return "oracle: cited lines are computable at " + std::to_string(r.premise_computable) + " point(s)";
        if (printed && !r.sound())
            return "oracle: " + std::to_string(r.counterexample_count) + " counterexample(s)";
    } catch (const DomainTooLarge&) {
    } catch (const ValidityError&) {
    }
    return std::nullopt;
}

}  // namespace

bool CheckReport::ok() const {
    return header_ok && std::all_of(lines.begin(), lines.end(), [](const LineCheck& l) { return l.ok; });
}

std::string CheckReport::describe() const {
    std::string out;
    for (const auto& l : lines)
        if (!l.ok) out += id + ": line " + std::to_string(l.label) + ": " + l.message + "\n";
    if (!header_ok) out += id + ": header: " + header_message + "\n";
    return out;
}

CheckReport check_proof(const ProofScript& script, const Registry& reg, const CheckOptions& opts,
                        const MachineParams& params, const std::string& proof_ref) {
    CheckReport r;
    r.id = script.header.id;
    std::size_t n = 0;
    Program premises;
    while (n < script.lines.size() && script.lines[n].connections.empty() && script.lines[n].statement) {
        premises.stmts.push_back(*script.lines[n].statement);
        ++n;
    }
    Derivation d;
    try {
        d = new_derivation(premises, params);
    } catch (const ValidityError& e) {
        r.lines.push_back({e.position(), false, e.what()});
        r.header_message = "not checked";
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        d.lines[i].split_mark = script.lines[i].split_mark;
        r.lines.push_back({i + 1, true, {}});
    }

    for (std::size_t k = n; k < script.lines.size(); ++k) {
        const ProofLine& pl = script.lines[k];
        LineCheck lc{pl.label, true, {}};
        auto fail = [&](std::string m) {
            if (lc.ok) {
                lc.ok = false;
                lc.message = std::move(m);
            }
        };
        DerivLine line{0, pl.statement, pl.connections, pl.split_mark, 0, {}, {}};

        if (!d.open()) fail("line follows False");
        if (pl.connections.empty()) fail("premise line after a derived line");

        if (lc.ok && pl.connections.size() == 1) {
            Verdict v = verify_step(d, pl.connections[0], pl.statement, reg);
            if (!v.ok) fail(v.message);
            if (lc.ok && opts.strict)
                if (auto m = oracle_step(d, v, pl.statement, opts, params)) fail(*m);
        } else if (lc.ok) {
            std::size_t s = 0;
            for (const auto& l : d.lines)
                if (l.split_mark) s = l.label;
            Derivation view = d;
            try {
                if (s == 0) throw EngineError("composite connection lists without a split line");
                split(view, s, params);
                if (view.branches.size() != pl.connections.size())
                    throw EngineError("split line " + std::to_string(s) + " has " + std::to_string(view.branches.size()) +
                                      " operands but " + std::to_string(pl.connections.size()) + " connection lists are given");
                bool all_false = true;
                for (std::size_t i = 0; i < view.branches.size(); ++i) {
                    Derivation& b = view.branches[i];
                    const Entry* e = reg.find(pl.connections[i].entry);
                    bool branch_false = e && std::holds_alternative<FalseEntry>(*e);
                    std::optional<Statement> want = branch_false ? std::nullopt : pl.statement;
                    if (!branch_false) all_false = false;
                    Verdict v = verify_step(b, pl.connections[i], want, reg);
                    if (!v.ok) throw EngineError("branch " + std::to_string(i + 1) + ": " + v.message);
                    if (opts.strict)
                        if (auto m = oracle_step(b, v, want, opts, params))
                            throw EngineError("branch " + std::to_string(i + 1) + ": " + *m);
                    append_checked(b, DerivLine{0, want, {pl.connections[i]}, false, 0, {}, {}}, params);
                    if (branch_false) b.status = DerivStatus::ConcludedFalse;
                }
                if (all_false && pl.statement) throw EngineError("every branch is false; the line must be False");
                if (!all_false && !pl.statement) throw EngineError("some branch is not false");
                line.contracted_split = s;
                line.contracted_sizes = view.operand_sizes;
                line.contracted_branches = std::move(view.branches);
            } catch (const std::exception& e) {
                fail(e.what());
            }
        }

        try {
            append_checked(d, std::move(line), params);
            if (!pl.statement) d.status = DerivStatus::ConcludedFalse;
        } catch (const ValidityError& e) {
            fail(std::string("line breaks program validity: ") + e.what());
        }
        r.lines.push_back(std::move(lc));
    }
    r.derivation = d;

    if (!std::all_of(r.lines.begin(), r.lines.end(), [](const LineCheck& l) { return l.ok; })) {
        r.header_message = "not checked (line failures)";
        return r;
    }
    EntryKind kind = script.header.kind == ProofKind::Theorem ? EntryKind::Theorem : EntryKind::Lemma;
    try {
        Extraction x = extract_theorem(d, script.header.id, kind, reg, opts.extract, params);
        const auto& h = script.header;
        if (auto* f = std::get_if<FalseEntry>(&x.entry)) {
            if (!h.falsity)
                r.header_message = "derivation ends in False but the header states a conclusion";
            else if (!(f->program == h.premise))
                r.header_message = "extracted false program " + render_program(f->program) + " differs from header " +
                                   render_program(h.premise);
            else
                r.header_ok = true;
            f->proof = proof_ref;
        } else {
            auto& c = std::get<CpeEntry>(x.entry);
            if (h.falsity)
                r.header_message = "header states falsity but the derivation ends in " + render_program(c.conclusion);
            else if (!(c.premise == h.premise))
                r.header_message = "extracted premise " + render_program(c.premise) + " differs from header " +
                                   render_program(h.premise);
            else if (!(c.conclusion == h.conclusion))
                r.header_message = "extracted conclusion " + render_program(c.conclusion) + " differs from header " +
                                   render_program(h.conclusion);
            else
                r.header_ok = true;
            c.proof = proof_ref;
        }
        if (r.header_ok) r.entry = std::move(x.entry);
    } catch (const std::exception& e) {
        r.header_message = e.what();
    }
    return r;
}

ProofScript to_script(const Derivation& d, const ProofHeader& header) {
    ProofScript s;
    s.header = header;
    for (const auto& l : d.lines) s.lines.push_back(ProofLine{l.label, l.statement, l.split_mark, l.connections, {}});
    return s;
}

}  // namespace vpc
