#include "vpc/equivalence.hpp"

#include "vpc/syntax.hpp"

#include <algorithm>
#include <numeric>

namespace vpc {

namespace {

bool same_multiset(const std::vector<Statement>& a, const std::vector<Statement>& b) {
    return a.size() == b.size() && is_sublist(Program{a}, Program{b});
}

bool single_disjunction(const Program& p) { return p.size() == 1 && p.stmts[0].is_disjunction(); }

bool operands_permuted(const Program& u, const Program& v) {
    if (!single_disjunction(u) || !single_disjunction(v)) return false;
    const auto& a = u.stmts[0].disjunction().operands;
    const auto& b = v.stmts[0].disjunction().operands;
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& op : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!used[j] && b[j] == op) {
                used[j] = found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

// u = [p, a_1|...|a_n, q] and v = [p,a_1,q] | ... | [p,a_n,q]
bool distributes(const Program& u, const Program& v) {
    if (!single_disjunction(v)) return false;
    const auto& vops = v.stmts[0].disjunction().operands;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u.stmts[i].is_disjunction()) continue;
        const auto& ops = u.stmts[i].disjunction().operands;
        if (ops.size() != vops.size()) continue;
        bool all = true;
        for (std::size_t k = 0; k < ops.size() && all; ++k) {
            std::vector<Statement> joined(u.stmts.begin(), u.stmts.begin() + static_cast<long>(i));
            joined.insert(joined.end(), ops[k].stmts.begin(), ops[k].stmts.end());
            joined.insert(joined.end(), u.stmts.begin() + static_cast<long>(i) + 1, u.stmts.end());
            all = joined == vops[k].stmts;
        }
        if (all) return true;
    }
    return false;
}

bool absorbs_empty(const Program& u, const Program& v) {
    if (!single_disjunction(u)) return false;
    const auto& ops = u.stmts[0].disjunction().operands;
    return ops.size() == 2 && ops[0].empty() && ops[1] == v;
}

bool one_way(const Program& u, const Program& v) {
    return u == v || same_multiset(u.stmts, v.stmts) || operands_permuted(u, v) || distributes(u, v) ||
           absorbs_empty(u, v);
}

using Alternatives = std::vector<std::vector<Statement>>;

Alternatives normal_alternatives(const Program& p);

Alternatives statement_alternatives(const Statement& s) {
    Statement e = expand_nonatomic(s);
    if (e.is_atomic()) return {{e}};
    Alternatives out;
    for (const auto& operand : e.disjunction().operands) {
        if (operand.empty()) continue;
        auto sub = normal_alternatives(operand);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    if (out.empty()) out.push_back({});
    return out;
}

Alternatives normal_alternatives(const Program& p) {
    Alternatives acc{{}};
    for (const auto& s : p.stmts) {
        Alternatives alts = statement_alternatives(s);
        Alternatives next;
        next.reserve(acc.size() * alts.size());
        for (const auto& prefix : acc)
            for (const auto& alt : alts) {
                auto joined = prefix;
                joined.insert(joined.end(), alt.begin(), alt.end());
                next.push_back(std::move(joined));
            }
        acc = std::move(next);
    }
    return acc;
}

}  // namespace

bool equiv_step(const Program& u, const Program& v) { return one_way(u, v) || one_way(v, u); }

CanonicalForm canonical_form(const Program& p) {
    CanonicalForm out;
    for (const auto& alt : normal_alternatives(p)) {
        std::vector<std::string> texts;
        texts.reserve(alt.size());
        for (const auto& s : alt) texts.push_back(render_statement(s));
        std::sort(texts.begin(), texts.end());
        out.push_back(std::move(texts));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool equiv(const Program& u, const Program& v) { return canonical_form(u) == canonical_form(v); }

const char* to_string(MatchFailure::Kind kind) {
    switch (kind) {
    case MatchFailure::Kind::Shape: return "Shape";
    case MatchFailure::Kind::RepetitionBroken: return "RepetitionBroken";
    case MatchFailure::Kind::ConstantMismatch: return "ConstantMismatch";
    }
    return "?";
}

namespace {

enum class TermMatch { Ok, Repetition, Constant, Shape };

TermMatch match_program_terms(const Program& cand, const Program& tmpl, Substitution& s);

TermMatch bind_var(const std::string& var, const Term& value, Substitution& s) {
    auto [it, fresh] = s.emplace(var, value);
    if (fresh || it->second == value) return TermMatch::Ok;
    return TermMatch::Repetition;
}

TermMatch match_term(const Term& cand, const Term& tmpl, Substitution& s) {
    switch (tmpl.kind()) {
    case Term::Kind::Var: return bind_var(tmpl.name(), cand, s);
    case Term::Kind::Int:
    case Term::Kind::Empty: return cand == tmpl ? TermMatch::Ok : TermMatch::Constant;
    case Term::Kind::Prog:
        if (cand.kind() != Term::Kind::Prog) return TermMatch::Constant;
        return match_program_terms(cand.program(), tmpl.program(), s);
    }
    return TermMatch::Shape;
}

TermMatch match_atomic(const Atomic& cand, const Atomic& tmpl, Substitution& s) {
    if (cand.name != tmpl.name || cand.inputs.size() != tmpl.inputs.size() ||
        cand.outputs.size() != tmpl.outputs.size())
        return TermMatch::Shape;
    for (std::size_t i = 0; i < tmpl.inputs.size(); ++i) {
        auto r = match_term(cand.inputs[i], tmpl.inputs[i], s);
        if (r != TermMatch::Ok) return r;
    }
    for (std::size_t i = 0; i < tmpl.outputs.size(); ++i) {
        auto r = bind_var(tmpl.outputs[i], Term::var(cand.outputs[i]), s);
        if (r != TermMatch::Ok) return r;
    }
    return TermMatch::Ok;
}

// Strict, in-order structural matching used inside program literals.
TermMatch match_statement_strict(const Statement& cand, const Statement& tmpl, Substitution& s) {
    if (cand.is_atomic() != tmpl.is_atomic()) return TermMatch::Shape;
    if (cand.is_atomic()) return match_atomic(cand.atomic(), tmpl.atomic(), s);
    const auto& a = cand.disjunction().operands;
    const auto& b = tmpl.disjunction().operands;
    if (a.size() != b.size()) return TermMatch::Shape;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto r = match_program_terms(a[i], b[i], s);
        if (r != TermMatch::Ok) return r;
    }
    return TermMatch::Ok;
}

TermMatch match_program_terms(const Program& cand, const Program& tmpl, Substitution& s) {
    if (cand.size() != tmpl.size()) return TermMatch::Shape;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        auto r = match_statement_strict(cand.stmts[i], tmpl.stmts[i], s);
        if (r != TermMatch::Ok) return r;
    }
    return TermMatch::Ok;
}

void match_operands(const std::vector<Program>& cand, const std::vector<Program>& tmpl, std::size_t k,
                    std::vector<bool>& used, const Substitution& s,
                    const std::function<void(const Substitution&)>& emit) {
    if (k == tmpl.size()) {
        emit(s);
        return;
    }
    for (std::size_t j = 0; j < cand.size(); ++j) {
        if (used[j]) continue;
        Substitution next = s;
        if (match_program_terms(cand[j], tmpl[k], next) != TermMatch::Ok) continue;
        used[j] = true;
        match_operands(cand, tmpl, k + 1, used, next, emit);
        used[j] = false;
    }
}

}  // namespace

void match_statement(const Statement& candidate, const Statement& tmpl, const Substitution& base,
                     const std::function<void(const Substitution&)>& emit) {
    if (candidate.is_atomic() && tmpl.is_atomic() && candidate.atomic().name == tmpl.atomic().name) {
        Substitution s = base;
        if (match_atomic(candidate.atomic(), tmpl.atomic(), s) == TermMatch::Ok) emit(s);
        return;
    }
    Statement c = expand_nonatomic(candidate);
    Statement t = expand_nonatomic(tmpl);
    if (!c.is_disjunction() || !t.is_disjunction()) return;
    const auto& cops = c.disjunction().operands;
    const auto& tops = t.disjunction().operands;
    if (cops.size() != tops.size()) return;
    std::vector<bool> used(cops.size(), false);
    match_operands(cops, tops, 0, used, base, emit);
}

bool match_statement_once(const Statement& candidate, const Statement& tmpl, Substitution& s) {
    bool found = false;
    Substitution result;
    match_statement(candidate, tmpl, s, [&](const Substitution& r) {
        if (!found) {
            found = true;
            result = r;
        }
    });
    if (found) s = std::move(result);
    return found;
}

Substitution io_equivalent(const Program& candidate, const Program& tmpl) {
    if (candidate.size() != tmpl.size())
        throw MatchFailure(MatchFailure::Kind::Shape, 0, "programs differ in length");
    Substitution s;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        const auto& c = candidate.stmts[i];
        const auto& t = tmpl.stmts[i];
        if (c.is_atomic() != t.is_atomic())
            throw MatchFailure(MatchFailure::Kind::Shape, i + 1,
                               "statement " + std::to_string(i + 1) + " differs in shape");
        TermMatch r = match_statement_strict(c, t, s);
        if (r == TermMatch::Ok) continue;
        auto where = " at statement " + std::to_string(i + 1);
        switch (r) {
        case TermMatch::Repetition:
            throw MatchFailure(MatchFailure::Kind::RepetitionBroken, i + 1,
                               "variable repetition of the template is not mirrored" + where);
        case TermMatch::Constant:
            throw MatchFailure(MatchFailure::Kind::ConstantMismatch, i + 1,
                               "template constant does not reappear" + where);
        default:
            throw MatchFailure(MatchFailure::Kind::Shape, i + 1,
                               "name or arity mismatch" + where);
        }
    }
    return s;
}

namespace {

struct Renamer {
    const std::set<std::string>& renamable;
    const std::set<std::string>& taken;
    std::map<std::string, std::string> fwd, back;

    bool name(const std::string& a, const std::string& b) {
        if (!renamable.count(a)) return a == b;
        auto it = fwd.find(a);
        if (it != fwd.end()) return it->second == b;
        if (taken.count(b) || back.count(b)) return false;
        fwd[a] = b;
        back[b] = a;
        return true;
    }

    bool term(const Term& a, const Term& b) {
        if (a.kind() != b.kind()) return false;
        if (a.is_var()) return name(a.name(), b.name());
        if (a.kind() == Term::Kind::Prog) return program(a.program(), b.program());
        return a == b;
    }

    bool program(const Program& a, const Program& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!statement(a.stmts[i], b.stmts[i])) return false;
        return true;
    }

    bool statement(const Statement& a, const Statement& b) {
        if (a.is_atomic() != b.is_atomic()) return false;
        if (a.is_atomic()) {
            const auto& x = a.atomic();
            const auto& y = b.atomic();
            if (x.name != y.name || x.inputs.size() != y.inputs.size() || x.outputs.size() != y.outputs.size())
                return false;
            for (std::size_t i = 0; i < x.inputs.size(); ++i)
                if (!term(x.inputs[i], y.inputs[i])) return false;
            for (std::size_t i = 0; i < x.outputs.size(); ++i)
                if (!name(x.outputs[i], y.outputs[i])) return false;
            return true;
        }
        const auto& x = a.disjunction().operands;
        const auto& y = b.disjunction().operands;
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!program(x[i], y[i])) return false;
        return true;
    }
};

}  // namespace

bool same_up_to_renaming(const Statement& a, const Statement& b, const std::set<std::string>& renamable,
                         const std::set<std::string>& taken) {
    Renamer r{renamable, taken, {}, {}};
    return r.statement(a, b);
}

}  // namespace vpc
