#include "vpc/rulebase.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>

namespace vpc {

namespace {

constexpr std::array<std::string_view, 11> kHigherOrder{"Prog", "Equiv", "Eqio", "Sub",  "Cpe", "False",
                                                        "Conc", "Disj",  "Acpe", "Afalse", "Sd"};

const char* equality_name(Level level) { return level == Level::Integer ? "Eq" : "Equiv"; }

bool element_allowed(const Term& t, Level level) {
    if (level == Level::Integer) return t.is_var() || t.kind() == Term::Kind::Int;
    return t.kind() != Term::Kind::Int;
}

bool substitutable(const Atomic& a, Level level) {
    if (level == Level::Program && (a.name == "Cpe" || a.name == "False" || a.name == "Eqio")) return false;
    return !a.inputs.empty();
}

bool is_equality_line(const Statement* s, Level level) {
    return s && s->is_atomic() && s->atomic().name == equality_name(level) && s->atomic().inputs.size() == 2 &&
           s->atomic().outputs.empty();
}

}  // namespace

bool is_higher_order_name(std::string_view name) {
    return std::find(kHigherOrder.begin(), kHigherOrder.end(), name) != kHigherOrder.end();
}

Level level_of(const Statement& s) {
    if (s.is_atomic()) return is_higher_order_name(s.atomic().name) ? Level::Program : Level::Integer;
    for (const auto& op : s.disjunction().operands)
        for (const auto& inner : op.stmts)
            if (level_of(inner) == Level::Program) return Level::Program;
    return Level::Integer;
}

std::vector<Term> interleave(const std::vector<Term>& u, const std::vector<Term>& v) {
    if (u.size() != v.size()) throw std::invalid_argument("interleave needs lists of equal length");
    std::vector<Term> out;
    out.reserve(2 * u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.push_back(u[i]);
        out.push_back(v[i]);
    }
    return out;
}

Program expand_eqlst(const std::vector<Term>& u, const std::vector<Term>& v, Level level) {
    if (u.size() != v.size()) throw std::invalid_argument("equality list needs lists of equal length");
    if (u.empty()) throw std::invalid_argument("equality list needs at least one pair");
    Program out;
    for (std::size_t i = 0; i < u.size(); ++i) out.stmts.push_back(Atomic{equality_name(level), {u[i], v[i]}, {}});
    return out;
}

SchemaMatch match_io_type(const Statement& line, std::size_t label, const Term& element, const SchemaEntry& schema) {
    if (!line.is_atomic()) throw std::invalid_argument("I/O-type rules apply to atomic statements");
    const Atomic& a = line.atomic();
    if (level_of(line) != schema.level)
        throw std::invalid_argument(schema.id + " does not apply at the level of " + a.name);
    bool present = false;
    if (schema.rule == SchemaRule::IoInput)
        present = std::find(a.inputs.begin(), a.inputs.end(), element) != a.inputs.end();
    else if (schema.rule == SchemaRule::IoOutput)
        present = element.is_var() && std::find(a.outputs.begin(), a.outputs.end(), element.name()) != a.outputs.end();
    else
        throw std::invalid_argument(schema.id + " is not an I/O-type rule");
    if (!present) throw std::invalid_argument("element does not occur in the cited list");
    if (!element_allowed(element, schema.level)) throw std::invalid_argument("element has the wrong type for " + schema.id);
    SchemaMatch m;
    m.schema = schema.id;
    m.labels = {label};
    m.conclusion.push_back(Atomic{schema.level == Level::Integer ? "Int" : "Prog", {element}, {}});
    return m;
}

SchemaMatch match_substitution(const LineView& lines, std::size_t target, const std::vector<std::size_t>& equalities,
                               std::optional<std::size_t> other, const SchemaEntry& schema, NameSupply names) {
    auto line = [&](std::size_t label) -> const Statement* {
        if (label == 0 || label > lines.size()) throw std::invalid_argument("label " + std::to_string(label) + " out of range");
        return lines[label - 1];
    };
    const Statement* t = line(target);
    if (!t || !t->is_atomic()) throw std::invalid_argument("substitution target must be an atomic statement");
    const Atomic& a = t->atomic();
    if (level_of(*t) != schema.level) throw std::invalid_argument(schema.id + " does not apply at the level of " + a.name);
    if (!substitutable(a, schema.level)) throw std::invalid_argument(a.name + " is excluded from substitution");
    if (equalities.size() != a.inputs.size())
        throw std::invalid_argument("need one equality line per input of " + a.name);
    SchemaMatch m;
    m.schema = schema.id;
    m.labels.push_back(target);
    std::vector<Term> replaced;
    for (std::size_t i = 0; i < equalities.size(); ++i) {
        const Statement* e = line(equalities[i]);
        if (!is_equality_line(e, schema.level))
            throw std::invalid_argument("line " + std::to_string(equalities[i]) + " is not an " +
                                        equality_name(schema.level) + " statement");
        const Atomic& eq = e->atomic();
        if (!(eq.inputs[0] == a.inputs[i]))
            throw std::invalid_argument("line " + std::to_string(equalities[i]) + " does not equate input " +
                                        std::to_string(i + 1) + " of the target");
        if (a.inputs[i].is_var()) m.substitution.emplace(a.inputs[i].name(), eq.inputs[1]);
        replaced.push_back(eq.inputs[1]);
        m.labels.push_back(equalities[i]);
    }
    if (schema.rule == SchemaRule::Substitution) {
        if (other) throw std::invalid_argument(schema.id + " takes no comparison line");
        Atomic out{a.name, replaced, {}};
        for (std::size_t i = 0; i < a.outputs.size(); ++i) {
            auto y = names.next();
            m.fresh.insert(y);
            out.outputs.push_back(y);
        }
        m.conclusion.push_back(std::move(out));
        return m;
    }
    if (schema.rule != SchemaRule::SubstitutionOutput) throw std::invalid_argument(schema.id + " is not a substitution rule");
    if (!other) throw std::invalid_argument(schema.id + " needs the comparison line P(x',y')");
    if (a.outputs.empty()) throw std::invalid_argument("target has no outputs");
    const Statement* o = line(*other);
    if (!o || !o->is_atomic() || o->atomic().name != a.name || o->atomic().inputs != replaced ||
        o->atomic().outputs.size() != a.outputs.size())
        throw std::invalid_argument("line " + std::to_string(*other) + " is not " + a.name + " on the substituted inputs");
    m.labels.push_back(*other);
    std::vector<Term> ys, ys2;
    for (std::size_t i = 0; i < a.outputs.size(); ++i) {
        ys.push_back(Term::var(a.outputs[i]));
        ys2.push_back(Term::var(o->atomic().outputs[i]));
    }
    m.conclusion = expand_eqlst(ys, ys2, schema.level).stmts;
    return m;
}

namespace {

void equality_choices(const LineView& lines, const Atomic& a, Level level, std::size_t k, std::vector<std::size_t>& cur,
                      const std::function<void(const std::vector<std::size_t>&)>& emit) {
    if (k == a.inputs.size()) {
        emit(cur);
        return;
    }
    for (std::size_t j = 0; j < lines.size(); ++j) {
        const Statement* e = lines[j];
        if (!is_equality_line(e, level) || !(e->atomic().inputs[0] == a.inputs[k])) continue;
        cur.push_back(j + 1);
        equality_choices(lines, a, level, k + 1, cur, emit);
        cur.pop_back();
    }
}

}  // namespace

std::vector<SchemaMatch> schema_options(const LineView& lines, const SchemaEntry& schema, const NameSupply& names) {
    std::vector<SchemaMatch> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Statement* s = lines[i];
        if (!s || !s->is_atomic() || level_of(*s) != schema.level) continue;
        const Atomic& a = s->atomic();
        const std::size_t label = i + 1;
        switch (schema.rule) {
        case SchemaRule::IoInput: {
            std::vector<Term> seen;
            for (const auto& t : a.inputs) {
                if (!element_allowed(t, schema.level) || std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
                seen.push_back(t);
                out.push_back(match_io_type(*s, label, t, schema));
            }
            break;
        }
        case SchemaRule::IoOutput:
            for (const auto& y : a.outputs) out.push_back(match_io_type(*s, label, Term::var(y), schema));
            break;
        case SchemaRule::Substitution:
        case SchemaRule::SubstitutionOutput: {
            if (!substitutable(a, schema.level)) break;
            if (schema.rule == SchemaRule::SubstitutionOutput && a.outputs.empty()) break;
            std::vector<std::size_t> cur;
            equality_choices(lines, a, schema.level, 0, cur, [&](const std::vector<std::size_t>& eqs) {
                if (schema.rule == SchemaRule::Substitution) {
                    out.push_back(match_substitution(lines, label, eqs, std::nullopt, schema, names));
                    return;
                }
                for (std::size_t k = 0; k < lines.size(); ++k) {
                    if (k == i) continue;
                    try {
                        out.push_back(match_substitution(lines, label, eqs, k + 1, schema, names));
                    } catch (const std::invalid_argument&) {
                    }
                }
            });
            break;
        }
        }
    }
    return out;
}

std::vector<SchemaMatch> schema_instances_at(const LineView& lines, const SchemaEntry& schema,
                                             const std::vector<std::size_t>& labels, const NameSupply& names) {
    std::vector<SchemaMatch> out;
    if (labels.empty()) return out;
    for (auto l : labels)
        if (l == 0 || l > lines.size() || !lines[l - 1]) return out;
    const Statement* s = lines[labels[0] - 1];
    try {
        switch (schema.rule) {
        case SchemaRule::IoInput:
        case SchemaRule::IoOutput: {
            if (labels.size() != 1 || !s->is_atomic()) return out;
            const Atomic& a = s->atomic();
            std::vector<Term> elems;
            if (schema.rule == SchemaRule::IoInput)
                elems = a.inputs;
            else
                for (const auto& y : a.outputs) elems.push_back(Term::var(y));
            for (const auto& t : elems) {
                try {
                    out.push_back(match_io_type(*s, labels[0], t, schema));
                } catch (const std::invalid_argument&) {
                }
            }
            break;
        }
        case SchemaRule::Substitution: {
            std::vector<std::size_t> eqs(labels.begin() + 1, labels.end());
            out.push_back(match_substitution(lines, labels[0], eqs, std::nullopt, schema, names));
            break;
        }
        case SchemaRule::SubstitutionOutput: {
            if (labels.size() < 3) return out;
            std::vector<std::size_t> eqs(labels.begin() + 1, labels.end() - 1);
            out.push_back(match_substitution(lines, labels[0], eqs, labels.back(), schema, names));
            break;
        }
        }
    } catch (const std::invalid_argument&) {
    }
    return out;
}

}  // namespace vpc
