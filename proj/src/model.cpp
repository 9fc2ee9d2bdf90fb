#include "vpc/model.hpp"

#include <algorithm>
#include <cctype>

namespace vpc {

void MachineParams::check() const {
    if (alphabet <= 0 || max_string <= 0 || max_list <= 0 || max_int <= 0 || max_millis <= 0)
        throw std::invalid_argument("machine parameters K, L, M, N, T must all be positive");
}

Term Term::var(std::string name) {
    Term t;
    t.kind_ = Kind::Var;
    t.name_ = std::move(name);
    return t;
}

Term Term::integer(int value) {
    if (value < -1 || value > 1)
        throw std::invalid_argument("integer constants are restricted to -1, 0, 1");
    Term t;
    t.kind_ = Kind::Int;
    t.value_ = value;
    return t;
}

Term Term::empty() {
    Term t;
    t.kind_ = Kind::Empty;
    return t;
}

Term Term::program(Program p) {
    Term t;
    t.kind_ = Kind::Prog;
    t.prog_ = std::make_shared<const Program>(std::move(p));
    return t;
}

const Program& Term::program() const {
    if (kind_ != Kind::Prog) throw std::logic_error("term is not a program literal");
    return *prog_;
}

bool operator==(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
    case Term::Kind::Var: return a.name_ == b.name_;
    case Term::Kind::Int: return a.value_ == b.value_;
    case Term::Kind::Empty: return true;
    case Term::Kind::Prog: return *a.prog_ == *b.prog_;
    }
    return false;
}

ValidityError::ValidityError(Kind kind, std::string subject, std::size_t position,
                             const std::string& what)
    : std::runtime_error(what), kind_(kind), subject_(std::move(subject)), position_(position) {}

const char* to_string(ValidityError::Kind kind) {
    switch (kind) {
    case ValidityError::Kind::DuplicateOutput: return "DuplicateOutput";
    case ValidityError::Kind::InputUsesLaterOutput: return "InputUsesLaterOutput";
    case ValidityError::Kind::ListTooLong: return "ListTooLong";
    case ValidityError::Kind::BadName: return "BadName";
    case ValidityError::Kind::BadShape: return "BadShape";
    }
    return "?";
}

bool is_var_name(std::string_view text) {
    if (text.empty() || !std::isalpha(static_cast<unsigned char>(text[0]))) return false;
    return std::all_of(text.begin(), text.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
}

bool is_program_name(std::string_view text) {
    if (text.empty() || !std::isupper(static_cast<unsigned char>(text[0]))) return false;
    for (char c : text.substr(1)) {
        auto u = static_cast<unsigned char>(c);
        if (!(std::islower(u) || std::isdigit(u))) return false;
    }
    return true;
}

namespace {

void push_unique(std::vector<Term>& xs, const Term& t) {
    if (std::find(xs.begin(), xs.end(), t) == xs.end()) xs.push_back(t);
}

void push_unique(std::vector<std::string>& xs, const std::string& s) {
    if (std::find(xs.begin(), xs.end(), s) == xs.end()) xs.push_back(s);
}

bool names_var(const Term& t, const std::vector<std::string>& ys) {
    return t.is_var() && std::find(ys.begin(), ys.end(), t.name()) != ys.end();
}

}  // namespace

MainIO statement_io(const Statement& s) {
    if (s.is_atomic()) {
        const auto& a = s.atomic();
        MainIO io;
        for (const auto& t : a.inputs) push_unique(io.inputs, t);
        io.outputs = a.outputs;
        return io;
    }
    MainIO io;
    std::vector<Term> accumulated;
    for (const auto& operand : s.disjunction().operands) {
        MainIO sub = main_io(operand);
        for (const auto& t : sub.inputs) push_unique(accumulated, t);
        for (const auto& y : sub.outputs) push_unique(io.outputs, y);
    }
    for (const auto& t : accumulated)
        if (!names_var(t, io.outputs)) io.inputs.push_back(t);
    return io;
}

MainIO main_io(const Program& p) {
    MainIO io;
    std::vector<Term> accumulated;
    for (const auto& s : p.stmts) {
        MainIO sub = statement_io(s);
        for (const auto& t : sub.inputs) push_unique(accumulated, t);
        for (const auto& y : sub.outputs) io.outputs.push_back(y);
    }
    for (const auto& t : accumulated)
        if (!names_var(t, io.outputs)) io.inputs.push_back(t);
    return io;
}

namespace {

void check_term(const Term& t, std::size_t pos, const MachineParams& params) {
    if (t.is_var()) {
        if (!is_var_name(t.name()) || static_cast<std::int64_t>(t.name().size()) > params.max_string)
            throw ValidityError(ValidityError::Kind::BadName, t.name(), pos,
                                "invalid variable name '" + t.name() + "'");
    } else if (t.kind() == Term::Kind::Prog) {
        validate_program(t.program(), params);
    }
}

void check_statement(const Statement& s, std::size_t pos, const MachineParams& params) {
    if (s.is_atomic()) {
        const auto& a = s.atomic();
        if (!is_program_name(a.name) || static_cast<std::int64_t>(a.name.size()) > params.max_string)
            throw ValidityError(ValidityError::Kind::BadName, a.name, pos,
                                "invalid program name '" + a.name + "'");
        for (const auto& t : a.inputs) check_term(t, pos, params);
        for (std::size_t i = 0; i < a.outputs.size(); ++i) {
            const auto& y = a.outputs[i];
            check_term(Term::var(y), pos, params);
            for (std::size_t j = 0; j < i; ++j)
                if (a.outputs[j] == y)
                    throw ValidityError(ValidityError::Kind::DuplicateOutput, y, pos,
                                        "duplicate output '" + y + "' at statement " +
                                            std::to_string(pos));
        }
        return;
    }
    const auto& d = s.disjunction();
    if (d.operands.size() < 2)
        throw ValidityError(ValidityError::Kind::BadShape, "|", pos,
                            "a disjunction needs at least two operands");
    for (const auto& operand : d.operands) {
        try {
            validate_program(operand, params);
        } catch (const ValidityError& e) {
            throw ValidityError(e.kind(), e.subject(), pos,
                                std::string(e.what()) + " (inside disjunction at statement " +
                                    std::to_string(pos) + ")");
        }
    }
}

}  // namespace

Program validate_program(std::vector<Statement> stmts, const MachineParams& params) {
    if (static_cast<std::int64_t>(stmts.size()) > params.max_list)
        throw ValidityError(ValidityError::Kind::ListTooLong, "", stmts.size(),
                            "program has " + std::to_string(stmts.size()) +
                                " statements, limit is " + std::to_string(params.max_list));
    std::vector<MainIO> ios;
    ios.reserve(stmts.size());
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        check_statement(stmts[i], i + 1, params);
        ios.push_back(statement_io(stmts[i]));
    }
    std::map<std::string, std::size_t> first_output;
    for (std::size_t i = 0; i < ios.size(); ++i)
        for (const auto& y : ios[i].outputs) {
            auto [it, fresh] = first_output.emplace(y, i);
            if (!fresh && it->second != i)
                throw ValidityError(ValidityError::Kind::DuplicateOutput, y, i + 1,
                                    "output '" + y + "' of statement " + std::to_string(i + 1) +
                                        " already produced by statement " +
                                        std::to_string(it->second + 1));
        }
    for (std::size_t i = 0; i < ios.size(); ++i)
        for (const auto& x : ios[i].inputs) {
            if (!x.is_var()) continue;
            auto it = first_output.find(x.name());
            if (it != first_output.end() && it->second >= i)
                throw ValidityError(ValidityError::Kind::InputUsesLaterOutput, x.name(), i + 1,
                                    "input '" + x.name() + "' of statement " +
                                        std::to_string(i + 1) + " is an output of statement " +
                                        std::to_string(it->second + 1));
        }
    // Atomic statements: an input may not coincide with one of its own outputs.
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        if (!stmts[i].is_atomic()) continue;
        const auto& a = stmts[i].atomic();
        for (const auto& x : a.inputs)
            if (names_var(x, a.outputs))
                throw ValidityError(ValidityError::Kind::InputUsesLaterOutput, x.name(), i + 1,
                                    "input '" + x.name() + "' of statement " +
                                        std::to_string(i + 1) + " is also one of its outputs");
    }
    return Program{std::move(stmts)};
}

Program concat(const Program& p, const Program& q, const MachineParams& params) {
    std::vector<Statement> all = p.stmts;
    all.insert(all.end(), q.stmts.begin(), q.stmts.end());
    return validate_program(std::move(all), params);
}

bool is_sublist(const Program& q, const Program& p) {
    if (q.size() > p.size()) return false;
    std::vector<bool> taken(p.size(), false);
    // Statement equality is exact, so greedy assignment is complete.
    for (const auto& s : q.stmts) {
        bool found = false;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!taken[i] && p.stmts[i] == s) {
                taken[i] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

bool is_nonatomic_sugar(std::string_view name) {
    return name == "Neq" || name == "Le" || name == "Abs";
}

namespace {

Statement atom(std::string name, std::vector<Term> in, std::vector<std::string> out = {}) {
    return Atomic{std::move(name), std::move(in), std::move(out)};
}

}  // namespace

Statement expand_nonatomic(const Statement& s) {
    if (!s.is_atomic()) return s;
    const auto& a = s.atomic();
    if ((a.name == "Neq" || a.name == "Le") && a.inputs.size() == 2 && a.outputs.empty()) {
        const Term& x = a.inputs[0];
        const Term& y = a.inputs[1];
        Disjunction d;
        if (a.name == "Neq") {
            d.operands.push_back(Program{{atom("Lt", {x, y})}});
            d.operands.push_back(Program{{atom("Lt", {y, x})}});
        } else {
            d.operands.push_back(Program{{atom("Lt", {x, y})}});
            d.operands.push_back(Program{{atom("Eq", {x, y})}});
        }
        return d;
    }
    if (a.name == "Abs" && a.inputs.size() == 3 && a.outputs.size() == 1) {
        const Term& x = a.inputs[0];
        const Term& zero = a.inputs[1];
        const Term& minus_one = a.inputs[2];
        const std::string& y = a.outputs[0];
        Disjunction d;
        d.operands.push_back(
            Program{{atom("Lt", {x, zero}), atom("Mult", {minus_one, x}, {y})}});
        d.operands.push_back(Program{{atom("Le", {zero, x}), atom("Aid", {x}, {y})}});
        return d;
    }
    return s;
}

std::vector<Program> split_disjunction(const Program& p, std::size_t index,
                                       const MachineParams& params) {
    if (index >= p.size()) throw std::out_of_range("split index beyond program length");
    Statement expanded = expand_nonatomic(p.stmts[index]);
    if (!expanded.is_disjunction())
        throw std::invalid_argument("statement " + std::to_string(index + 1) +
                                    " is not a disjunction");
    std::vector<Program> out;
    for (const auto& operand : expanded.disjunction().operands) {
        std::vector<Statement> stmts(p.stmts.begin(), p.stmts.begin() + static_cast<long>(index));
        stmts.insert(stmts.end(), operand.stmts.begin(), operand.stmts.end());
        stmts.insert(stmts.end(), p.stmts.begin() + static_cast<long>(index) + 1, p.stmts.end());
        out.push_back(validate_program(std::move(stmts), params));
    }
    return out;
}

void collect_variables(const Statement& s, std::set<std::string>& out) {
    if (s.is_atomic()) {
        for (const auto& t : s.atomic().inputs) {
            if (t.is_var())
                out.insert(t.name());
            else if (t.kind() == Term::Kind::Prog)
                for (const auto& inner : t.program().stmts) collect_variables(inner, out);
        }
        for (const auto& y : s.atomic().outputs) out.insert(y);
        return;
    }
    for (const auto& operand : s.disjunction().operands)
        for (const auto& inner : operand.stmts) collect_variables(inner, out);
}

std::set<std::string> variables(const Program& p) {
    std::set<std::string> out;
    for (const auto& s : p.stmts) collect_variables(s, out);
    return out;
}

namespace {

Term substitute(const Term& t, const Substitution& subst) {
    if (!t.is_var()) return t;
    auto it = subst.find(t.name());
    return it == subst.end() ? t : it->second;
}

}  // namespace

Statement apply_substitution(const Statement& s, const Substitution& subst) {
    if (s.is_atomic()) {
        Atomic a = s.atomic();
        for (auto& t : a.inputs) t = substitute(t, subst);
        for (auto& y : a.outputs) {
            auto it = subst.find(y);
            if (it != subst.end()) {
                if (!it->second.is_var())
                    throw std::invalid_argument("output '" + y + "' cannot be replaced by a constant");
                y = it->second.name();
            }
        }
        return a;
    }
    Disjunction d;
    for (const auto& operand : s.disjunction().operands) {
        Program q;
        for (const auto& inner : operand.stmts) q.stmts.push_back(apply_substitution(inner, subst));
        d.operands.push_back(std::move(q));
    }
    return d;
}

std::string NameSupply::next() {
    for (int round = 0;; ++round) {
        for (char c = 'a'; c <= 'z'; ++c) {
            std::string candidate(1, c);
            if (round > 0) candidate += std::to_string(round);
            if (used_.insert(candidate).second) return candidate;
        }
    }
}

}  // namespace vpc
