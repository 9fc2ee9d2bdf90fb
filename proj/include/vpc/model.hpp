#pragma once

// Static term language: names, constants, statements, programs and the
// list operations defined over them.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vpc {

/// Machine parameters bounding every object the system constructs.
struct MachineParams {
    std::int64_t alphabet = 75;          // K
    std::int64_t max_string = 256;       // L
    std::int64_t max_list = 4096;        // M
    std::int64_t max_int = 2147483647;   // N
    std::int64_t max_millis = 5000;      // T

    /// Throws std::invalid_argument unless all parameters are positive.
    void check() const;

    bool operator==(const MachineParams&) const = default;
};

struct Program;

/// An element of an input list: a variable, one of the integer constants
/// -1/0/1, the empty program `ep`, or a program literal.
class Term {
public:
    enum class Kind { Var, Int, Empty, Prog };

    static Term var(std::string name);
    static Term integer(int value);
    static Term empty();
    static Term program(Program p);

    Kind kind() const { return kind_; }
    bool is_var() const { return kind_ == Kind::Var; }
    bool is_constant() const { return kind_ != Kind::Var; }
    const std::string& name() const { return name_; }
    int value() const { return value_; }
    const Program& program() const;

    friend bool operator==(const Term& a, const Term& b);

private:
    Kind kind_ = Kind::Var;
    std::string name_;
    int value_ = 0;
    std::shared_ptr<const Program> prog_;
};

struct Statement;

/// `Name(inputs, outputs)`.
struct Atomic {
    std::string name;
    std::vector<Term> inputs;
    std::vector<std::string> outputs;

    bool operator==(const Atomic&) const = default;
};

struct Program {
    std::vector<Statement> stmts;

    bool empty() const { return stmts.empty(); }
    std::size_t size() const { return stmts.size(); }
    bool operator==(const Program&) const;
};

/// `a_1 | ... | a_n`; a single list element, never spliced into its host.
struct Disjunction {
    std::vector<Program> operands;

    bool operator==(const Disjunction&) const = default;
};

struct Statement {
    std::variant<Atomic, Disjunction> node;

    Statement() = default;
    Statement(Atomic a) : node(std::move(a)) {}
    Statement(Disjunction d) : node(std::move(d)) {}

    bool is_atomic() const { return std::holds_alternative<Atomic>(node); }
    bool is_disjunction() const { return std::holds_alternative<Disjunction>(node); }
    const Atomic& atomic() const { return std::get<Atomic>(node); }
    const Disjunction& disjunction() const { return std::get<Disjunction>(node); }

    bool operator==(const Statement&) const = default;
};

inline bool Program::operator==(const Program& o) const { return stmts == o.stmts; }

/// Template variable -> candidate term.
using Substitution = std::map<std::string, Term>;

class ValidityError : public std::runtime_error {
public:
    enum class Kind { DuplicateOutput, InputUsesLaterOutput, ListTooLong, BadName, BadShape };

    ValidityError(Kind kind, std::string subject, std::size_t position, const std::string& what);

    Kind kind() const { return kind_; }
    /// Offending variable or name (empty for ListTooLong).
    const std::string& subject() const { return subject_; }
    /// 1-based statement position within the list that failed.
    std::size_t position() const { return position_; }

private:
    Kind kind_;
    std::string subject_;
    std::size_t position_;
};

const char* to_string(ValidityError::Kind kind);

bool is_var_name(std::string_view text);
bool is_program_name(std::string_view text);

/// Statement-level I/O. For a disjunction: operands share outputs, inputs
/// accumulate across operands.
struct MainIO {
    std::vector<Term> inputs;
    std::vector<std::string> outputs;
};

MainIO statement_io(const Statement& s);
MainIO main_io(const Program& p);

Program validate_program(std::vector<Statement> stmts, const MachineParams& params = {});
inline Program validate_program(const Program& p, const MachineParams& params = {}) {
    return validate_program(p.stmts, params);
}

Program concat(const Program& p, const Program& q, const MachineParams& params = {});

/// True iff q's statements equal statements of p at distinct indices, in any order.
bool is_sublist(const Program& q, const Program& p);

/// Operand programs [prefix, a_i, suffix] of the disjunction at `index` (0-based).
/// Nonatomic sugar (Neq, Le, Abs) is expanded first.
std::vector<Program> split_disjunction(const Program& p, std::size_t index,
                                       const MachineParams& params = {});

/// Neq/Le/Abs to their disjunction forms; anything else unchanged.
Statement expand_nonatomic(const Statement& s);
bool is_nonatomic_sugar(std::string_view name);

/// Every variable name mentioned anywhere, including nested operands.
void collect_variables(const Statement& s, std::set<std::string>& out);
std::set<std::string> variables(const Program& p);

Statement apply_substitution(const Statement& s, const Substitution& subst);

/// Deterministic supply of fresh lowercase names: a..z, then a1..z1, ...
class NameSupply {
public:
    NameSupply() = default;
    explicit NameSupply(std::set<std::string> used) : used_(std::move(used)) {}

    std::string next();
    void reserve(const std::string& name) { used_.insert(name); }
    bool used(const std::string& name) const { return used_.count(name) != 0; }

private:
    std::set<std::string> used_;
};

}  // namespace vpc
