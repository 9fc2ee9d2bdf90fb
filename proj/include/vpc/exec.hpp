#pragma once

// Bounded execution of programs and the brute-force CPE oracle.

#include "vpc/model.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vpc {

/// A bounded integer or a program value.
class Value {
public:
    static Value integer(std::int64_t v, const MachineParams& params = {});
    static Value program(Program p);

    bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_program() const { return !is_int(); }
    std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
    const Program& as_program() const { return std::get<Program>(v_); }

    std::string to_string() const;
    bool operator==(const Value& o) const { return v_ == o.v_; }

private:
    std::variant<std::int64_t, Program> v_;
};

using Env = std::map<std::string, Value>;

struct ExecOutcome {
    enum class Kind { Ok, TypeViolation, DisjunctionViolation, Timeout };

    Kind kind = Kind::Ok;
    std::size_t at = 0;     // 1-based statement position of the violation
    std::string detail;
    Env outputs;            // bindings produced by the program when Ok

    bool ok() const { return kind == Kind::Ok; }
    bool operator==(const ExecOutcome&) const = default;
};

const char* to_string(ExecOutcome::Kind kind);

struct AtomicResult {
    bool ok = false;
    std::vector<Value> outputs;
    std::string detail;
};

/// One atomic program on already evaluated inputs.
AtomicResult exec_atomic(const std::string& name, const std::vector<Value>& inputs,
                         const MachineParams& params = {});

/// Runs p left to right. Every input variable of main_io(p) must be bound
/// in env (throws std::invalid_argument otherwise).
ExecOutcome exec_program(const Program& p, const Env& env, const MachineParams& params = {});

struct Domain {
    std::int64_t lo = -10;
    std::int64_t hi = 10;
};

class DomainTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleReport {
    std::vector<std::string> variables;
    std::size_t points = 0;
    std::size_t premise_computable = 0;
    std::size_t counterexample_count = 0;
    std::vector<Env> counterexamples;   // first few only
    std::size_t timeouts = 0;

    bool sound() const { return counterexample_count == 0; }
};

/// Enumerates every assignment of domain values to the free variables of
/// [premise, conclusion]; a counterexample is a point where the premise runs
/// and the extension does not.
OracleReport cpe_oracle(const Program& premise, const Program& conclusion, Domain domain,
                        const MachineParams& params = {}, std::size_t max_points = 20'000'000,
                        std::size_t keep = 16);

}  // namespace vpc
