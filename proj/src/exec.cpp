#include "vpc/exec.hpp"

#include "vpc/equivalence.hpp"
#include "vpc/syntax.hpp"

#include <algorithm>
#include <cstdlib>

namespace vpc {

Value Value::integer(std::int64_t v, const MachineParams& params) {
    if (v > params.max_int || v < -params.max_int)
        throw std::out_of_range("integer " + std::to_string(v) + " exceeds N=" + std::to_string(params.max_int));
    Value out;
    out.v_ = v;
    return out;
}

Value Value::program(Program p) {
    Value out;
    out.v_ = std::move(p);
    return out;
}

std::string Value::to_string() const {
    return is_int() ? std::to_string(as_int()) : render_program(as_program());
}

const char* to_string(ExecOutcome::Kind kind) {
    switch (kind) {
    case ExecOutcome::Kind::Ok: return "Ok";
    case ExecOutcome::Kind::TypeViolation: return "TypeViolation";
    case ExecOutcome::Kind::DisjunctionViolation: return "DisjunctionViolation";
    case ExecOutcome::Kind::Timeout: return "Timeout";
    }
    return "?";
}

namespace {

AtomicResult fail(std::string detail) { return {false, {}, std::move(detail)}; }

AtomicResult ok(std::vector<Value> outs = {}) { return {true, std::move(outs), {}}; }

bool fits(std::int64_t v, const MachineParams& params) { return v <= params.max_int && v >= -params.max_int; }

AtomicResult bounded(std::int64_t v, const char* what, const MachineParams& params) {
    if (!fits(v, params)) return fail(std::string(what) + " " + std::to_string(v) + " is outside the integer range");
    return ok({Value::integer(v, params)});
}

bool checked_mul(std::int64_t a, std::int64_t b, std::int64_t& out) { return !__builtin_mul_overflow(a, b, &out); }

}  // namespace

AtomicResult exec_atomic(const std::string& name, const std::vector<Value>& in, const MachineParams& params) {
    auto arity = [&](std::size_t n) { return in.size() == n; };
    auto ints = [&]() {
        for (const auto& v : in)
            if (!v.is_int()) return false;
        return true;
    };
    auto progs = [&]() {
        for (const auto& v : in)
            if (!v.is_program()) return false;
        return true;
    };
    auto show = [&](std::size_t i) { return in[i].to_string(); };

    if (name == "Int") {
        if (!arity(1)) return fail("Int takes one input");
        return ints() ? ok() : fail(show(0) + " is not an integer");
    }
    if (name == "Lt" || name == "Eq" || name == "Neq" || name == "Le") {
        if (!arity(2)) return fail(name + " takes two inputs");
        if (!ints()) return fail(name + " needs integer inputs");
        std::int64_t a = in[0].as_int(), b = in[1].as_int();
        bool holds = name == "Lt" ? a < b : name == "Eq" ? a == b : name == "Neq" ? a != b : a <= b;
        return holds ? ok() : fail(name + " fails for " + show(0) + ", " + show(1));
    }
    if (name == "Aid") {
        if (!arity(1) || !ints()) return fail("Aid takes one integer input");
        return ok({in[0]});
    }
    if (name == "Add") {
        if (!arity(2) || !ints()) return fail("Add takes two integer inputs");
        return bounded(in[0].as_int() + in[1].as_int(), "sum", params);
    }
    if (name == "Mult") {
        if (!arity(2) || !ints()) return fail("Mult takes two integer inputs");
        std::int64_t r = 0;
        if (!checked_mul(in[0].as_int(), in[1].as_int(), r)) return fail("product overflows");
        return bounded(r, "product", params);
    }
    if (name == "Div") {
        if (!arity(2) || !ints()) return fail("Div takes two integer inputs");
        std::int64_t a = in[0].as_int(), b = in[1].as_int();
        if (b == 0) return fail("division by zero");
        if (a % b != 0) return fail(show(1) + " does not divide " + show(0));
        return bounded(a / b, "quotient", params);
    }
    if (name == "Abs") {
        if (!arity(3) || !ints()) return fail("Abs takes three integer inputs");
        std::int64_t x = in[0].as_int(), z = in[1].as_int(), m = in[2].as_int();
        if (x < z) {
            std::int64_t r = 0;
            if (!checked_mul(m, x, r)) return fail("product overflows");
            return bounded(r, "product", params);
        }
        return ok({in[0]});
    }

    if (name == "Prog") {
        if (!arity(1)) return fail("Prog takes one input");
        return progs() ? ok() : fail(show(0) + " is not a program");
    }
    if (name == "Afalse") {
        if (!arity(1) || !progs()) return fail("Afalse takes one program input");
        return ok();
    }
    if (name == "Equiv" || name == "Eqio" || name == "Sub" || name == "Acpe") {
        if (!arity(2) || !progs()) return fail(name + " takes two program inputs");
        const Program& p = in[0].as_program();
        const Program& q = in[1].as_program();
        if (name == "Acpe") return ok();
        if (name == "Equiv") return equiv(p, q) ? ok() : fail("programs are not equivalent");
        if (name == "Sub") return is_sublist(p, q) ? ok() : fail("not a sublist");
        try {
            io_equivalent(p, q);
            return ok();
        } catch (const MatchFailure& e) {
            return fail(e.what());
        }
    }
    if (name == "Conc" || name == "Disj") {
        if (!arity(2) || !progs()) return fail(name + " takes two program inputs");
        try {
            if (name == "Conc") return ok({Value::program(concat(in[0].as_program(), in[1].as_program(), params))});
            Disjunction d{{in[0].as_program(), in[1].as_program()}};
            return ok({Value::program(validate_program(std::vector<Statement>{Statement(d)}, params))});
        } catch (const ValidityError& e) {
            return fail(e.what());
        }
    }
    if (name == "Cpe" || name == "False" || name == "Sd")
        return fail(name + " is not decidable by execution");
    return fail("unknown atomic program " + name);
}

namespace {

struct Item {
    const Statement* stmt;
    std::size_t pos;
};

class Runner {
public:
    Runner(const MachineParams& params)
        : params_(params),
          deadline_(std::chrono::steady_clock::now() + std::chrono::milliseconds(params.max_millis)) {}

    ExecOutcome run(const std::vector<Item>& items, std::size_t k, Env env) {
        for (; k < items.size(); ++k) {
            if (std::chrono::steady_clock::now() > deadline_) return {ExecOutcome::Kind::Timeout, items[k].pos, "time limit exceeded", {}};
            const Statement& s = *items[k].stmt;
            std::size_t pos = items[k].pos;
            bool sugar = s.is_atomic() && is_nonatomic_sugar(s.atomic().name);
            Statement expanded = sugar ? expand_nonatomic(s) : s;
            if (expanded.is_disjunction()) return run_disjunction(items, k, expanded, sugar, env);
            const Atomic& a = expanded.atomic();
            std::vector<Value> in;
            in.reserve(a.inputs.size());
            for (const auto& t : a.inputs) {
                auto v = evaluate(t, env);
                if (!v) return {ExecOutcome::Kind::TypeViolation, pos, "unbound input " + render_term(t), {}};
                in.push_back(std::move(*v));
            }
            AtomicResult r = exec_atomic(a.name, in, params_);
            if (!r.ok) return {ExecOutcome::Kind::TypeViolation, pos, a.name + ": " + r.detail, {}};
            if (r.outputs.size() != a.outputs.size())
                return {ExecOutcome::Kind::TypeViolation, pos, a.name + ": wrong number of outputs", {}};
            for (std::size_t i = 0; i < a.outputs.size(); ++i) {
                if (!env.emplace(a.outputs[i], r.outputs[i]).second)
                    throw std::logic_error("variable '" + a.outputs[i] + "' bound twice");
            }
        }
        return {ExecOutcome::Kind::Ok, 0, {}, std::move(env)};
    }

private:
    ExecOutcome run_disjunction(const std::vector<Item>& items, std::size_t k, const Statement& d, bool sugar,
                                const Env& env) {
        std::size_t pos = items[k].pos;
        std::optional<ExecOutcome> suffix_failure;
        std::string detail;
        for (const auto& operand : d.disjunction().operands) {
            std::vector<Item> next;
            for (const auto& s : operand.stmts) next.push_back({&s, pos});
            next.insert(next.end(), items.begin() + static_cast<long>(k) + 1, items.end());
            ExecOutcome r = run(next, 0, env);
            if (r.ok() || r.kind == ExecOutcome::Kind::Timeout) return r;
            if (r.at > pos) {
                if (!suffix_failure) suffix_failure = r;
            } else {
                if (!detail.empty()) detail += "; ";
                detail += r.detail;
            }
        }
        if (suffix_failure) return *suffix_failure;
        return {sugar ? ExecOutcome::Kind::TypeViolation : ExecOutcome::Kind::DisjunctionViolation, pos,
                "no operand succeeds (" + detail + ")", {}};
    }

    std::optional<Value> evaluate(const Term& t, const Env& env) const {
        switch (t.kind()) {
        case Term::Kind::Var: {
            auto it = env.find(t.name());
            if (it == env.end()) return std::nullopt;
            return it->second;
        }
        case Term::Kind::Int: return Value::integer(t.value(), params_);
        case Term::Kind::Empty: return Value::program(Program{});
        case Term::Kind::Prog: return Value::program(t.program());
        }
        return std::nullopt;
    }

    const MachineParams& params_;
    std::chrono::steady_clock::time_point deadline_;
};

}  // namespace

ExecOutcome exec_program(const Program& p, const Env& env, const MachineParams& params) {
    MainIO io = main_io(p);
    for (const auto& x : io.inputs)
        if (x.is_var() && !env.count(x.name()))
            throw std::invalid_argument("no binding for input variable '" + x.name() + "'");
    for (const auto& y : io.outputs)
        if (env.count(y)) throw std::invalid_argument("output variable '" + y + "' is already bound");
    std::vector<Item> items;
    for (std::size_t i = 0; i < p.size(); ++i) items.push_back({&p.stmts[i], i + 1});
    ExecOutcome r = Runner(params).run(items, 0, env);
    if (r.ok()) {
        Env outs;
        for (const auto& y : io.outputs) {
            auto it = r.outputs.find(y);
            if (it != r.outputs.end()) outs.emplace(y, it->second);
        }
        r.outputs = std::move(outs);
    }
    return r;
}

OracleReport cpe_oracle(const Program& premise, const Program& conclusion, Domain domain,
                        const MachineParams& params, std::size_t max_points, std::size_t keep) {
    if (domain.lo > domain.hi) throw std::invalid_argument("empty domain");
    if (domain.lo < -params.max_int || domain.hi > params.max_int)
        throw std::invalid_argument("domain exceeds the integer range");
    Program extension = concat(premise, conclusion, params);

    OracleReport report;
    auto add_vars = [&](const Program& p) {
        for (const auto& t : main_io(p).inputs)
            if (t.is_var() && std::find(report.variables.begin(), report.variables.end(), t.name()) == report.variables.end())
                report.variables.push_back(t.name());
    };
    add_vars(premise);
    add_vars(extension);

    const std::size_t width = static_cast<std::size_t>(domain.hi - domain.lo + 1);
    std::size_t total = 1;
    for (std::size_t i = 0; i < report.variables.size(); ++i) {
        if (total > max_points / width)
            throw DomainTooLarge("assignment grid exceeds " + std::to_string(max_points) + " points");
        total *= width;
    }

    std::vector<std::int64_t> point(report.variables.size(), domain.lo);
    for (std::size_t n = 0; n < total; ++n) {
        Env env;
        for (std::size_t i = 0; i < point.size(); ++i) env.emplace(report.variables[i], Value::integer(point[i], params));
        ++report.points;
        ExecOutcome pr = exec_program(premise, env, params);
        if (pr.kind == ExecOutcome::Kind::Timeout) {
            ++report.timeouts;
        } else if (pr.ok()) {
            ++report.premise_computable;
            ExecOutcome er = exec_program(extension, env, params);
            if (er.kind == ExecOutcome::Kind::Timeout) {
                ++report.timeouts;
            } else if (!er.ok()) {
                ++report.counterexample_count;
                if (report.counterexamples.size() < keep) report.counterexamples.push_back(env);
            }
        }
        for (std::size_t i = point.size(); i-- > 0;) {
            if (point[i] < domain.hi) {
                ++point[i];
                break;
            }
            point[i] = domain.lo;
        }
    }
    return report;
}

}  // namespace vpc
