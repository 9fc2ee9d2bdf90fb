#pragma once

// Random generators for property tests.

#include "vpc/model.hpp"

#include <random>
#include <string>
#include <vector>

namespace vpc::testing {

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

    std::string var() {
        static const std::vector<std::string> names{"a", "b", "c", "d", "x", "y", "p", "q", "u1", "v2"};
        return pick(names);
    }

    Term term(int depth = 2) {
        switch (below(depth > 0 ? 6 : 5)) {
        case 0: return Term::integer(static_cast<int>(below(3)) - 1);
        case 1: return Term::empty();
        case 5: return Term::program(program_any(depth - 1, 1));   // an empty literal is ep
        default: return Term::var(var());
        }
    }

    /// Syntactically well-formed, not necessarily valid.
    Statement statement_any(int depth = 2) {
        static const std::vector<std::string> names{"Add", "Mult", "Lt", "Eq", "Int", "Conc", "Equiv", "Prog", "Abs", "Neq"};
        if (depth > 0 && coin(0.2)) {
            Disjunction d;
            std::size_t n = 2 + below(2);
            for (std::size_t i = 0; i < n; ++i) d.operands.push_back(program_any(depth - 1, 1));
            return d;
        }
        Atomic a{pick(names), {}, {}};
        std::size_t ni = below(4), no = below(3);
        for (std::size_t i = 0; i < ni; ++i) a.inputs.push_back(term(depth));
        for (std::size_t i = 0; i < no; ++i) a.outputs.push_back(var());
        return a;
    }

    Program program_any(int depth = 2, std::size_t min = 0) {
        Program p;
        std::size_t n = min + below(3);
        for (std::size_t i = 0; i < n; ++i) p.stmts.push_back(statement_any(depth));
        return p;
    }

    /// A valid integer-level program of at most `max` statements, possibly
    /// with two- or three-operand disjunctions.
    Program program_valid(std::size_t max = 4) {
        for (;;) {
            Program p;
            std::vector<std::string> inputs{"a", "b", "c"};
            std::size_t n = 1 + below(max);
            for (std::size_t i = 0; i < n; ++i) {
                if (coin(0.25))
                    p.stmts.push_back(disjunction(inputs));
                else
                    p.stmts.push_back(atomic(inputs));
            }
            try {
                return validate_program(p);
            } catch (const ValidityError&) {
            }
        }
    }

private:
    Term in(const std::vector<std::string>& inputs) {
        if (coin(0.15)) return Term::integer(static_cast<int>(below(3)) - 1);
        return Term::var(pick(inputs));
    }

    std::string fresh() { return "o" + std::to_string(++counter_); }

    Atomic atomic(std::vector<std::string>& inputs) {
        static const std::vector<std::string> names{"Add", "Mult", "Lt", "Eq", "Int", "Aid"};
        const std::string& n = pick(names);
        if (n == "Int") return Atomic{n, {in(inputs)}, {}};
        if (n == "Lt" || n == "Eq") return Atomic{n, {in(inputs), in(inputs)}, {}};
        std::string y = fresh();
        Atomic a = n == "Aid" ? Atomic{n, {in(inputs)}, {y}} : Atomic{n, {in(inputs), in(inputs)}, {y}};
        inputs.push_back(y);
        return a;
    }

    Statement disjunction(std::vector<std::string>& inputs) {
        Disjunction d;
        std::size_t n = 2 + below(2);
        bool with_output = coin();
        std::string y = fresh();
        for (std::size_t i = 0; i < n; ++i) {
            Program op;
            op.stmts.push_back(Atomic{coin() ? "Lt" : "Eq", {in(inputs), in(inputs)}, {}});
            if (with_output) op.stmts.push_back(Atomic{coin() ? "Aid" : "Abs", {}, {y}});
            if (with_output) {
                auto& a = std::get<Atomic>(op.stmts.back().node);
                if (a.name == "Aid")
                    a.inputs = {in(inputs)};
                else
                    a = Atomic{"Mult", {in(inputs), in(inputs)}, {y}};
            }
            d.operands.push_back(std::move(op));
        }
        if (with_output) inputs.push_back(y);
        return d;
    }

    std::mt19937 rng_;
    std::size_t counter_ = 0;
};

}  // namespace vpc::testing
