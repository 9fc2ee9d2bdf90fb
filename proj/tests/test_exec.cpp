#include <doctest.h>

#include "gen.hpp"
#include "support.hpp"

#include "vpc/exec.hpp"

#include <cstdlib>

using namespace vpc;
using namespace vpc::testing;

namespace {

MachineParams small() {
    MachineParams p;
    p.max_int = 12;
    return p;
}

Value I(std::int64_t v, const MachineParams& p = {}) { return Value::integer(v, p); }

Env random_env(const Program& p, std::mt19937& rng, std::int64_t lo, std::int64_t hi, const MachineParams& params = {}) {
    Env env;
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    for (const auto& t : main_io(p).inputs)
        if (t.is_var()) env.emplace(t.name(), Value::integer(dist(rng), params));
    return env;
}

ExecOutcome run(const std::string& text, const Env& env, const MachineParams& params = {}) {
    return exec_program(prog(text), env, params);
}

}  // namespace

TEST_CASE("atomic programs") {
    CHECK(exec_atomic("Add", {I(2), I(3)}).outputs == std::vector<Value>{I(5)});
    CHECK(exec_atomic("Mult", {I(-1), I(4)}).outputs == std::vector<Value>{I(-4)});
    CHECK(exec_atomic("Div", {I(6), I(3)}).outputs == std::vector<Value>{I(2)});
    CHECK_FALSE(exec_atomic("Div", {I(7), I(2)}).ok);
    CHECK_FALSE(exec_atomic("Div", {I(7), I(0)}).ok);
    CHECK(exec_atomic("Lt", {I(1), I(2)}).ok);
    CHECK_FALSE(exec_atomic("Lt", {I(2), I(2)}).ok);
    CHECK(exec_atomic("Eq", {I(2), I(2)}).ok);
    CHECK(exec_atomic("Aid", {I(9)}).outputs == std::vector<Value>{I(9)});
    CHECK(exec_atomic("Int", {I(0)}).ok);
    CHECK_FALSE(exec_atomic("Int", {Value::program({})}).ok);
    CHECK(exec_atomic("Prog", {Value::program({})}).ok);
    CHECK_FALSE(exec_atomic("Prog", {I(0)}).ok);
    CHECK(exec_atomic("Equiv", {Value::program(prog("[Int([a],[]), Int([b],[])]")),
                                Value::program(prog("[Int([b],[]), Int([a],[])]"))})
              .ok);
    CHECK_FALSE(exec_atomic("Cpe", {Value::program({}), Value::program({})}).ok);
    CHECK_FALSE(exec_atomic("Nope", {}).ok);
    CHECK_THROWS_AS(I(13, small()), std::out_of_range);
}

TEST_CASE("exhaustive integer semantics at N=12") {
    const MachineParams p = small();
    for (std::int64_t a = -12; a <= 12; ++a)
        for (std::int64_t b = -12; b <= 12; ++b) {
            CAPTURE(a);
            CAPTURE(b);
            Env env{{"a", I(a, p)}, {"b", I(b, p)}};
            CHECK(run("[Neq([a,b],[])]", env, p).ok() == (a != b));
            CHECK(run("[Le([a,b],[])]", env, p).ok() == (a <= b));
            CHECK(run("[Lt([a,b],[])]", env, p).ok() == (a < b));
            CHECK(run("[Eq([a,b],[])]", env, p).ok() == (a == b));

            ExecOutcome sum = run("[Add([a,b],[c])]", env, p);
            CHECK(sum.ok() == (std::abs(a + b) <= 12));
            if (sum.ok()) CHECK(sum.outputs.at("c").as_int() == a + b);

            ExecOutcome prod = run("[Mult([a,b],[c])]", env, p);
            CHECK(prod.ok() == (std::abs(a * b) <= 12));
            if (prod.ok()) CHECK(prod.outputs.at("c").as_int() == a * b);

            ExecOutcome quot = run("[Div([a,b],[c])]", env, p);
            CHECK(quot.ok() == (b != 0 && a % b == 0));
            if (quot.ok()) CHECK(quot.outputs.at("c").as_int() * b == a);
        }
    for (std::int64_t x = -12; x <= 12; ++x) {
        ExecOutcome r = run("[Abs([x,0,-1],[y])]", {{"x", I(x, p)}}, p);
        REQUIRE(r.ok());
        CHECK(r.outputs.at("y").as_int() == std::abs(x));
    }
}

TEST_CASE("failure kinds and positions") {
    Env env{{"a", I(3)}};
    ExecOutcome r = run("[Int([a],[]), Lt([a,a],[])]", env);
    CHECK(r.kind == ExecOutcome::Kind::TypeViolation);
    CHECK(r.at == 2);
    CHECK(run("[Neq([a,a],[])]", env).kind == ExecOutcome::Kind::TypeViolation);
    CHECK(run("[Lt([a,a],[]) | Lt([a,0],[])]", env).kind == ExecOutcome::Kind::DisjunctionViolation);
    CHECK_THROWS_AS(run("[Lt([a,b],[])]", env), std::invalid_argument);

    // a later failure after a succeeding operand is the later statement's failure
    ExecOutcome late = run("[Lt([0,a],[]) | Eq([a,a],[]), Lt([a,0],[])]", env);
    CHECK(late.kind == ExecOutcome::Kind::TypeViolation);
    CHECK(late.at == 2);
}

TEST_CASE("disjunction falls through to a later operand") {
    Env env{{"a", I(1)}};
    ExecOutcome r = run("[[Lt([a,0],[]), Aid([0],[y])] | [Eq([a,a],[]), Aid([a],[y])], Lt([0,y],[])]", env);
    REQUIRE(r.ok());
    CHECK(r.outputs.at("y").as_int() == 1);
    // first operand succeeds locally but the suffix rejects its binding
    ExecOutcome s = run("[Aid([0],[y]) | Aid([a],[y]), Lt([0,y],[])]", env);
    REQUIRE(s.ok());
    CHECK(s.outputs.at("y").as_int() == 1);
}

TEST_CASE("property: a disjunction runs iff one of its split branches runs") {
    Gen g(21);
    std::mt19937 rng(21);
    const MachineParams p = small();
    int splits = 0;
    for (int i = 0; i < 600; ++i) {
        Program prg = g.program_valid(4);
        for (std::size_t k = 0; k < prg.size(); ++k) {
            if (!prg.stmts[k].is_disjunction()) continue;
            auto branches = split_disjunction(prg, k);
            for (int t = 0; t < 8; ++t) {
                Env env = random_env(prg, rng, -4, 4, p);
                ExecOutcome whole = exec_program(prg, env, p);
                CAPTURE(render_program(prg));
                CHECK(whole == exec_program(prg, env, p));
                std::optional<ExecOutcome> first;
                for (const auto& b : branches) {
                    ExecOutcome r = exec_program(b, env, p);
                    if (r.ok()) {
                        first = r;
                        break;
                    }
                }
                CHECK(whole.ok() == first.has_value());
                if (first) CHECK(whole.outputs == first->outputs);
                ++splits;
            }
        }
    }
    CHECK(splits > 500);
}

TEST_CASE("property: sugar and its expansion execute alike") {
    Gen g(22);
    std::mt19937 rng(22);
    const std::vector<std::string> sugar{"Neq([a,b],[])", "Le([a,b],[])", "Abs([a,0,-1],[y])", "Abs([a,b,c],[y])"};
    for (const auto& text : sugar) {
        Program s = prog("[" + text + "]");
        Program e{{expand_nonatomic(s.stmts[0])}};
        for (int t = 0; t < 200; ++t) {
            Env env = random_env(s, rng, -6, 6);
            ExecOutcome x = exec_program(s, env), y = exec_program(e, env);
            CHECK(x.ok() == y.ok());
            CHECK(x.outputs == y.outputs);
        }
    }
}

TEST_CASE("property: equivalent programs run alike") {
    Gen g(23);
    std::mt19937 rng(23);
    const MachineParams p = small();
    for (int i = 0; i < 400; ++i) {
        Program prg = g.program_valid(4);
        for (std::size_t k = 0; k < prg.size(); ++k) {
            if (!prg.stmts[k].is_disjunction()) continue;
            Program rejoined{{Statement(Disjunction{split_disjunction(prg, k)})}};
            Program permuted = prg;
            auto& ops = std::get<Disjunction>(permuted.stmts[k].node).operands;
            std::reverse(ops.begin(), ops.end());
            REQUIRE(equiv(prg, rejoined));
            REQUIRE(equiv(prg, permuted));
            for (int t = 0; t < 6; ++t) {
                Env env = random_env(prg, rng, -4, 4, p);
                bool ok = exec_program(prg, env, p).ok();
                CHECK(exec_program(rejoined, env, p).ok() == ok);
                CHECK(exec_program(permuted, env, p).ok() == ok);
            }
        }
    }
}

TEST_CASE("oracle") {
    OracleReport a13 = cpe_oracle(prog("[Int([a],[])]"), prog("[Add([a,0],[b]), Eq([a,b],[])]"), {-10, 10});
    CHECK(a13.points == 21);
    CHECK(a13.premise_computable == 21);
    CHECK(a13.sound());

    OracleReport lt = cpe_oracle(prog("[Lt([a,a],[])]"), {}, {-10, 10});
    CHECK(lt.premise_computable == 0);

    OracleReport square = cpe_oracle(prog("[Add([a,b],[c])]"), prog("[Mult([c,c],[d])]"), {-12, 12}, small());
    CHECK_FALSE(square.sound());
    CHECK(square.counterexample_count > 0);
    CHECK(square.counterexamples.size() <= 16);
    for (const auto& env : square.counterexamples) {
        std::int64_t c = env.at("a").as_int() + env.at("b").as_int();
        CHECK(c * c > 12);
    }

    CHECK_THROWS_AS(cpe_oracle(prog("[Add([a,b],[c]), Add([c,d],[e]), Add([e,x],[f]), Add([f,y],[g])]"), {},
                               {-100, 100}, {}, 1'000'000),
                    DomainTooLarge);
    CHECK_THROWS_AS(cpe_oracle(prog("[Int([a],[])]"), {}, {1, 0}), std::invalid_argument);
}
