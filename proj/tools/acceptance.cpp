// One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

#include "../tests/gen.hpp"
#include "../tests/support.hpp"

#include "vpc/exec.hpp"
#include "vpc/service.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>

using namespace vpc;
using namespace vpc::testing;

namespace {

constexpr double kCorpusSeconds = 10.0;
constexpr double kOracleSeconds = 60.0;
constexpr Domain kOracleDomain{-10, 10};
constexpr std::int64_t kExecN = 12;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail.clear();
        if (!detail.empty()) detail += "; ";
        detail += why;
        pass = false;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

Outcome golden_corpus() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    Registry reg = seed();
    std::size_t n = 0;
    for (const auto& id : fixture_order()) {
        auto r = check_proof(fixture(id), reg, {}, {}, "tests/fixtures/" + id + ".proof");
        if (!r.ok()) {
            o.fail(id + ": " + r.describe());
            continue;
        }
        reg.add(*r.entry);
        ++n;
    }
    double t = seconds_since(t0);
    if (n != 29) o.fail(std::to_string(n) + "/29 listings checked");
    if (t >= kCorpusSeconds) o.fail("took " + fmt(t));
    if (o.pass) o.detail = "29/29 listings exact in " + fmt(t) + " (limit " + fmt(kCorpusSeconds) + ")";
    return o;
}

Outcome option_completeness() {
    Outcome o;
    Registry reg = seed();
    std::size_t total = 0, found = 0;
    for (const auto& id : fixture_order()) {
        ProofScript s = fixture(id);
        std::size_t derived = 0;
        for (const auto& l : s.lines)
            if (!l.connections.empty()) ++derived;
        total += derived;
        Replay r = replay(s, reg);
        if (!r.failures.empty()) {
            o.fail(id + " " + r.failures.front());
            std::size_t done = r.d.lines.size() - r.d.base_count;
            found += std::min(done, derived);
        } else {
            found += derived;
        }
        reg.add(*check_proof(s, reg).entry);
    }
    if (found != total) o.fail(std::to_string(found) + "/" + std::to_string(total) + " lines");
    if (o.pass) o.detail = std::to_string(found) + "/" + std::to_string(total) + " derived lines offered as options";
    return o;
}

Outcome falsity_workflow() {
    Outcome o;
    for (const char* id : {"L8", "L10"}) {
        Registry reg = registry_before(id);
        ProofScript s = fixture(id);
        Replay r = replay(s, reg);
        if (!r.failures.empty()) {
            o.fail(std::string(id) + " " + r.failures.front());
            continue;
        }
        const DerivLine& last = r.d.lines.back();
        if (r.d.status != DerivStatus::ConcludedFalse || last.statement || last.connections != s.lines.back().connections ||
            last.connections.front().entry != "A33") {
            o.fail(std::string(id) + ": terminal line differs");
            continue;
        }
        Extraction x = extract_theorem(r.d, id, EntryKind::Lemma, reg);
        const auto* f = std::get_if<FalseEntry>(&x.entry);
        if (!f || f->program != s.header.premise) o.fail(std::string(id) + ": extracted falsity program differs");
        if (render_proof(to_script(r.d, header_for(x.entry))) != render_proof(s))
            o.fail(std::string(id) + ": listing differs");
    }
    if (o.pass) o.detail = "L8, L10 end in False via A33; falsity entries match their headers";
    return o;
}

Outcome split_contract() {
    Outcome o;
    for (const char* id : {"T18", "T19", "T20", "T21", "T22", "T23", "T24", "T25"}) {
        Registry reg = registry_before(id);
        ProofScript s = fixture(id);
        Replay r = replay(s, reg);
        if (!r.failures.empty()) {
            o.fail(std::string(id) + " " + r.failures.front());
            continue;
        }
        if (render_proof(to_script(r.d, s.header)) != render_proof(s)) o.fail(std::string(id) + ": listing differs");
    }
    Registry reg = registry_before("T18");
    Replay t18 = replay(fixture("T18"), reg);
    std::string line3 = t18.d.lines.size() >= 3 ? render_connection(t18.d.lines[2].connections[0]) +
                                                      render_connection(t18.d.lines[2].connections[1])
                                                : "";
    if (line3 != "[L2,1,2][L1,1,2]") o.fail("T18 line 3 connections: " + line3);
    if (o.pass) o.detail = "T18-T25 reproduced exactly; T18 line 3 " + line3;
    return o;
}

Outcome soundness_oracle() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    Registry reg = seed();
    std::size_t entries = 0;
    auto run = [&](const Entry& e) {
        auto r = oracle_entry(e, kOracleDomain);
        if (!r) return;
        ++entries;
        if (!oracle_passes(e, *r)) o.fail(entry_id(e) + ": " + std::to_string(r->counterexample_count) + " counterexamples");
    };
    for (const auto& e : reg.entries()) {
        const std::string& id = entry_id(e);
        if (id.size() < 2 || id[0] != 'A') continue;
        if (std::holds_alternative<SchemaEntry>(e)) continue;
        int n = std::atoi(id.c_str() + 1);
        if (n >= 5 && n <= 37) run(e);
    }
    std::size_t axioms = entries;
    for (const auto& id : fixture_order()) {
        auto r = check_proof(fixture(id), reg);
        if (!r.ok()) {
            o.fail(id + " does not check");
            continue;
        }
        run(*r.entry);
        reg.add(*r.entry);
    }
    OracleReport lt = cpe_oracle(prog("[Lt([a,a],[])]"), {}, kOracleDomain);
    if (lt.premise_computable != 0) o.fail("Lt([a,a],[]) computable at " + std::to_string(lt.premise_computable) + " points");
    double t = seconds_since(t0);
    if (t >= kOracleSeconds) o.fail("took " + fmt(t));
    if (o.pass)
        o.detail = std::to_string(axioms) + " axioms + " + std::to_string(entries - axioms) +
                   " theorems sound on [-10,10]; Lt([a,a],[]) never computable; " + fmt(t) + " (limit " +
                   fmt(kOracleSeconds) + ")";
    return o;
}

Outcome execution_semantics() {
    Outcome o;
    MachineParams p;
    p.max_int = kExecN;
    auto run = [&](const char* text, const Env& env) { return exec_program(prog(text), env, p); };
    std::size_t cases = 0;
    for (std::int64_t a = -kExecN; a <= kExecN; ++a) {
        for (std::int64_t b = -kExecN; b <= kExecN; ++b) {
            Env env{{"a", Value::integer(a, p)}, {"b", Value::integer(b, p)}};
            auto bad = [&](const char* what) {
                o.fail(std::string(what) + " at a=" + std::to_string(a) + " b=" + std::to_string(b));
            };
            if (run("[Neq([a,b],[])]", env).ok() != (a != b)) bad("Neq");
            if (run("[Le([a,b],[])]", env).ok() != (a <= b)) bad("Le");
            ExecOutcome s = run("[Add([a,b],[c])]", env);
            if (s.ok() != (std::llabs(a + b) <= kExecN) || (s.ok() && s.outputs.at("c").as_int() != a + b)) bad("Add");
            ExecOutcome m = run("[Mult([a,b],[c])]", env);
            if (m.ok() != (std::llabs(a * b) <= kExecN) || (m.ok() && m.outputs.at("c").as_int() != a * b)) bad("Mult");
            ExecOutcome d = run("[Div([a,b],[c])]", env);
            if (d.ok() != (b != 0 && a % b == 0) || (d.ok() && d.outputs.at("c").as_int() * b != a)) bad("Div");
            cases += 5;
        }
        ExecOutcome abs = run("[Abs([a,0,-1],[y])]", {{"a", Value::integer(a, p)}});
        if (!abs.ok() || abs.outputs.at("y").as_int() != std::llabs(a)) o.fail("Abs at " + std::to_string(a));
        ++cases;
    }
    if (o.pass) o.detail = std::to_string(cases) + " brute-force cases on [-12,12] with N=12";
    return o;
}

Outcome property_suites() {
    Outcome o;
    // equivalence laws
    Gen g(7);
    std::vector<Program> pool;
    for (int i = 0; i < 120; ++i) {
        Program p = g.program_valid(4);
        pool.push_back(p);
        for (std::size_t k = 0; k < p.size(); ++k)
            if (p.stmts[k].is_disjunction()) pool.push_back(Program{{Statement(Disjunction{split_disjunction(p, k)})}});
    }
    std::size_t triples = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!equiv(pool[i], pool[i])) o.fail("equiv not reflexive");
        for (std::size_t j = 0; j < pool.size(); ++j) {
            bool ij = equiv(pool[i], pool[j]);
            if (ij != equiv(pool[j], pool[i])) o.fail("equiv not symmetric");
            if (!ij || i == j) continue;
            for (std::size_t k = 0; k < pool.size(); k += 5)
                if (equiv(pool[j], pool[k])) {
                    ++triples;
                    if (!equiv(pool[i], pool[k])) o.fail("equiv not transitive");
                }
        }
    }
    // I/O equivalence asymmetry
    try {
        io_equivalent(prog("[Add([a,a],[c])]"), prog("[Add([a,b],[d])]"));
    } catch (const MatchFailure&) {
        o.fail("Add([a,a],[c]) rejected against Add([a,b],[d])");
    }
    try {
        io_equivalent(prog("[Add([a,b],[d])]"), prog("[Add([a,a],[c])]"));
        o.fail("Add([a,b],[d]) accepted against Add([a,a],[c])");
    } catch (const MatchFailure&) {
    }
    // parser round-trip
    Gen t(2024);
    std::size_t round_trips = 0;
    for (int i = 0; i < 1000; ++i) {
        Statement s = t.statement_any();
        std::string text = render_statement(s);
        try {
            if (parse_statement(text) != s) o.fail("round-trip changed " + text);
            else ++round_trips;
        } catch (const ParseError&) {
            o.fail("cannot reparse " + text);
        }
    }
    // retract and purge on random dependency DAGs
    std::mt19937 rng(5);
    std::size_t dags = 0;
    for (int round = 0; round < 100; ++round) {
        Registry reg = seed();
        std::map<std::string, std::vector<std::string>> deps;
        std::vector<std::string> ids;
        for (int i = 0; i < 12; ++i) {
            CpeEntry e;
            e.id = "R" + std::to_string(i);
            e.kind = EntryKind::Theorem;
            e.proof = "acceptance";
            e.premise = rng() % 3 == 0 ? prog("[Lt([x,x],[]), Int([y],[])]") : prog("[Int([x],[])]");
            e.conclusion = prog("[Eq([x,x],[])]");
            for (const auto& prior : ids)
                if (rng() % 4 == 0) e.deps.push_back(prior);
            deps[e.id] = e.deps;
            reg.add(e);
            ids.push_back(e.id);
        }
        auto closure = [&](std::set<std::string> seedset) {
            for (bool grew = true; grew;) {
                grew = false;
                for (const auto& [id, ds] : deps)
                    for (const auto& d : ds)
                        if (!seedset.count(id) && seedset.count(d)) grew = seedset.insert(id).second;
            }
            return seedset;
        };
        Registry r1 = reg;
        std::string target = ids[rng() % ids.size()];
        auto removed = r1.retract(target);
        if (std::set<std::string>(removed.begin(), removed.end()) != closure({target})) o.fail("retract closure");
        Registry r2 = reg;
        std::set<std::string> doomed;
        for (const auto& id : ids)
            if (contains_instance(std::get<CpeEntry>(reg.at(id)).premise, prog("[Lt([a,a],[])]"))) doomed.insert(id);
        auto purged = r2.purge_by_falsity("A33");
        if (std::set<std::string>(purged.begin(), purged.end()) != closure(doomed)) o.fail("purge closure");
        for (const auto* r : {&r1, &r2})
            for (const auto& e : r->entries())
                for (const auto& d : entry_deps(e))
                    if (!r->contains(d)) o.fail("dangling dependency " + d);
        ++dags;
    }
    if (o.pass)
        o.detail = "equivalence laws on " + std::to_string(pool.size()) + " programs (" + std::to_string(triples) +
                   " transitive triples); io asymmetry; " + std::to_string(round_trips) + " round-trips; " +
                   std::to_string(dags) + " random DAGs";
    return o;
}

Outcome consistency_maintenance() {
    Outcome o;
    Registry reg = seed();
    CpeEntry bogus;
    bogus.id = "BOGUS";
    bogus.premise = prog("[Int([a],[])]");
    bogus.conclusion = prog("[Lt([a,a],[])]");
    reg.add(bogus);
    CpeEntry user;
    user.id = "USES1";
    user.kind = EntryKind::Theorem;
    user.premise = prog("[Int([a],[]), Eq([a,a],[])]");
    user.conclusion = prog("[Lt([a,a],[])]");
    user.deps = {"BOGUS"};
    user.proof = "acceptance";
    reg.add(user);
    CpeEntry user2 = user;
    user2.id = "USES2";
    user2.deps = {"USES1", "A5"};
    reg.add(user2);

    auto r = oracle_entry(reg.at("BOGUS"), kOracleDomain);
    std::size_t found = r ? r->counterexample_count : 0;
    if (found == 0) o.fail("oracle found no counterexample");
    auto removed = reg.retract("BOGUS");
    if (std::set<std::string>(removed.begin(), removed.end()) != std::set<std::string>{"BOGUS", "USES1", "USES2"})
        o.fail("retract removed the wrong entries");
    if (!(reg == seed())) o.fail("registry differs from the seed after retraction");
    if (o.pass)
        o.detail = "oracle: " + std::to_string(found) + " counterexamples; retract removed " +
                   std::to_string(removed.size()) + " entries";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"golden-corpus", golden_corpus},
        {"option-completeness", option_completeness},
        {"falsity-workflow", falsity_workflow},
        {"split-contract", split_contract},
        {"soundness-oracle", soundness_oracle},
        {"execution-semantics", execution_semantics},
        {"property-suites", property_suites},
        {"consistency-maintenance", consistency_maintenance},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
