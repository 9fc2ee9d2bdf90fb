#include <doctest.h>

#include "gen.hpp"
#include "support.hpp"

#include <algorithm>

using namespace vpc;
using namespace vpc::testing;

namespace {

const DerivOption* option(const std::vector<DerivOption>& opts, const std::string& conn, const std::string& text = {}) {
    for (const auto& o : opts)
        if (render_connection(o.connection) == conn && (text.empty() || o.text() == text)) return &o;
    return nullptr;
}

void pick(Derivation& d, const Registry& reg, const std::string& conn, const std::string& text = {}) {
    auto opts = generate_options(d, reg);
    const DerivOption* o = option(opts, conn, text);
    REQUIRE_MESSAGE(o, "no option " << conn << " " << text << "\n" << render_options(opts));
    apply_option(d, *o);
}

std::string last(const Derivation& d) {
    const auto& l = d.lines.back();
    return render_proof_line(l.label, l.statement, l.split_mark, l.connections);
}

Registry only(const Registry& from, std::initializer_list<const char*> ids) {
    Registry r;
    for (const char* id : ids) r.add(from.at(id));
    return r;
}

}  // namespace

TEST_CASE("options from an empty premise list") {
    Registry reg = only(seed(), {"A32"});
    Derivation d = new_derivation({});
    auto opts = generate_options(d, reg);
    REQUIRE(opts.size() == 1);
    CHECK(render_connection(opts[0].connection) == "[A32]");
    CHECK(opts[0].text() == "Lt([0,1],[])");
    apply_option(d, opts[0]);
    CHECK(generate_options(d, reg).empty());
}

TEST_CASE("options include every I/O-type instance") {
    Registry reg = registry_before("T17");
    Derivation d = new_derivation({});
    pick(d, reg, "[A32]");
    auto opts = generate_options(d, reg);
    CHECK(option(opts, "[A1,1]", "Int([0],[])"));
    CHECK(option(opts, "[A1,1]", "Int([1],[])"));
    for (std::size_t i = 0; i < opts.size(); ++i)
        for (std::size_t j = i + 1; j < opts.size(); ++j)
            CHECK_FALSE((opts[i].text() == opts[j].text() && opts[i].connection == opts[j].connection));
    std::string table = render_options(opts);
    CHECK(std::count(table.begin(), table.end(), '\n') == static_cast<long>(opts.size()));
}

TEST_CASE("a falsity template shows up as an option and ends the derivation") {
    Registry reg = registry_before("L8");
    Derivation d = new_derivation(prog("[Lt([a,0],[]), Mult([-1,a],[b]), Eq([b,0],[])]"));
    pick(d, reg, "[T16,1,2]", "Lt([0,b],[])");
    pick(d, reg, "[L3,4,3]", "Lt([0,0],[])");
    auto opts = generate_options(d, reg);
    const DerivOption* f = option(opts, "[A33,5]");
    REQUIRE(f);
    CHECK(f->falsity());
    CHECK(f->text() == "False");
    apply_option(d, *f);
    CHECK(d.status == DerivStatus::ConcludedFalse);
    CHECK(last(d) == "  6 False               [A33,5]");
    CHECK(generate_options(d, reg).empty());
    CHECK_THROWS_AS(apply_option(d, opts[0]), EngineError);

    Extraction x = extract_theorem(d, "L8", EntryKind::Lemma, reg);
    const auto& e = std::get<FalseEntry>(x.entry);
    CHECK(e.kind == EntryKind::Lemma);
    CHECK(e.program == fixture("L8").header.premise);
    CHECK(x.used_premises == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("stale options are refused") {
    Registry reg = seed();
    Derivation d = new_derivation(prog("[Eq([a,b],[]), Eq([b,c],[])]"));
    auto opts = generate_options(d, reg);
    REQUIRE(opts.size() > 2);
    std::string h = opts[1].hash();
    CHECK(h == generate_options(d, reg)[1].hash());
    apply_option(d, opts[0]);
    CHECK_THROWS_AS(apply_option(d, opts[1]), StaleOption);
    for (const auto& o : generate_options(d, reg)) CHECK(o.hash() != h);
}

TEST_CASE("split and contract errors") {
    Registry reg = seed();
    Derivation d = new_derivation(prog("[Int([b],[]), Lt([a,b],[]) | Eq([a,b],[])]"));
    CHECK_THROWS_AS(split(d, 1), EngineError);
    CHECK_THROWS_AS(split(d, 0), EngineError);
    CHECK_THROWS_AS(split(d, 9), EngineError);
    CHECK_THROWS_AS(contract(d), EngineError);
    split(d, 2);
    CHECK_THROWS_AS(split(d, 2), EngineError);
    CHECK(generate_options(d, reg).empty());
    REQUIRE(d.branches.size() == 2);
    CHECK(render_program(d.branches[0].program()) == "[Int([b],[]),Lt([a,b],[])]");
    CHECK(render_program(d.branches[1].program()) == "[Int([b],[]),Eq([a,b],[])]");
    CHECK_THROWS_AS(contract(d), EngineError);
    CHECK(&focus(d, {1}) == &d.branches[1]);
    CHECK_THROWS_AS(focus(d, {2}), EngineError);
    CHECK_THROWS_AS(focus(d, {0, 0}), EngineError);
}

TEST_CASE("contraction with a common conclusion") {
    Registry reg = registry_before("T18");
    Derivation d = new_derivation(prog("[Neq([a,0],[]), Mult([a,a],[b])]"));
    split(d, 1);
    pick(d.branches[0], reg, "[L2,1,2]", "Lt([0,b],[])");
    pick(d.branches[1], reg, "[L1,1,2]", "Lt([0,b],[])");
    ContractResult r = contract(d);
    CHECK(r.which == ContractResult::Case::Common);
    CHECK(last(d) == "  3 Lt([0,b],[])        [L2,1,2][L1,1,2]");
    CHECK(d.lines[0].split_mark);
    CHECK_FALSE(d.has_split());

    Extraction x = extract_theorem(d, "T18", EntryKind::Theorem, reg);
    CHECK(std::get<CpeEntry>(x.entry).premise == fixture("T18").header.premise);
    CHECK(std::get<CpeEntry>(x.entry).conclusion == fixture("T18").header.conclusion);
}

TEST_CASE("contraction with some branches false") {
    Registry reg = seed();
    Derivation d = new_derivation(prog("[Int([b],[]), Lt([a,a],[]) | Eq([a,b],[])]"));
    split(d, 2);
    pick(d.branches[0], reg, "[A33,2]");
    CHECK(d.branches[0].status == DerivStatus::ConcludedFalse);
    pick(d.branches[1], reg, "[A6,2]", "Eq([b,a],[])");
    ContractResult r = contract(d);
    CHECK(r.which == ContractResult::Case::CommonWithFalse);
    CHECK(last(d) == "  3 Eq([b,a],[])        [A33,2][A6,2]");
    CHECK(d.open());
}

TEST_CASE("contraction with every branch false") {
    Registry reg = seed();
    Derivation d = new_derivation(prog("[Lt([a,a],[]) | Lt([b,b],[])]"));
    split(d, 1);
    pick(d.branches[0], reg, "[A33,1]");
    pick(d.branches[1], reg, "[A33,1]");
    ContractResult r = contract(d);
    CHECK(r.which == ContractResult::Case::AllFalse);
    CHECK(last(d) == "  2 False               [A33,1][A33,1]");
    CHECK(d.status == DerivStatus::ConcludedFalse);
    Extraction x = extract_theorem(d, "Z1", EntryKind::Theorem, reg);
    CHECK(render_program(std::get<FalseEntry>(x.entry).program) == "[Lt([a,a],[]) | Lt([b,b],[])]");
}

TEST_CASE("nested splits contract inside out") {
    Registry reg = seed();
    Derivation d = new_derivation(prog("[Lt([a,a],[]) | Eq([a,b],[]), Lt([c,c],[]) | Eq([b,c],[])]"));
    split(d, 1);
    pick(d.branches[0], reg, "[A33,1]");
    Derivation& second = d.branches[1];
    split(second, 2);
    CHECK_THROWS_AS(contract(d), EngineError);
    pick(second.branches[0], reg, "[A33,2]");
    pick(second.branches[1], reg, "[A6,2]", "Eq([c,b],[])");
    contract(second);
    CHECK(last(second) == "  3 Eq([c,b],[])        [A33,2][A6,2]");
    ContractResult r = contract(d);
    CHECK(r.which == ContractResult::Case::CommonWithFalse);
    CHECK(last(d) == "  3 Eq([c,b],[])        [A33,1][A33,2][A6,2]");
}

TEST_CASE("extraction of theorems from replays") {
    for (const char* id : {"T1", "T17", "T19"}) {
        CAPTURE(id);
        Registry reg = registry_before(id);
        ProofScript s = fixture(id);
        Replay r = replay(s, reg);
        REQUIRE(r.failures.empty());
        Extraction x = extract_theorem(r.d, id, EntryKind::Theorem, reg);
        const auto& e = std::get<CpeEntry>(x.entry);
        CHECK(e.premise == s.header.premise);
        CHECK(e.conclusion == s.header.conclusion);
        CHECK(render_proof(to_script(r.d, s.header)) == render_proof(s));
    }
}

TEST_CASE("checking a corrupted listing points at the bad line") {
    Registry reg = seed();
    ProofScript s = fixture("T1");
    s.lines[4].connections[0].labels = {1, 4, 4};
    CheckReport rep = check_proof(s, reg);
    CHECK_FALSE(rep.ok());
    auto bad = std::find_if(rep.lines.begin(), rep.lines.end(), [](const LineCheck& l) { return !l.ok; });
    REQUIRE(bad != rep.lines.end());
    CHECK(bad->label == 5);
    CHECK(rep.describe().find("5") != std::string::npos);
    CHECK_FALSE(rep.entry);

    ProofScript wrong_header = fixture("T1");
    wrong_header.header.conclusion = prog("[Eq([c,a],[])]");
    CheckReport h = check_proof(wrong_header, reg);
    CHECK_FALSE(h.ok());
    CHECK_FALSE(h.header_ok);

    ProofScript unknown = fixture("T1");
    unknown.lines[4].connections[0].entry = "A99";
    CHECK_FALSE(check_proof(unknown, reg).ok());
}

TEST_CASE("checked entries re-check once registered") {
    Registry reg = seed();
    CheckReport first = check_proof(fixture("T1"), reg, {}, {}, "T1.proof");
    REQUIRE(first.ok());
    reg.add(*first.entry);
    CheckReport again = check_proof(fixture("T1"), reg, {}, {}, "T1.proof");
    REQUIRE(again.ok());
    CHECK(*again.entry == *first.entry);
    CHECK(std::get<CpeEntry>(*first.entry).proof == "T1.proof");
}

TEST_CASE("strict checking runs the oracle on each step") {
    CheckOptions strict;
    strict.strict = true;
    strict.domain = {-4, 4};
    for (const char* id : {"T1", "T17", "L10", "T18"}) {
        CAPTURE(id);
        CheckReport rep = check_proof(fixture(id), registry_before(id), strict);
        CHECK_MESSAGE(rep.ok(), rep.describe());
    }
}

TEST_CASE("saturation") {
    Registry reg = registry_before("L10");
    Program l10 = fixture("L10").header.premise;
    Derivation d = new_derivation(l10);
    CHECK_THROWS_AS(saturate(d, reg, 0), std::invalid_argument);
    Derivation s = saturate(d, reg, 4);
    CHECK(s.status == DerivStatus::ConcludedFalse);
    Derivation shallow = saturate(d, reg, 1);
    CHECK(shallow.open());
    CHECK(shallow.lines.size() > d.lines.size());

    Derivation fix = saturate(d, Registry{}, 3);
    CHECK(fix.lines.size() == d.lines.size());
}

TEST_CASE("minimality of false programs") {
    Registry reg = seed();
    Derivation d = new_derivation(prog("[Eq([a,b],[]), Lt([a,a],[])]"));
    pick(d, reg, "[A3,2,1,1]", "Lt([b,b],[])");
    pick(d, reg, "[A33,3]");
    try {
        extract_theorem(d, "Z1", EntryKind::Theorem, reg);
        FAIL("expected a minimality failure");
    } catch (const MinimalityFailure& e) {
        CHECK(render_program(e.smaller()) == "[Lt([a,a],[])]");
    }
}

TEST_CASE("property: adding premises never loses falsity") {
    Registry reg = registry_before("L10");
    Gen g(51);
    Program base = fixture("L10").header.premise;
    for (int i = 0; i < 12; ++i) {
        Program p = base;
        Statement extra = g.coin() ? stmt("Int([c],[])") : stmt("Lt([0,c],[])");
        p.stmts.insert(p.stmts.begin() + static_cast<long>(g.below(p.size() + 1)), extra);
        Derivation s = saturate(new_derivation(p), reg, 4);
        CAPTURE(render_program(p));
        CHECK(s.status == DerivStatus::ConcludedFalse);
    }
}

TEST_CASE("property: branch order does not change a contraction") {
    for (const char* id : {"T18", "T19", "T20", "T21", "T22", "T23", "T24", "T25"}) {
        CAPTURE(id);
        Registry reg = registry_before(id);
        ProofScript s = fixture(id);
        Replay forward = replay(s, reg);
        REQUIRE(forward.failures.empty());

        // same listing, branches worked last-to-first
        std::size_t n = 0;
        Program premises;
        while (n < s.lines.size() && s.lines[n].connections.empty()) premises.stmts.push_back(*s.lines[n++].statement);
        Derivation d = new_derivation(premises);
        for (std::size_t k = n; k < s.lines.size(); ++k) {
            const ProofLine& l = s.lines[k];
            if (l.connections.size() == 1) {
                bool exact = false;
                auto opts = generate_options(d, reg);
                const DerivOption* o = find_option(opts, l.connections[0], l.statement, d, exact);
                REQUIRE(o);
                apply_option(d, *o);
                continue;
            }
            std::size_t sl = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (s.lines[i].split_mark) sl = s.lines[i].label;
            split(d, sl);
            for (std::size_t i = d.branches.size(); i-- > 0;) {
                Derivation& b = d.branches[i];
                const Entry* e = reg.find(l.connections[i].entry);
                bool is_false = e && std::holds_alternative<FalseEntry>(*e);
                bool exact = false;
                auto opts = generate_options(b, reg);
                const DerivOption* o =
                    find_option(opts, l.connections[i], is_false ? std::nullopt : l.statement, b, exact);
                REQUIRE(o);
                apply_option(b, *o);
            }
            contract(d);
        }
        CHECK(fingerprint(d) == fingerprint(forward.d));
    }
}
