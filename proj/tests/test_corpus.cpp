#include <doctest.h>

#include "support.hpp"

using namespace vpc;
using namespace vpc::testing;

TEST_CASE("seed registry loads") {
    Registry reg = seed();
    std::size_t cpe = 0, falsity = 0, schemas = 0, crules = 0, imported = 0;
    for (const auto& e : reg.entries()) {
        if (const auto* c = std::get_if<CpeEntry>(&e)) {
            if (c->kind == EntryKind::Axiom) ++cpe;
            if (c->kind == EntryKind::ConstructionRule) ++crules;
            if (c->imported && c->kind != EntryKind::ConstructionRule) ++imported;
        } else if (std::holds_alternative<FalseEntry>(e)) {
            ++falsity;
        } else {
            ++schemas;
        }
    }
    CHECK(cpe == 32);
    CHECK(falsity == 1);
    CHECK(schemas == 8);
    CHECK(crules == 20);
    CHECK(imported == 17);
}

TEST_CASE("every fixture proof checks in corpus order") {
    Registry reg = seed();
    for (const auto& id : fixture_order()) {
        CAPTURE(id);
        auto report = check_proof(fixture(id), reg, {}, {}, "tests/fixtures/" + id + ".proof");
        INFO(report.describe());
        REQUIRE(report.ok());
        REQUIRE(report.entry);
        reg.add(*report.entry);
    }
}

TEST_CASE("sessions driven through options reproduce every listing") {
    Registry reg = seed();
    for (const auto& id : fixture_order()) {
        CAPTURE(id);
        ProofScript script = fixture(id);
        Replay r = replay(script, reg);
        for (const auto& f : r.failures) MESSAGE(f);
        CHECK(r.failures.empty());
        CHECK(r.renamed == 0);
        if (r.failures.empty()) {
            ProofScript out = to_script(r.d, script.header);
            CHECK(render_proof(out) == render_proof(script));
        }
        auto report = check_proof(script, reg, {}, {}, "tests/fixtures/" + id + ".proof");
        REQUIRE(report.ok());
        reg.add(*report.entry);
    }
}
