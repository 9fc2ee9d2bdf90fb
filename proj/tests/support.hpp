#pragma once

#include "vpc/engine.hpp"
#include "vpc/equivalence.hpp"
#include "vpc/registry.hpp"
#include "vpc/syntax.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpc::testing {

inline std::string fixtures_dir() { return VPC_FIXTURES; }
inline std::string seed_path() { return VPC_SEED; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> fixture_order() {
    std::istringstream in(slurp(fixtures_dir() + "/ORDER"));
    std::vector<std::string> ids;
    for (std::string id; in >> id;) ids.push_back(id);
    return ids;
}

inline ProofScript fixture(const std::string& id) { return parse_proof(slurp(fixtures_dir() + "/" + id + ".proof")); }

inline Registry seed() { return load_registry(seed_path()); }

/// The seed plus every fixture up to (not including) `stop`, each checked
/// and added in corpus order.
inline Registry registry_before(const std::string& stop, const CheckOptions& opts = {}) {
    Registry reg = seed();
    for (const auto& id : fixture_order()) {
        if (id == stop) break;
        auto report = check_proof(fixture(id), reg, opts, {}, "tests/fixtures/" + id + ".proof");
        if (!report.ok()) throw std::runtime_error(report.describe());
        reg.add(*report.entry);
    }
    return reg;
}

struct Replay {
    Derivation d;
    std::vector<std::string> failures;
    std::size_t renamed = 0;   // lines reproduced only up to fresh-name renaming
};

inline const DerivOption* find_option(const std::vector<DerivOption>& opts, const ConnectionList& conn,
                                      const std::optional<Statement>& printed, const Derivation& d, bool& exact) {
    const DerivOption* loose = nullptr;
    for (const auto& o : opts) {
        if (!(o.connection == conn) || o.falsity() != !printed) continue;
        if (!printed) {
            exact = true;
            return &o;
        }
        if (o.conclusion.size() != 1) continue;
        if (o.conclusion[0] == *printed) {
            exact = true;
            return &o;
        }
        if (!loose && same_up_to_renaming(o.conclusion[0], *printed, o.fresh, d.used_names())) loose = &o;
    }
    exact = false;
    return loose;
}

/// Drives a session through the option/split/contract interface so that it
/// reproduces a printed listing.
inline Replay replay(const ProofScript& script, const Registry& reg) {
    Replay r;
    std::size_t n = 0;
    Program premises;
    while (n < script.lines.size() && script.lines[n].connections.empty()) premises.stmts.push_back(*script.lines[n++].statement);
    r.d = new_derivation(premises);
    auto fail = [&](const ProofLine& l, const std::string& m) {
        r.failures.push_back("line " + std::to_string(l.label) + ": " + m);
    };
    for (std::size_t k = n; k < script.lines.size(); ++k) {
        const ProofLine& l = script.lines[k];
        if (l.connections.size() == 1) {
            auto opts = generate_options(r.d, reg);
            bool exact = false;
            const DerivOption* o = find_option(opts, l.connections[0], l.statement, r.d, exact);
            if (!o) {
                fail(l, "no option " + (l.statement ? render_statement(*l.statement) : std::string("False")) +
                            render_connection(l.connections[0]));
                return r;
            }
            if (!exact) ++r.renamed;
            apply_option(r.d, *o);
        } else {
            std::size_t s = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (script.lines[i].split_mark) s = script.lines[i].label;
            split(r.d, s);
            for (std::size_t i = 0; i < r.d.branches.size(); ++i) {
                Derivation& b = r.d.branches[i];
                const Entry* e = reg.find(l.connections[i].entry);
                bool is_false = e && std::holds_alternative<FalseEntry>(*e);
                std::optional<Statement> want = is_false ? std::nullopt : l.statement;
                auto opts = generate_options(b, reg);
                bool exact = false;
                const DerivOption* o = find_option(opts, l.connections[i], want, b, exact);
                if (!o) {
                    fail(l, "branch " + std::to_string(i + 1) + ": no option " + render_connection(l.connections[i]));
                    return r;
                }
                apply_option(b, *o);
            }
            contract(r.d);
            const DerivLine& got = r.d.lines.back();
            if (!(got.statement == l.statement) || !(got.connections == l.connections)) {
                fail(l, "contraction produced " + render_proof_line(got.label, got.statement, false, got.connections));
                return r;
            }
        }
    }
    return r;
}

inline Program prog(const std::string& text) { return parse_program(text); }
inline Statement stmt(const std::string& text) { return parse_statement(text); }

}  // namespace vpc::testing
