#pragma once

// Text grammars: statements, programs, proof listings, machine configuration.
// The registry and options file formats live with their owners
// (registry.hpp, engine.hpp) but share the lexer and renderers here.

#include "vpc/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vpc {

/// 1-based location of a diagnostic.
struct SourceSpan {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t length = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(SourceSpan span, const std::string& message);

    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }

private:
    SourceSpan span_;
    std::string message_;
};

std::string render_term(const Term& t);
std::string render_statement(const Statement& s);
/// Comma-separated statements without surrounding brackets.
std::string render_statements(const std::vector<Statement>& stmts);
/// `[s1,s2]`, or `[]` for the empty program.
std::string render_program(const Program& p);

Statement parse_statement(std::string_view text);
/// A bracketed list `[s1, s2]` or a bare sequence `s1, s2`; nested lists are
/// concatenated. Not validated.
Program parse_program(std::string_view text);

// --- proof listings -------------------------------------------------------

struct ConnectionList {
    std::string entry;
    std::vector<std::size_t> labels;

    bool operator==(const ConnectionList&) const = default;
};

std::string render_connection(const ConnectionList& c);

enum class ProofKind { Theorem, Lemma };

/// `[ [premise], conclusion ]` or, for falsity, `[ program ]:False`.
struct ProofHeader {
    ProofKind kind = ProofKind::Theorem;
    std::string id;
    bool falsity = false;
    Program premise;      // the false program when `falsity`
    Program conclusion;   // empty when `falsity`
};

struct ProofLine {
    std::size_t label = 0;
    std::optional<Statement> statement;   // nullopt is the terminal `False`
    bool split_mark = false;
    std::vector<ConnectionList> connections;
    SourceSpan span;
};

struct ProofScript {
    ProofHeader header;
    std::vector<ProofLine> lines;
};

ProofScript parse_proof(std::string_view text);
std::string render_proof(const ProofScript& script);

/// `[ [ p1, p2 ], c ]` / `[ c ]` / `[ p1, p2 ]:False`, wrapped at 78 columns.
std::string render_header_body(const ProofHeader& header);
/// Parses a header body (without the `Theorem X.` line).
ProofHeader parse_header_body(std::string_view text);

/// One listing line: right-aligned label, statement padded to 20 columns,
/// then the connection lists.
std::string render_proof_line(std::size_t label, const std::optional<Statement>& statement,
                              bool split_mark, const std::vector<ConnectionList>& connections);

// --- machine configuration ------------------------------------------------

MachineParams parse_config(std::string_view text);
std::string render_config(const MachineParams& params);

}  // namespace vpc
