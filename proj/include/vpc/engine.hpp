#pragma once

// Derivations: option generation, application, disjunction split/contract,
// theorem extraction, saturation and listing replay.

#include "vpc/exec.hpp"
#include "vpc/model.hpp"
#include "vpc/registry.hpp"
#include "vpc/syntax.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vpc {

struct Derivation;

struct DerivLine {
    std::size_t label = 0;
    std::optional<Statement> statement;      // nullopt is `False`
    std::vector<ConnectionList> connections; // empty for base lines
    bool split_mark = false;

    // Filled on lines produced by contraction: the closed branches, whose
    // labels the composite connection lists refer to.
    std::size_t contracted_split = 0;
    std::vector<std::size_t> contracted_sizes;
    std::vector<Derivation> contracted_branches;
};

enum class DerivStatus { Open, ConcludedFalse, Extracted };

const char* to_string(DerivStatus s);

struct Derivation {
    /// Lines 1..base_count carry no connections: the premises of a main
    /// derivation, or the inherited lines of a branch.
    std::size_t base_count = 0;
    std::vector<DerivLine> lines;
    DerivStatus status = DerivStatus::Open;

    /// Active split (split_label > 0): one branch per operand.
    std::size_t split_label = 0;
    std::vector<std::size_t> operand_sizes;
    std::vector<Derivation> branches;

    Program program() const;
    std::set<std::string> used_names() const;
    bool open() const { return status == DerivStatus::Open; }
    bool has_split() const { return split_label != 0; }
};

class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StaleOption : public EngineError {
public:
    using EngineError::EngineError;
};

Derivation new_derivation(const Program& premises, const MachineParams& params = {});

enum class OptionKind { Cpe, Falsity, Schema };

struct DerivOption {
    OptionKind kind = OptionKind::Cpe;
    ConnectionList connection;
    std::vector<Statement> conclusion;   // empty for falsity
    Substitution substitution;
    std::set<std::string> fresh;
    std::string state;                   // fingerprint of the derivation it was generated from

    bool falsity() const { return kind == OptionKind::Falsity; }
    /// Rendered conclusion (`False` for falsity options).
    std::string text() const;
    /// Stable content hash over state, conclusion and connection.
    std::string hash() const;
};

std::string fingerprint(const Derivation& d);

std::vector<DerivOption> generate_options(const Derivation& d, const Registry& reg, const MachineParams& params = {});

/// options.dat: one numbered option per line.
std::string render_options(const std::vector<DerivOption>& options);

void apply_option(Derivation& d, const DerivOption& option, const MachineParams& params = {});

void split(Derivation& d, std::size_t label, const MachineParams& params = {});

struct ContractResult {
    enum class Case { Common, CommonWithFalse, AllFalse };
    Case which = Case::Common;
    std::optional<Statement> conclusion;
};

ContractResult contract(Derivation& d, const MachineParams& params = {});

/// The derivation reached by following branch indices from the root.
Derivation& focus(Derivation& root, const std::vector<std::size_t>& path);
const Derivation& focus(const Derivation& root, const std::vector<std::size_t>& path);

struct ExtractOptions {
    std::size_t minimality_depth = 2;   // saturation rounds per strict sublist of a false program
    bool halt_guard = true;             // warn when the used premises saturate to False
    std::size_t guard_depth = 3;
};

class MinimalityFailure : public EngineError {
public:
    MinimalityFailure(Program smaller, const std::string& what) : EngineError(what), smaller_(std::move(smaller)) {}
    const Program& smaller() const { return smaller_; }

private:
    Program smaller_;
};

struct Extraction {
    Entry entry;
    std::vector<std::size_t> used_premises;   // labels
    std::vector<std::string> warnings;
};

/// Builds the stored entry for the derivation's final line. The entry id,
/// kind and proof reference come from the caller.
Extraction extract_theorem(const Derivation& d, const std::string& id, EntryKind kind, const Registry& reg,
                           const ExtractOptions& opts = {}, const MachineParams& params = {});

/// Breadth-first application of every new conclusion, `depth` rounds or until False.
Derivation saturate(const Derivation& d, const Registry& reg, std::size_t depth, const MachineParams& params = {},
                    std::size_t max_lines = 400);

struct LineCheck {
    std::size_t label = 0;
    bool ok = true;
    std::string message;
};

struct CheckOptions {
    bool strict = false;                // run the execution oracle on every level-0 step
    Domain domain{-10, 10};
    ExtractOptions extract{2, false, 3};
};

struct CheckReport {
    std::string id;
    std::vector<LineCheck> lines;
    bool header_ok = false;
    std::string header_message;
    std::optional<Entry> entry;         // the extracted entry when everything passed
    Derivation derivation;

    bool ok() const;
    std::string describe() const;
};

/// Replays a listing against the registry. The returned entry carries
/// `proof_ref` as its proof reference.
CheckReport check_proof(const ProofScript& script, const Registry& reg, const CheckOptions& opts = {},
                        const MachineParams& params = {}, const std::string& proof_ref = {});

/// Listing text for a derivation (the header is built from `entry`).
ProofScript to_script(const Derivation& d, const ProofHeader& header);

}  // namespace vpc
