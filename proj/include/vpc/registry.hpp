#pragma once

// Store of axioms, theorems, lemmas, construction rules, falsity templates
// and schema declarations, with dependency edges.

#include "vpc/model.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vpc {

enum class EntryKind { Axiom, Theorem, Lemma, ConstructionRule };

const char* to_string(EntryKind kind);

struct CpeEntry {
    std::string id;
    EntryKind kind = EntryKind::Axiom;
    Program premise;
    Program conclusion;
    std::vector<std::string> deps;
    std::optional<std::string> proof;
    bool imported = false;

    bool operator==(const CpeEntry&) const = default;
};

struct FalseEntry {
    std::string id;
    EntryKind kind = EntryKind::Axiom;
    Program program;
    std::vector<std::string> deps;
    std::optional<std::string> proof;
    bool imported = false;

    bool operator==(const FalseEntry&) const = default;
};

enum class SchemaRule { IoInput, IoOutput, Substitution, SubstitutionOutput };
enum class Level { Integer, Program };

const char* to_string(SchemaRule rule);
const char* to_string(Level level);

/// Axiom schemas with no finite statement form; instantiated by the rulebase.
struct SchemaEntry {
    std::string id;
    SchemaRule rule = SchemaRule::IoInput;
    Level level = Level::Integer;

    bool operator==(const SchemaEntry&) const = default;
};

using Entry = std::variant<CpeEntry, FalseEntry, SchemaEntry>;

const std::string& entry_id(const Entry& e);
const std::vector<std::string>& entry_deps(const Entry& e);

class RegistryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Registry {
public:
    Registry() = default;

    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    bool contains(const std::string& id) const { return index_.count(id) != 0; }
    const Entry& at(const std::string& id) const;
    const Entry* find(const std::string& id) const;

    /// Throws RegistryError on a duplicate id, an unknown dependency or an
    /// invalid premise/conclusion pair.
    void add(Entry e, const MachineParams& params = {});

    /// Removes id and everything depending on it, transitively. The removed
    /// ids come back in dependency order (an entry before its dependents).
    std::vector<std::string> retract(const std::string& id);

    /// Removes every CpeEntry whose premise contains an instance of the
    /// falsity template, then cascades.
    std::vector<std::string> purge_by_falsity(const std::string& false_id);

    /// Relabels an axiom as a theorem with the given proof and dependencies.
    void promote(const std::string& id, const std::string& proof_ref, std::vector<std::string> deps);

    std::vector<std::string> dependents(const std::string& id) const;

    bool operator==(const Registry& o) const { return entries_ == o.entries_; }

private:
    void reindex();

    std::vector<Entry> entries_;
    std::map<std::string, std::size_t> index_;
};

Registry parse_registry(std::string_view text, const MachineParams& params = {});
std::string render_registry(const Registry& r);

Registry load_registry(const std::string& path, const MachineParams& params = {});
void save_registry(const Registry& r, const std::string& path);

/// True iff some sublist of `program` (statements may repeat) is an instance of `tmpl`.
bool contains_instance(const Program& program, const Program& tmpl);

}  // namespace vpc
