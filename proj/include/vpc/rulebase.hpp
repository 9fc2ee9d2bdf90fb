#pragma once

// Schema axioms: I/O-type rules and substitution rules at the integer and
// program levels, instantiated against the lines of a derivation.

#include "vpc/model.hpp"
#include "vpc/registry.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vpc {

bool is_higher_order_name(std::string_view name);
/// Level at which a statement lives, decided by its program name.
Level level_of(const Statement& s);

std::vector<Term> interleave(const std::vector<Term>& u, const std::vector<Term>& v);

/// Pairwise Eq (integer level) or Equiv (program level) statements.
Program expand_eqlst(const std::vector<Term>& u, const std::vector<Term>& v, Level level);

struct SchemaMatch {
    std::string schema;
    std::vector<std::size_t> labels;
    std::vector<Statement> conclusion;
    Substitution substitution;          // x -> x' for substitution rules
    std::set<std::string> fresh;        // output names invented for the conclusion
};

/// Lines of a derivation indexed by label - 1; nullptr marks a `False` line.
using LineView = std::vector<const Statement*>;

/// Int([c],[]) or Prog([c],[]) for an element of the line's input or output list.
SchemaMatch match_io_type(const Statement& line, std::size_t label, const Term& element,
                          const SchemaEntry& schema);

/// Substitution rule applied to `target` with one equality line per input
/// position; `other` is the existing P(x',y') line for the output form.
/// Fresh output names are drawn from `names`.
SchemaMatch match_substitution(const LineView& lines, std::size_t target, const std::vector<std::size_t>& equalities,
                               std::optional<std::size_t> other, const SchemaEntry& schema, NameSupply names);

/// Every instance of the schema over the given lines.
std::vector<SchemaMatch> schema_options(const LineView& lines, const SchemaEntry& schema, const NameSupply& names);

/// Instances whose connection labels are exactly `labels`.
std::vector<SchemaMatch> schema_instances_at(const LineView& lines, const SchemaEntry& schema,
                                             const std::vector<std::size_t>& labels, const NameSupply& names);

}  // namespace vpc
