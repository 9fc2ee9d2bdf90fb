#pragma once

// Program equivalence (one-step relations and their closure) and the
// asymmetric I/O-equivalence matcher.

#include "vpc/model.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpc {

/// One of the elementary equivalence relations holds between u and v, in
/// either direction. A statement is passed as a one-element program.
bool equiv_step(const Program& u, const Program& v);

/// Disjunction-of-plain-lists normal form. Each inner vector is the sorted
/// multiset of rendered statements of one plain list; the outer vector is sorted.
using CanonicalForm = std::vector<std::vector<std::string>>;

CanonicalForm canonical_form(const Program& p);
bool equiv(const Program& u, const Program& v);

class MatchFailure : public std::runtime_error {
public:
    enum class Kind { Shape, RepetitionBroken, ConstantMismatch };

    MatchFailure(Kind kind, std::size_t position, const std::string& what)
        : std::runtime_error(what), kind_(kind), position_(position) {}

    Kind kind() const { return kind_; }
    /// 1-based statement position in the template.
    std::size_t position() const { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

const char* to_string(MatchFailure::Kind kind);

/// Witnessing substitution template -> candidate, statement by statement in order.
/// Throws MatchFailure.
Substitution io_equivalent(const Program& candidate, const Program& tmpl);

/// Extends `base` so that the template statement maps onto the candidate and
/// calls `emit` for every consistent extension. Nonatomic sugar on either side
/// is expanded when the names differ; disjunction operands are tried in every
/// order.
void match_statement(const Statement& candidate, const Statement& tmpl, const Substitution& base,
                     const std::function<void(const Substitution&)>& emit);

/// First extension from match_statement, if any.
bool match_statement_once(const Statement& candidate, const Statement& tmpl, Substitution& s);

/// True iff `a` equals `b` after renaming the names in `renamable` (as they occur
/// in `a`) bijectively to names of `b` that are not in `taken`.
bool same_up_to_renaming(const Statement& a, const Statement& b,
                         const std::set<std::string>& renamable, const std::set<std::string>& taken);

}  // namespace vpc
