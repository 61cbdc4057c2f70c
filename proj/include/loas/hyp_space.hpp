// SPDX-License-Identifier: MIT
// Mode bias with ordering and the search space it defines.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loas/program.hpp"

namespace loas {

enum class Placeholder : std::uint8_t { Var, Const };

struct ModeDeclaration {
    std::string predicate;
    std::vector<Placeholder> args;

    bool operator==(const ModeDeclaration&) const = default;
};

/// Parses `p(v,c)`; placeholders are the constants `v` and `c`.
ModeDeclaration parse_mode(std::string_view text);
ModeDeclaration make_mode(Atom pattern);
std::string to_string(const ModeDeclaration& m);

struct ModeBias {
    std::vector<ModeDeclaration> heads;
    std::vector<ModeDeclaration> bodies;
    std::vector<ModeDeclaration> orderings;
    std::vector<std::int64_t> weights;
    std::int64_t max_level = 1;
    std::size_t max_body = 3;
    std::size_t max_vars = 3;
    /// Largest number of atoms in a choice-rule head.
    std::size_t max_head = 1;
    /// Largest number of negative literals in a body.
    std::size_t max_neg = 3;
    std::vector<Term> constants;
    std::size_t cap = 100'000;
};

struct SpaceEntry {
    Term id;
    Rule rule;
    std::int64_t cost = 0;
};

class SearchSpace {
public:
    SearchSpace() = default;
    explicit SearchSpace(std::vector<SpaceEntry> entries);

    const std::vector<SpaceEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const SpaceEntry& operator[](std::size_t i) const { return entries_[i]; }
    /// Index of the entry with this id, if any.
    std::optional<std::size_t> find(Term id) const;
    /// Index of an entry alpha-equivalent to r, if any.
    std::optional<std::size_t> find_equivalent(const Rule& r) const;

private:
    std::vector<SpaceEntry> entries_;
};

bool atom_compatible(Atom a, const ModeDeclaration& m);

std::int64_t rule_cost(const Rule& r);

/// Canonical representative of r's equivalence class under variable renaming
/// and body reordering. Variables become V1, V2, ...
Rule canonical_rule(const Rule& r);
bool alpha_equivalent(const Rule& a, const Rule& b);

/// Weak-constraint terms derived from a body: its variables and constants in
/// first-appearance order.
std::vector<Term> body_terms(const std::vector<BodyElement>& body);

/// S_M for the bias. Entries are canonical, pairwise non-equivalent, and get
/// ids r1, r2, ... in generation order. Throws SearchSpaceExplosion past the cap.
SearchSpace build_search_space(const ModeBias& m);

/// Entries for explicitly listed rules (ids r1, r2, ... in order), followed by
/// the generated entries not equivalent to any listed one.
SearchSpace build_search_space(const std::vector<Rule>& listed, const ModeBias& m);

} // namespace loas
