// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loas/term.hpp"

namespace loas {

/// Atoms are symbolic terms: the predicate is the functor, the arguments are
/// the term arguments. `p` is the zero-arity atom, `p(a,X)` a binary one.
using Atom = Term;

Atom make_atom(std::string_view predicate, std::vector<Term> args = {});

/// Name reserved for the falsity atom produced by the reduct.
inline constexpr std::string_view kBottom = "bot";

struct Literal {
    Atom atom;
    bool negated = false;
    bool operator==(const Literal&) const = default;
};

enum class CmpOp : std::uint8_t { Lt, Le, Gt, Ge, Eq, Ne };

struct Comparison {
    Term lhs;
    CmpOp op = CmpOp::Lt;
    Term rhs;
    bool operator==(const Comparison&) const = default;
};

/// `l {a1; ...; an} u` in a rule body. A missing bound is unconstrained.
struct CountAggregate {
    std::optional<std::int64_t> lower;
    std::optional<std::int64_t> upper;
    std::vector<Atom> atoms;
    bool operator==(const CountAggregate&) const = default;
};

struct SumElement {
    Atom atom;
    Term weight;
    bool negate = false; // element written as `atom=-W`
    bool operator==(const SumElement&) const = default;
};

/// `#sum{a1=w1, a2=-w2} op bound`. Each distinct ground atom counts once.
struct SumAggregate {
    std::vector<SumElement> elements;
    CmpOp op = CmpOp::Lt;
    Term bound;
    bool operator==(const SumAggregate&) const = default;
};

using BodyElement = std::variant<Literal, Comparison, CountAggregate, SumAggregate>;

enum class RuleKind : std::uint8_t { Normal, Constraint, Choice, Weak };

struct Rule {
    RuleKind kind = RuleKind::Normal;
    std::vector<Atom> head; // one atom for Normal, the choice atoms for Choice
    std::int64_t lower = 0;
    std::int64_t upper = 0;
    std::vector<BodyElement> body;
    Term weight; // Weak only
    Term level;
    std::vector<Term> terms;

    bool operator==(const Rule&) const = default;

    static Rule normal(Atom head, std::vector<BodyElement> body = {});
    static Rule constraint(std::vector<BodyElement> body);
    static Rule choice(std::int64_t lower, std::int64_t upper, std::vector<Atom> head,
                       std::vector<BodyElement> body = {});
    static Rule weak(std::vector<BodyElement> body, Term weight, Term level,
                     std::vector<Term> terms = {});

    bool is_weak() const noexcept { return kind == RuleKind::Weak; }
    bool is_fact() const noexcept { return kind == RuleKind::Normal && body.empty(); }
    bool is_ground() const;
    /// Literals only (comparisons and aggregates skipped).
    std::vector<Literal> literals() const;
};

struct Program {
    std::vector<Rule> rules;

    bool operator==(const Program&) const = default;

    void add(Rule r) { rules.push_back(std::move(r)); }
    void append(const Program& other);
    Program weak() const;
    Program non_weak() const;
    bool is_ground() const;
    std::size_t size() const noexcept { return rules.size(); }
};

/// A set of ground atoms, kept sorted in canonical term order.
class Interpretation {
public:
    Interpretation() = default;
    explicit Interpretation(std::vector<Atom> atoms);

    bool contains(Atom a) const;
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    auto begin() const noexcept { return atoms_.begin(); }
    auto end() const noexcept { return atoms_.end(); }

    bool operator==(const Interpretation&) const = default;

private:
    std::vector<Atom> atoms_;
};

/// Size first, then lexicographic in canonical atom order.
bool operator<(const Interpretation& a, const Interpretation& b);

bool evaluate(CmpOp op, Term lhs, Term rhs);
std::string_view to_string(CmpOp op);

std::string to_string(const Literal& l);
std::string to_string(const BodyElement& b);
std::string to_string(const Rule& r);
/// One statement per line.
std::string to_string(const Program& p);
/// `{a, b, c}` in canonical order.
std::string to_string(const Interpretation& i);

/// Variables of the whole rule in first-appearance order.
std::vector<Term> rule_variables(const Rule& r);
/// Throws SafetyError when some variable has no positive body occurrence.
/// Variables local to a #sum element only need to occur in that element's atom.
void check_safety(const Rule& r, std::size_t rule_index);

} // namespace loas
