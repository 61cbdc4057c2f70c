// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace loas {

enum class TermKind : std::uint8_t { Integer, Constant, Function, Variable };

class Term;
struct TermNode;

/// Immutable, hash-consed term. Two terms are equal iff they are the same node,
/// so copies, equality and hashing are O(1).
class Term {
public:
    Term() = default;

    static Term integer(std::int64_t value);
    static Term constant(std::string_view name);
    static Term variable(std::string_view name);
    /// A function term with no arguments is the constant of the same name.
    static Term function(std::string_view functor, std::vector<Term> args);

    bool valid() const noexcept { return node_ != nullptr; }
    TermKind kind() const noexcept;
    bool is_integer() const noexcept { return kind() == TermKind::Integer; }
    bool is_variable() const noexcept { return kind() == TermKind::Variable; }
    /// Constant or function term.
    bool is_symbolic() const noexcept {
        auto k = kind();
        return k == TermKind::Constant || k == TermKind::Function;
    }

    std::int64_t value() const noexcept;
    /// Functor, constant or variable name; empty for integers.
    const std::string& name() const noexcept;
    std::span<const Term> args() const noexcept;
    std::size_t arity() const noexcept { return args().size(); }
    bool is_ground() const noexcept;
    /// Nesting depth of function terms: constants/integers/variables are 0, f(a) is 1.
    std::uint32_t depth() const noexcept;
    std::size_t hash() const noexcept;

    friend bool operator==(Term a, Term b) noexcept { return a.node_ == b.node_; }
    friend bool operator!=(Term a, Term b) noexcept { return a.node_ != b.node_; }

    const TermNode* node() const noexcept { return node_; }

private:
    explicit Term(const TermNode* node) : node_(node) {}
    const TermNode* node_ = nullptr;
};

/// Canonical total order: integers < symbols < variables; integers by value,
/// symbols by name, then arity, then arguments left to right.
int compare(Term a, Term b) noexcept;

struct TermLess {
    bool operator()(Term a, Term b) const noexcept { return compare(a, b) < 0; }
};

std::string to_string(Term t);
std::ostream& operator<<(std::ostream& os, Term t);

/// Collects the variables of t in first-appearance order, without duplicates.
void collect_variables(Term t, std::vector<Term>& out);

} // namespace loas

template <>
struct std::hash<loas::Term> {
    std::size_t operator()(loas::Term t) const noexcept { return t.hash(); }
};
