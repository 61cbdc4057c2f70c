// SPDX-License-Identifier: MIT
// Definitional semantics: reduct, least model, weak profiles, dominance.
// These are direct (non-search) implementations and double as test oracles.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "loas/program.hpp"

namespace loas {

/// Four-step simplified reduct of the non-weak part of a ground program.
/// Comparisons and body aggregates are evaluated against `i` like negative
/// literals: a false one removes the rule, a true one is dropped.
/// Throws NotGround when p contains variables.
Program compute_reduct(const Program& p, const Interpretation& i);

/// Least model of a negation-free ground program (normal rules and facts;
/// constraints derive `bot`).
Interpretation least_model(const Program& definite);

bool is_answer_set(const Program& p, const Interpretation& i);

struct WeakTuple {
    std::int64_t weight = 0;
    std::int64_t level = 0;
    std::vector<Term> terms;
    bool operator==(const WeakTuple&) const = default;
};

bool operator<(const WeakTuple& a, const WeakTuple& b);
std::string to_string(const WeakTuple& t);

struct WeakProfile {
    std::vector<WeakTuple> tuples; // sorted, unique
    std::map<std::int64_t, std::int64_t> level_sums;

    std::int64_t sum(std::int64_t level) const;
    bool operator==(const WeakProfile&) const = default;
};

WeakProfile make_profile(std::vector<WeakTuple> tuples);

/// Tuples of the weak constraints of p (ground or not) whose body `a` satisfies.
/// Throws GroundingError if a satisfied instance has a non-integer weight or level.
WeakProfile weak_profile(const Program& p, const Interpretation& a);

/// Tuples contributed by a single weak constraint under `a`.
std::vector<WeakTuple> weak_tuples(const Rule& weak, const Interpretation& a);

/// Indexed view of one interpretation for repeated body matching.
class InterpretationIndex {
public:
    explicit InterpretationIndex(const Interpretation& a);
    ~InterpretationIndex();
    InterpretationIndex(InterpretationIndex&&) noexcept;
    InterpretationIndex& operator=(InterpretationIndex&&) noexcept;

    /// Calls f(binding) for every way the body of r is satisfied; the binding
    /// lists values of the positive-body variables in first-appearance order.
    void for_each_match(const Rule& r, const std::function<void(const std::vector<Term>&)>& f) const;
    std::vector<WeakTuple> weak_tuples(const Rule& weak) const;
    bool contains(Atom a) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Strict dominance: the highest level at which the sums differ favours a1.
bool dominates(const WeakProfile& a1, const WeakProfile& a2);
bool dominates(const Program& p, const Interpretation& a1, const Interpretation& a2);

/// Three-way preference: 1 if a1 dominates a2, -1 if a2 dominates a1, else 0.
int preference(const WeakProfile& a1, const WeakProfile& a2);

} // namespace loas
