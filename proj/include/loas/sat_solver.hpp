// SPDX-License-Identifier: MIT
// Conflict-driven clause learning with native weight constraints.
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace loas::sat {

using Var = std::int32_t;

struct Lit {
    std::int32_t x = -2;

    static Lit make(Var v, bool negative = false) { return Lit{2 * v + (negative ? 1 : 0)}; }
    Var var() const { return x >> 1; }
    bool negative() const { return x & 1; }
    Lit operator~() const { return Lit{x ^ 1}; }
    bool operator==(const Lit&) const = default;
    bool operator<(const Lit& o) const { return x < o.x; }
};

inline Lit pos(Var v) { return Lit::make(v, false); }
inline Lit neg(Var v) { return Lit::make(v, true); }

enum class Result { Sat, Unsat, Unknown };

inline constexpr std::int64_t kNoBound = std::numeric_limits<std::int64_t>::max() / 4;

struct WeightedLit {
    Lit lit;
    std::int64_t weight;
};

class Solver {
public:
    /// Called on every total assignment. Returning clauses (each falsified by
    /// the current assignment) rejects the model; they are added permanently.
    using ModelCheck = std::function<std::vector<std::vector<Lit>>(const Solver&)>;

    Solver();

    Var new_var();
    std::size_t num_vars() const { return values_.size(); }

    /// Adds a permanent clause (only between solve calls). Returns false once
    /// the formula is unsatisfiable at the root.
    bool add_clause(std::vector<Lit> lits);

    /// head <-> lower <= sum(weight * lit) <= upper. Weights may be negative;
    /// pass -kNoBound / kNoBound for a missing bound.
    bool add_weight_constraint(Lit head, std::vector<WeightedLit> lits, std::int64_t lower, std::int64_t upper);

    Result solve(const std::vector<Lit>& assumptions = {});

    /// Value of a variable in the last model.
    bool model_value(Var v) const { return model_[v] > 0; }
    bool model_value(Lit l) const { return model_value(l.var()) != l.negative(); }
    const std::vector<std::int8_t>& model() const { return model_; }

    /// Current (search-time) value: 1 true, -1 false, 0 unassigned.
    std::int8_t value(Lit l) const {
        std::int8_t v = values_[l.var()];
        return l.negative() ? static_cast<std::int8_t>(-v) : v;
    }
    std::int8_t value(Var v) const { return values_[v]; }

    void set_model_check(ModelCheck f) { model_check_ = std::move(f); }
    void set_deadline(std::optional<std::chrono::steady_clock::time_point> d) { deadline_ = d; }
    bool okay() const { return ok_; }

    struct Stats {
        std::uint64_t conflicts = 0;
        std::uint64_t decisions = 0;
        std::uint64_t propagations = 0;
        std::uint64_t model_rejections = 0;
    };
    const Stats& stats() const { return stats_; }

private:
    struct Clause {
        std::vector<Lit> lits;
        double activity = 0;
        bool learnt = false;
        bool removed = false;
    };
    struct Watch {
        std::int32_t cref;
        Lit blocker;
    };
    struct WeightConstraint {
        Lit head;
        std::vector<Lit> lits;
        std::vector<std::int64_t> weights;
        std::int64_t lower, upper;
        std::int64_t total = 0, sum_true = 0, sum_false = 0, max_weight = 0;
    };
    struct Occurrence {
        std::int32_t wc;
        std::int32_t index; // -1 for the head
    };
    enum class ReasonKind : std::uint8_t { None, Clause, Weight };
    struct Reason {
        ReasonKind kind = ReasonKind::None;
        std::int32_t index = -1;
    };

    int level() const { return static_cast<int>(trail_lim_.size()); }
    void assign(Lit l, Reason r);
    void unassign(Var v);
    void backtrack(int lvl);
    /// Returns a conflict explanation (all literals false) or empty.
    bool propagate(std::vector<Lit>& conflict);
    bool propagate_wc(std::int32_t c, std::vector<Lit>& conflict);
    void explain(Lit p, std::vector<Lit>& out);
    void wc_literals_before(const WeightConstraint& c, std::size_t limit, std::vector<Lit>& out) const;
    void analyze(const std::vector<Lit>& conflict, std::vector<Lit>& learnt, int& back_level);
    std::int32_t attach(std::vector<Lit> lits, bool learnt);
    /// Integrates a clause while searching. Returns false if it proves UNSAT.
    bool integrate(std::vector<Lit> lits, std::vector<Lit>& conflict);
    Lit pick_branch();
    void bump(Var v);
    void decay() { var_inc_ *= 1.0 / 0.95; }
    void bump_clause(Clause& c);
    void reduce_db();
    bool locked(std::int32_t cref) const;

    // heap of variables by activity
    void heap_insert(Var v);
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    Var heap_pop();
    bool heap_less(Var a, Var b) const { return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b); }

    bool ok_ = true;
    std::vector<std::int8_t> values_, model_, polarity_;
    std::vector<int> levels_;
    std::vector<std::int32_t> trail_pos_;
    std::vector<Reason> reasons_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<Clause> clauses_;
    std::vector<std::int32_t> learnts_;
    std::vector<std::vector<Watch>> watches_;
    std::vector<WeightConstraint> wcs_;
    std::vector<std::vector<Occurrence>> occurs_;
    std::vector<double> activity_;
    double var_inc_ = 1.0, cla_inc_ = 1.0;
    std::vector<Var> heap_;
    std::vector<std::int32_t> heap_index_;
    std::vector<std::uint8_t> seen_;
    std::vector<std::vector<Lit>> pending_;
    double max_learnts_ = 0;
    ModelCheck model_check_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    Stats stats_;
};

} // namespace loas::sat
