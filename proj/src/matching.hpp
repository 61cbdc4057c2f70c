// SPDX-License-Identifier: MIT
// Substitutions, unification against ground atoms, and an indexed atom store.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "loas/program.hpp"

namespace loas::detail {

class VarTable {
public:
    VarTable() = default;
    explicit VarTable(std::vector<Term> vars) : vars_(std::move(vars)) {}

    int slot(Term v) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == v) return static_cast<int>(i);
        return -1;
    }
    int add(Term v) {
        int s = slot(v);
        if (s >= 0) return s;
        vars_.push_back(v);
        return static_cast<int>(vars_.size()) - 1;
    }
    std::size_t size() const { return vars_.size(); }
    const std::vector<Term>& vars() const { return vars_; }

private:
    std::vector<Term> vars_;
};

/// Binding slots; an invalid Term marks an unbound variable.
using Binding = std::vector<Term>;

inline bool match(Term pattern, Term ground, const VarTable& vt, Binding& b, std::vector<int>& trail) {
    if (pattern.is_ground()) return pattern == ground;
    if (pattern.is_variable()) {
        int s = vt.slot(pattern);
        if (b[s].valid()) return b[s] == ground;
        b[s] = ground;
        trail.push_back(s);
        return true;
    }
    if (ground.kind() != pattern.kind() || ground.name() != pattern.name() ||
        ground.arity() != pattern.arity())
        return false;
    auto pa = pattern.args(), ga = ground.args();
    for (std::size_t i = 0; i < pa.size(); ++i)
        if (!match(pa[i], ga[i], vt, b, trail)) return false;
    return true;
}

inline void undo(Binding& b, std::vector<int>& trail, std::size_t mark) {
    while (trail.size() > mark) {
        b[trail.back()] = Term();
        trail.pop_back();
    }
}

inline bool is_bound(Term t, const VarTable& vt, const Binding& b) {
    if (t.is_ground()) return true;
    if (t.is_variable()) {
        int s = vt.slot(t);
        return s >= 0 && b[s].valid();
    }
    for (Term a : t.args())
        if (!is_bound(a, vt, b)) return false;
    return true;
}

/// Replaces bound variables; unbound ones are left in place.
inline Term substitute(Term t, const VarTable& vt, const Binding& b) {
    if (t.is_ground()) return t;
    if (t.is_variable()) {
        int s = vt.slot(t);
        return (s >= 0 && b[s].valid()) ? b[s] : t;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    for (Term a : t.args()) args.push_back(substitute(a, vt, b));
    return Term::function(t.name(), std::move(args));
}

// Term names live as long as the intern table, so the view never dangles.
struct PredKey {
    std::string_view name;
    std::size_t arity;
    bool operator==(const PredKey&) const = default;
};

struct PredKeyHash {
    std::size_t operator()(const PredKey& k) const noexcept {
        return std::hash<std::string_view>{}(k.name) * 31 + k.arity;
    }
};

inline PredKey pred_key(Atom a) { return {a.name(), a.arity()}; }

struct ArgKey {
    std::uint32_t pos;
    const TermNode* value;
    bool operator==(const ArgKey&) const = default;
};

struct ArgKeyHash {
    std::size_t operator()(const ArgKey& k) const noexcept {
        return std::hash<const void*>{}(k.value) ^ (static_cast<std::size_t>(k.pos) * 0x9e3779b97f4a7c15ULL);
    }
};

/// Insertion-ordered store of ground atoms, indexed by predicate and by
/// (argument position, value). Ranges [lo, hi) of insertion indices select
/// the Old / Delta / All views used by semi-naive evaluation.
class AtomStore {
public:
    struct Relation {
        std::vector<Atom> atoms;
        std::unordered_map<ArgKey, std::vector<std::uint32_t>, ArgKeyHash> index;
        std::uint32_t old_end = 0;
        std::uint32_t delta_end = 0;
    };

    /// Returns true when the atom is new.
    bool add(Atom a) {
        auto [it, inserted] = position_.try_emplace(a, 0);
        if (!inserted) return false;
        Relation& r = relations_[pred_key(a)];
        auto idx = static_cast<std::uint32_t>(r.atoms.size());
        it->second = idx;
        r.atoms.push_back(a);
        auto args = a.args();
        for (std::uint32_t i = 0; i < args.size(); ++i) r.index[{i, args[i].node()}].push_back(idx);
        return true;
    }

    bool contains(Atom a) const { return position_.count(a) != 0; }

    /// Insertion index of a, or -1.
    std::int64_t index_of(Atom a) const {
        auto it = position_.find(a);
        return it == position_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }

    const Relation* relation(Atom pattern) const {
        auto it = relations_.find(pred_key(pattern));
        return it == relations_.end() ? nullptr : &it->second;
    }
    Relation* relation(Atom pattern) {
        auto it = relations_.find(pred_key(pattern));
        return it == relations_.end() ? nullptr : &it->second;
    }

    /// Advances every relation's round markers; returns whether any delta is non-empty.
    bool next_round() {
        bool any = false;
        for (auto& [k, r] : relations_) {
            r.old_end = r.delta_end;
            r.delta_end = static_cast<std::uint32_t>(r.atoms.size());
            any = any || r.delta_end > r.old_end;
        }
        return any;
    }

    std::size_t size() const { return position_.size(); }

    template <class F>
    void for_each(F&& f) const {
        for (const auto& [k, r] : relations_)
            for (Atom a : r.atoms) f(a);
    }

private:
    std::unordered_map<PredKey, Relation, PredKeyHash> relations_;
    std::unordered_map<Term, std::uint32_t> position_;
};

/// Calls f(index) for each atom index in [lo, hi) of the relation that could
/// match `pattern` under the binding (using the most selective bound argument).
template <class F>
void for_candidates(const AtomStore::Relation& rel, Atom pattern, const VarTable& vt,
                    const Binding& b, std::uint32_t lo, std::uint32_t hi, F&& f) {
    if (lo >= hi) return;
    const std::vector<std::uint32_t>* best = nullptr;
    auto args = pattern.args();
    for (std::uint32_t i = 0; i < args.size(); ++i) {
        if (!is_bound(args[i], vt, b)) continue;
        Term v = substitute(args[i], vt, b);
        auto it = rel.index.find({i, v.node()});
        if (it == rel.index.end()) return;
        if (!best || it->second.size() < best->size()) best = &it->second;
    }
    if (!best) {
        for (std::uint32_t k = lo; k < hi; ++k) f(k);
        return;
    }
    // f may append to the store, so iterate by position rather than iterator.
    auto p = static_cast<std::size_t>(std::lower_bound(best->begin(), best->end(), lo) - best->begin());
    for (; p < best->size() && (*best)[p] < hi; ++p) f((*best)[p]);
}

} // namespace loas::detail
