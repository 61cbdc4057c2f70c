// SPDX-License-Identifier: MIT
#include "loas/sat_solver.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace loas::sat {

namespace {

double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    double r = 1;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
}

constexpr Lit kUndef{-2};

} // namespace

Solver::Solver() = default;

Var Solver::new_var() {
    Var v = static_cast<Var>(values_.size());
    values_.push_back(0);
    polarity_.push_back(1);
    levels_.push_back(0);
    trail_pos_.push_back(-1);
    reasons_.push_back({});
    activity_.push_back(0.0);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    occurs_.emplace_back();
    heap_index_.push_back(-1);
    heap_insert(v);
    return v;
}

void Solver::heap_insert(Var v) {
    if (heap_index_[v] >= 0) return;
    heap_index_[v] = static_cast<std::int32_t>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
    Var v = heap_[i];
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (!heap_less(v, heap_[parent])) break;
        heap_[i] = heap_[parent];
        heap_index_[heap_[i]] = static_cast<std::int32_t>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<std::int32_t>(i);
}

void Solver::heap_down(std::size_t i) {
    Var v = heap_[i];
    while (true) {
        std::size_t child = 2 * i + 1;
        if (child >= heap_.size()) break;
        if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
        if (!heap_less(heap_[child], v)) break;
        heap_[i] = heap_[child];
        heap_index_[heap_[i]] = static_cast<std::int32_t>(i);
        i = child;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<std::int32_t>(i);
}

Var Solver::heap_pop() {
    Var top = heap_.front();
    heap_index_[top] = -1;
    Var last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_index_[last] = 0;
        heap_down(0);
    }
    return top;
}

void Solver::bump(Var v) {
    if ((activity_[v] += var_inc_) > 1e100) {
        for (double& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void Solver::bump_clause(Clause& c) {
    if ((c.activity += cla_inc_) > 1e20) {
        for (std::int32_t cr : learnts_) clauses_[cr].activity *= 1e-20;
        cla_inc_ *= 1e-20;
    }
}

void Solver::assign(Lit l, Reason r) {
    Var v = l.var();
    values_[v] = l.negative() ? -1 : 1;
    levels_[v] = level();
    reasons_[v] = r;
    trail_pos_[v] = static_cast<std::int32_t>(trail_.size());
    trail_.push_back(l);
    for (const auto& o : occurs_[v]) {
        if (o.index < 0) continue;
        auto& c = wcs_[o.wc];
        if (value(c.lits[o.index]) > 0) c.sum_true += c.weights[o.index];
        else c.sum_false += c.weights[o.index];
    }
}

void Solver::unassign(Var v) {
    for (const auto& o : occurs_[v]) {
        if (o.index < 0) continue;
        auto& c = wcs_[o.wc];
        if (value(c.lits[o.index]) > 0) c.sum_true -= c.weights[o.index];
        else c.sum_false -= c.weights[o.index];
    }
    polarity_[v] = values_[v] < 0 ? 1 : 0;
    values_[v] = 0;
    reasons_[v] = {};
    trail_pos_[v] = -1;
    heap_insert(v);
}

void Solver::backtrack(int lvl) {
    if (level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) unassign(trail_[i].var());
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
}

std::int32_t Solver::attach(std::vector<Lit> lits, bool learnt) {
    auto cref = static_cast<std::int32_t>(clauses_.size());
    watches_[lits[0].x].push_back({cref, lits[1]});
    watches_[lits[1].x].push_back({cref, lits[0]});
    clauses_.push_back(Clause{std::move(lits), 0.0, learnt, false});
    if (learnt) learnts_.push_back(cref);
    return cref;
}

bool Solver::add_clause(std::vector<Lit> lits) {
    if (!ok_) return false;
    backtrack(0);
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<Lit> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && lits[i + 1] == ~lits[i]) return true; // tautology
        std::int8_t v = value(lits[i]);
        if (v > 0) return true;
        if (v == 0) kept.push_back(lits[i]);
    }
    if (kept.empty()) return ok_ = false;
    if (kept.size() == 1) {
        assign(kept[0], {});
        std::vector<Lit> conflict;
        if (!propagate(conflict)) ok_ = false;
        return ok_;
    }
    attach(std::move(kept), false);
    return true;
}

bool Solver::add_weight_constraint(Lit head, std::vector<WeightedLit> lits, std::int64_t lower,
                                   std::int64_t upper) {
    if (!ok_) return false;
    backtrack(0);
    std::map<Var, std::pair<std::int64_t, std::int64_t>> by_var; // (weight on v, weight on ~v)
    std::int64_t constant = 0;
    for (auto [l, w] : lits) {
        if (l.var() == head.var()) throw std::invalid_argument("weight constraint head occurs in its body");
        if (w < 0) {
            constant += w;
            l = ~l;
            w = -w;
        }
        auto& e = by_var[l.var()];
        (l.negative() ? e.second : e.first) += w;
    }
    WeightConstraint c;
    c.head = head;
    for (auto [v, ws] : by_var) {
        auto [a, b] = ws;
        std::int64_t m = std::min(a, b);
        constant += m;
        if (a - m > 0) {
            c.lits.push_back(pos(v));
            c.weights.push_back(a - m);
        } else if (b - m > 0) {
            c.lits.push_back(neg(v));
            c.weights.push_back(b - m);
        }
    }
    for (std::int64_t w : c.weights) {
        c.total += w;
        c.max_weight = std::max(c.max_weight, w);
    }
    c.lower = lower <= -kNoBound ? -kNoBound : lower - constant;
    c.upper = upper >= kNoBound ? kNoBound : upper - constant;
    if (c.lower <= 0) c.lower = -kNoBound;
    if (c.upper >= c.total) c.upper = kNoBound;
    for (std::size_t i = 0; i < c.lits.size(); ++i) {
        std::int8_t v = value(c.lits[i]);
        if (v > 0) c.sum_true += c.weights[i];
        if (v < 0) c.sum_false += c.weights[i];
    }
    auto idx = static_cast<std::int32_t>(wcs_.size());
    occurs_[head.var()].push_back({idx, -1});
    for (std::size_t i = 0; i < c.lits.size(); ++i)
        occurs_[c.lits[i].var()].push_back({idx, static_cast<std::int32_t>(i)});
    wcs_.push_back(std::move(c));
    std::vector<Lit> conflict;
    if (!propagate_wc(idx, conflict) || !propagate(conflict)) ok_ = false;
    return ok_;
}

void Solver::wc_literals_before(const WeightConstraint& c, std::size_t limit, std::vector<Lit>& out) const {
    auto add = [&](Lit l) {
        std::int8_t v = value(l);
        if (v == 0 || static_cast<std::size_t>(trail_pos_[l.var()]) >= limit) return;
        out.push_back(v > 0 ? ~l : l);
    };
    add(c.head);
    for (Lit l : c.lits) add(l);
}

bool Solver::propagate_wc(std::int32_t ci, std::vector<Lit>& conflict) {
    auto& c = wcs_[ci];
    std::int64_t min_s = c.sum_true, max_s = c.total - c.sum_false;
    std::int8_t hv = value(c.head);
    Reason why{ReasonKind::Weight, ci};
    if (hv == 0) {
        if (min_s >= c.lower && max_s <= c.upper) assign(c.head, why);
        else if (max_s < c.lower || min_s > c.upper) assign(~c.head, why);
        return true;
    }
    std::int64_t lo = c.lower, hi = c.upper;
    if (hv < 0) {
        bool can_low = c.lower > -kNoBound && min_s < c.lower;
        bool can_high = c.upper < kNoBound && max_s > c.upper;
        if (can_low && can_high) return true;
        if (!can_low && !can_high) {
            lo = kNoBound; // forces the conflict below
        } else if (can_low) {
            lo = -kNoBound;
            hi = c.lower - 1;
        } else {
            lo = c.upper + 1;
            hi = kNoBound;
        }
    }
    if (max_s < lo || min_s > hi) {
        conflict.clear();
        wc_literals_before(c, trail_.size(), conflict);
        return false;
    }
    if (max_s - c.max_weight >= lo && min_s + c.max_weight <= hi) return true;
    for (std::size_t i = 0; i < c.lits.size(); ++i) {
        if (value(c.lits[i]) != 0) continue;
        std::int64_t w = c.weights[i];
        if ((c.total - c.sum_false) - w < lo) assign(c.lits[i], why);
        else if (c.sum_true + w > hi) assign(~c.lits[i], why);
    }
    return true;
}

bool Solver::propagate(std::vector<Lit>& conflict) {
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        ++stats_.propagations;
        Lit f = ~p;
        auto& ws = watches_[f.x];
        std::size_t i = 0, j = 0, n = ws.size();
        while (i < n) {
            Watch w = ws[i++];
            Clause& c = clauses_[w.cref];
            if (c.removed) continue;
            if (value(w.blocker) > 0) {
                ws[j++] = w;
                continue;
            }
            auto& lits = c.lits;
            if (lits[0] == f) std::swap(lits[0], lits[1]);
            Lit first = lits[0];
            if (first != w.blocker && value(first) > 0) {
                ws[j++] = {w.cref, first};
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < lits.size(); ++k) {
                if (value(lits[k]) >= 0) {
                    std::swap(lits[1], lits[k]);
                    watches_[lits[1].x].push_back({w.cref, first});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = {w.cref, first};
            if (value(first) < 0) {
                conflict = lits;
                while (i < n) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return false;
            }
            assign(first, {ReasonKind::Clause, w.cref});
        }
        ws.resize(j);
        for (const auto& o : occurs_[p.var()]) {
            if (!propagate_wc(o.wc, conflict)) {
                qhead_ = trail_.size();
                return false;
            }
        }
    }
    return true;
}

void Solver::explain(Lit p, std::vector<Lit>& out) {
    const Reason& r = reasons_[p.var()];
    if (r.kind == ReasonKind::Clause) {
        Clause& c = clauses_[r.index];
        if (c.learnt) bump_clause(c);
        for (Lit l : c.lits)
            if (l.var() != p.var()) out.push_back(l);
    } else if (r.kind == ReasonKind::Weight) {
        wc_literals_before(wcs_[r.index], static_cast<std::size_t>(trail_pos_[p.var()]), out);
    }
}

void Solver::analyze(const std::vector<Lit>& conflict, std::vector<Lit>& learnt, int& back_level) {
    learnt.assign(1, kUndef);
    int path = 0;
    Lit p = kUndef;
    auto idx = static_cast<std::int64_t>(trail_.size()) - 1;
    std::vector<Lit> reason = conflict;
    while (true) {
        for (Lit q : reason) {
            Var v = q.var();
            if (seen_[v] || levels_[v] == 0) continue;
            seen_[v] = 1;
            bump(v);
            if (levels_[v] >= level()) ++path;
            else learnt.push_back(q);
        }
        while (idx >= 0 && !seen_[trail_[idx].var()]) --idx;
        if (idx < 0) break;
        p = trail_[idx--];
        seen_[p.var()] = 0;
        if (--path <= 0) break;
        reason.clear();
        explain(p, reason);
    }
    learnt[0] = ~p;
    for (std::size_t k = 1; k < learnt.size(); ++k) seen_[learnt[k].var()] = 0;
    back_level = 0;
    if (learnt.size() > 1) {
        std::size_t best = 1;
        for (std::size_t k = 2; k < learnt.size(); ++k)
            if (levels_[learnt[k].var()] > levels_[learnt[best].var()]) best = k;
        std::swap(learnt[1], learnt[best]);
        back_level = levels_[learnt[1].var()];
    }
}

bool Solver::locked(std::int32_t cref) const {
    const Clause& c = clauses_[cref];
    Lit l = c.lits[0];
    const Reason& r = reasons_[l.var()];
    return value(l) > 0 && r.kind == ReasonKind::Clause && r.index == cref;
}

void Solver::reduce_db() {
    std::vector<std::int32_t> sorted = learnts_;
    std::sort(sorted.begin(), sorted.end(), [&](std::int32_t a, std::int32_t b) {
        return clauses_[a].activity < clauses_[b].activity;
    });
    std::size_t limit = sorted.size() / 2;
    std::vector<std::int32_t> keep;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        std::int32_t cr = sorted[k];
        Clause& c = clauses_[cr];
        if (k < limit && c.lits.size() > 2 && !locked(cr)) {
            c.removed = true;
            c.lits.clear();
            c.lits.shrink_to_fit();
        } else {
            keep.push_back(cr);
        }
    }
    learnts_ = std::move(keep);
}

bool Solver::integrate(std::vector<Lit> lits, std::vector<Lit>& conflict) {
    // Returns false when the clause is conflicting; `conflict` is then set and
    // the solver has backtracked to the clause's highest level. ok_ is cleared
    // when the clause is falsified at the root.
    conflict.clear();
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<Lit> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && lits[i + 1] == ~lits[i]) return true;
        std::int8_t v = value(lits[i]);
        if (v > 0 && levels_[lits[i].var()] == 0) return true;
        if (v < 0 && levels_[lits[i].var()] == 0) continue;
        kept.push_back(lits[i]);
    }
    if (kept.empty()) {
        ok_ = false;
        return false;
    }
    if (kept.size() == 1) {
        backtrack(0);
        assign(kept[0], {});
        return true;
    }
    auto rank = [&](Lit l) -> std::int64_t {
        std::int8_t v = value(l);
        if (v > 0) return 3'000'000'000LL;
        if (v == 0) return 2'000'000'000LL;
        return levels_[l.var()];
    };
    std::stable_sort(kept.begin(), kept.end(), [&](Lit a, Lit b) { return rank(a) > rank(b); });
    std::int8_t v0 = value(kept[0]), v1 = value(kept[1]);
    if (v0 < 0) {
        backtrack(levels_[kept[0].var()]);
        conflict = kept;
        attach(std::move(kept), false);
        return false;
    }
    Lit first = kept[0];
    bool unit = v0 == 0 && v1 < 0;
    std::int32_t cref = attach(std::move(kept), false);
    if (unit) assign(first, {ReasonKind::Clause, cref});
    return true;
}

Lit Solver::pick_branch() {
    while (!heap_.empty()) {
        Var v = heap_pop();
        if (values_[v] == 0) return Lit::make(v, polarity_[v] != 0);
    }
    return kUndef;
}

Result Solver::solve(const std::vector<Lit>& assumptions) {
    model_.clear();
    if (!ok_) return Result::Unsat;
    backtrack(0);
    std::vector<Lit> conflict, learnt;
    if (!propagate(conflict)) {
        ok_ = false;
        return Result::Unsat;
    }
    max_learnts_ = std::max<double>(max_learnts_, std::max<double>(2000.0, clauses_.size() / 3.0));
    int restarts = 0;
    std::uint64_t restart_budget = static_cast<std::uint64_t>(luby(2, restarts) * 100);
    std::uint64_t conflicts_here = 0;
    std::uint64_t steps = 0;
    while (true) {
        if (deadline_ && (++steps & 255) == 0 && std::chrono::steady_clock::now() > *deadline_) {
            backtrack(0);
            return Result::Unknown;
        }
        bool clash = !propagate(conflict);
        if (!clash && !pending_.empty()) {
            std::vector<Lit> c = std::move(pending_.back());
            pending_.pop_back();
            if (integrate(std::move(c), conflict)) continue;
            if (!ok_) {
                pending_.clear();
                return Result::Unsat;
            }
            clash = true;
        }
        if (clash) {
            ++stats_.conflicts;
            ++conflicts_here;
            if (level() == 0) {
                ok_ = false;
                pending_.clear();
                return Result::Unsat;
            }
            int back = 0;
            analyze(conflict, learnt, back);
            backtrack(back);
            if (learnt.size() == 1) {
                assign(learnt[0], {});
            } else {
                Lit first = learnt[0];
                std::int32_t cref = attach(learnt, true);
                bump_clause(clauses_[cref]);
                assign(first, {ReasonKind::Clause, cref});
            }
            decay();
            cla_inc_ *= 1.0 / 0.999;
            continue;
        }
        if (conflicts_here >= restart_budget) {
            backtrack(0);
            restart_budget = conflicts_here + static_cast<std::uint64_t>(luby(2, ++restarts) * 100);
            continue;
        }
        if (static_cast<double>(learnts_.size()) >= max_learnts_ + static_cast<double>(trail_.size())) {
            reduce_db();
            max_learnts_ *= 1.1;
        }
        Lit next = kUndef;
        while (level() < static_cast<int>(assumptions.size())) {
            Lit a = assumptions[level()];
            std::int8_t v = value(a);
            if (v > 0) {
                trail_lim_.push_back(trail_.size());
            } else if (v < 0) {
                backtrack(0);
                return Result::Unsat;
            } else {
                next = a;
                break;
            }
        }
        if (next == kUndef) {
            next = pick_branch();
            if (next == kUndef) {
                if (model_check_) {
                    auto extra = model_check_(*this);
                    if (!extra.empty()) {
                        ++stats_.model_rejections;
                        for (auto& c : extra) pending_.push_back(std::move(c));
                        continue;
                    }
                }
                model_ = values_;
                backtrack(0);
                return Result::Sat;
            }
            ++stats_.decisions;
        }
        trail_lim_.push_back(trail_.size());
        assign(next, {});
    }
}

} // namespace loas::sat
