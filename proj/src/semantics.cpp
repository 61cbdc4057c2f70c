// SPDX-License-Identifier: MIT
#include "loas/semantics.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "loas/errors.hpp"
#include "matching.hpp"

namespace loas {

namespace {

Atom bottom() { return Term::constant(kBottom); }

bool holds(const CountAggregate& a, const Interpretation& i) {
    std::int64_t n = 0;
    for (Atom x : a.atoms) n += i.contains(x) ? 1 : 0;
    return (!a.lower || n >= *a.lower) && (!a.upper || n <= *a.upper);
}

bool holds(const SumAggregate& s, const Interpretation& i) {
    std::int64_t sum = 0;
    for (const auto& e : s.elements) {
        if (!e.weight.is_integer()) throw NotGround("#sum weight is not an integer: " + to_string(e.weight));
        if (i.contains(e.atom)) sum += e.negate ? -e.weight.value() : e.weight.value();
    }
    return evaluate(s.op, Term::integer(sum), s.bound);
}

} // namespace

Program compute_reduct(const Program& p, const Interpretation& i) {
    Program out;
    for (const auto& r : p.rules) {
        if (r.is_weak()) continue;
        if (!r.is_ground()) throw NotGround("reduct requires a ground program: " + to_string(r));
        std::vector<BodyElement> pos;
        bool removed = false;
        for (const auto& b : r.body) {
            if (auto* l = std::get_if<Literal>(&b)) {
                if (!l->negated) pos.push_back(*l);
                else if (i.contains(l->atom)) removed = true;
            } else if (auto* c = std::get_if<Comparison>(&b)) {
                removed = removed || !evaluate(c->op, c->lhs, c->rhs);
            } else if (auto* a = std::get_if<CountAggregate>(&b)) {
                removed = removed || !holds(*a, i);
            } else if (auto* s = std::get_if<SumAggregate>(&b)) {
                removed = removed || !holds(*s, i);
            }
        }
        if (removed) continue;
        switch (r.kind) {
        case RuleKind::Normal: out.add(Rule::normal(r.head.front(), pos)); break;
        case RuleKind::Constraint: out.add(Rule::normal(bottom(), pos)); break;
        case RuleKind::Choice: {
            std::int64_t n = 0;
            for (Atom h : r.head) n += i.contains(h) ? 1 : 0;
            if (n < r.lower || n > r.upper) {
                out.add(Rule::normal(bottom(), pos));
            } else {
                for (Atom h : r.head)
                    if (i.contains(h)) out.add(Rule::normal(h, pos));
            }
            break;
        }
        case RuleKind::Weak: break;
        }
    }
    return out;
}

Interpretation least_model(const Program& definite) {
    std::unordered_map<Atom, std::vector<std::size_t>> watchers;
    std::vector<std::size_t> missing(definite.rules.size(), 0);
    std::vector<Atom> queue;
    std::unordered_set<Atom> model;
    auto derive = [&](Atom a) {
        if (model.insert(a).second) queue.push_back(a);
    };
    for (std::size_t k = 0; k < definite.rules.size(); ++k) {
        const Rule& r = definite.rules[k];
        for (const auto& b : r.body) {
            auto* l = std::get_if<Literal>(&b);
            if (!l || l->negated) throw Error("least_model expects a negation-free program");
            watchers[l->atom].push_back(k);
            ++missing[k];
        }
    }
    auto head_of = [&](const Rule& r) { return r.kind == RuleKind::Constraint ? bottom() : r.head.front(); };
    for (std::size_t k = 0; k < definite.rules.size(); ++k)
        if (missing[k] == 0) derive(head_of(definite.rules[k]));
    while (!queue.empty()) {
        Atom a = queue.back();
        queue.pop_back();
        auto it = watchers.find(a);
        if (it == watchers.end()) continue;
        for (std::size_t k : it->second)
            if (--missing[k] == 0) derive(head_of(definite.rules[k]));
    }
    return Interpretation(std::vector<Atom>(model.begin(), model.end()));
}

bool is_answer_set(const Program& p, const Interpretation& i) {
    Interpretation lm = least_model(compute_reduct(p, i));
    return !lm.contains(bottom()) && lm == i;
}

bool operator<(const WeakTuple& a, const WeakTuple& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.level != b.level) return a.level < b.level;
    return std::lexicographical_compare(a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end(),
                                        TermLess{});
}

std::string to_string(const WeakTuple& t) {
    std::string s = "(" + std::to_string(t.weight) + ", " + std::to_string(t.level);
    for (Term x : t.terms) s += ", " + to_string(x);
    return s + ")";
}

std::int64_t WeakProfile::sum(std::int64_t level) const {
    auto it = level_sums.find(level);
    return it == level_sums.end() ? 0 : it->second;
}

WeakProfile make_profile(std::vector<WeakTuple> tuples) {
    WeakProfile p;
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    for (const auto& t : tuples) p.level_sums[t.level] += t.weight;
    p.tuples = std::move(tuples);
    return p;
}

struct InterpretationIndex::Impl {
    detail::AtomStore store;

    template <class F>
    void join(const Rule& r, const detail::VarTable& vt, const std::vector<Atom>& pos, std::size_t step,
              detail::Binding& b, std::vector<int>& trail, F&& f) const {
        if (step == pos.size()) {
            if (check_rest(r, vt, b)) f(b);
            return;
        }
        Atom pat = pos[step];
        const auto* rel = store.relation(pat);
        if (!rel) return;
        auto n = static_cast<std::uint32_t>(rel->atoms.size());
        detail::for_candidates(*rel, pat, vt, b, 0, n, [&](std::uint32_t k) {
            std::size_t mark = trail.size();
            if (detail::match(pat, rel->atoms[k], vt, b, trail)) join(r, vt, pos, step + 1, b, trail, f);
            detail::undo(b, trail, mark);
        });
    }

    bool check_rest(const Rule& r, const detail::VarTable& vt, const detail::Binding& b) const {
        for (const auto& el : r.body) {
            if (auto* l = std::get_if<Literal>(&el)) {
                if (l->negated && store.contains(detail::substitute(l->atom, vt, b))) return false;
            } else if (auto* c = std::get_if<Comparison>(&el)) {
                if (!evaluate(c->op, detail::substitute(c->lhs, vt, b), detail::substitute(c->rhs, vt, b)))
                    return false;
            } else if (auto* a = std::get_if<CountAggregate>(&el)) {
                std::int64_t n = 0;
                for (Atom x : a->atoms) n += store.contains(detail::substitute(x, vt, b)) ? 1 : 0;
                if ((a->lower && n < *a->lower) || (a->upper && n > *a->upper)) return false;
            } else {
                throw Error("#sum aggregates are not supported in weak constraint bodies");
            }
        }
        return true;
    }
};

InterpretationIndex::InterpretationIndex(const Interpretation& a) : impl_(std::make_unique<Impl>()) {
    for (Atom x : a) impl_->store.add(x);
}
InterpretationIndex::~InterpretationIndex() = default;
InterpretationIndex::InterpretationIndex(InterpretationIndex&&) noexcept = default;
InterpretationIndex& InterpretationIndex::operator=(InterpretationIndex&&) noexcept = default;

bool InterpretationIndex::contains(Atom a) const { return impl_->store.contains(a); }

namespace {
std::vector<Atom> positive_atoms(const Rule& r, detail::VarTable& vt) {
    std::vector<Atom> pos;
    std::vector<Term> vs;
    for (const auto& b : r.body)
        if (auto* l = std::get_if<Literal>(&b); l && !l->negated) {
            pos.push_back(l->atom);
            collect_variables(l->atom, vs);
        }
    for (Term v : vs) vt.add(v);
    return pos;
}
} // namespace

void InterpretationIndex::for_each_match(const Rule& r,
                                         const std::function<void(const std::vector<Term>&)>& f) const {
    detail::VarTable vt;
    auto pos = positive_atoms(r, vt);
    detail::Binding b(vt.size());
    std::vector<int> trail;
    impl_->join(r, vt, pos, 0, b, trail, f);
}

std::vector<WeakTuple> InterpretationIndex::weak_tuples(const Rule& weak) const {
    detail::VarTable vt;
    auto pos = positive_atoms(weak, vt);
    detail::Binding b(vt.size());
    std::vector<int> trail;
    std::vector<WeakTuple> out;
    impl_->join(weak, vt, pos, 0, b, trail, [&](const detail::Binding& bind) {
        WeakTuple t;
        Term w = detail::substitute(weak.weight, vt, bind), l = detail::substitute(weak.level, vt, bind);
        if (!w.is_integer() || !l.is_integer())
            throw GroundingError("weak constraint weight and level must be integers, got [" + to_string(w) +
                                 "@" + to_string(l) + "]");
        t.weight = w.value();
        t.level = l.value();
        for (Term x : weak.terms) t.terms.push_back(detail::substitute(x, vt, bind));
        out.push_back(std::move(t));
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<WeakTuple> weak_tuples(const Rule& weak, const Interpretation& a) {
    return InterpretationIndex(a).weak_tuples(weak);
}

WeakProfile weak_profile(const Program& p, const Interpretation& a) {
    InterpretationIndex idx(a);
    std::vector<WeakTuple> all;
    for (const auto& r : p.rules) {
        if (!r.is_weak()) continue;
        auto ts = idx.weak_tuples(r);
        all.insert(all.end(), ts.begin(), ts.end());
    }
    return make_profile(std::move(all));
}

int preference(const WeakProfile& a1, const WeakProfile& a2) {
    auto i1 = a1.level_sums.rbegin(), i2 = a2.level_sums.rbegin();
    // Walk levels from highest to lowest; absent levels count as 0.
    while (i1 != a1.level_sums.rend() || i2 != a2.level_sums.rend()) {
        std::int64_t s1 = 0, s2 = 0;
        if (i2 == a2.level_sums.rend() || (i1 != a1.level_sums.rend() && i1->first > i2->first)) {
            s1 = i1->second;
            ++i1;
        } else if (i1 == a1.level_sums.rend() || i2->first > i1->first) {
            s2 = i2->second;
            ++i2;
        } else {
            s1 = i1->second;
            s2 = i2->second;
            ++i1;
            ++i2;
        }
        if (s1 != s2) return s1 < s2 ? 1 : -1;
    }
    return 0;
}

bool dominates(const WeakProfile& a1, const WeakProfile& a2) { return preference(a1, a2) > 0; }

bool dominates(const Program& p, const Interpretation& a1, const Interpretation& a2) {
    return dominates(weak_profile(p, a1), weak_profile(p, a2));
}

} // namespace loas
