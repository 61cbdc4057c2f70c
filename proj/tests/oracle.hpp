// SPDX-License-Identifier: MIT
// Independent oracles for tests: powerset enumeration through the
// definitional reduct, and small random program generators.
#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "loas/grounder.hpp"
#include "loas/hyp_space.hpp"
#include "loas/parser.hpp"
#include "loas/program.hpp"
#include "loas/semantics.hpp"
#include "loas/task.hpp"

namespace loas::test {

inline std::vector<Atom> herbrand_base(const Program& ground) {
    std::set<Atom, TermLess> hb;
    for (const auto& r : ground.rules) {
        for (Atom h : r.head) hb.insert(h);
        for (const auto& l : r.literals()) hb.insert(l.atom);
    }
    return {hb.begin(), hb.end()};
}

/// AS(p) by checking every subset of the atoms occurring in heads.
inline std::vector<Interpretation> brute_answer_sets(const Program& p) {
    Program g = p.is_ground() ? p : ground(p);
    std::set<Atom, TermLess> heads;
    for (const auto& r : g.rules)
        for (Atom h : r.head) heads.insert(h);
    std::vector<Atom> hb(heads.begin(), heads.end());
    if (hb.size() > 20) throw std::runtime_error("oracle: Herbrand base too large");
    std::vector<Interpretation> out;
    for (std::uint32_t mask = 0; mask < (1u << hb.size()); ++mask) {
        std::vector<Atom> atoms;
        for (std::size_t k = 0; k < hb.size(); ++k)
            if (mask & (1u << k)) atoms.push_back(hb[k]);
        Interpretation i(std::move(atoms));
        if (is_answer_set(g, i)) out.push_back(std::move(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// AS*(p) by pairwise dominance over brute_answer_sets.
inline std::vector<Interpretation> brute_optimal(const Program& p) {
    auto all = brute_answer_sets(p);
    std::vector<WeakProfile> prof;
    for (const auto& a : all) prof.push_back(weak_profile(p, a));
    std::vector<Interpretation> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < all.size() && !dominated; ++j) dominated = dominates(prof[j], prof[i]);
        if (!dominated) out.push_back(all[i]);
    }
    return out;
}

/// Random propositional program over atoms a0..a{n-1}: normal rules, choice
/// rules, constraints and weak constraints, including positive loops.
inline Program random_program(std::mt19937& rng, int n_atoms, int n_rules, bool weak = true) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    auto atom = [&] { return Term::constant("a" + std::to_string(pick(n_atoms))); };
    auto body = [&] {
        std::vector<BodyElement> b;
        int len = pick(3);
        for (int k = 0; k < len; ++k) b.push_back(Literal{atom(), pick(3) == 0});
        return b;
    };
    Program p;
    for (int r = 0; r < n_rules; ++r) {
        int kind = pick(10);
        if (kind < 5) {
            p.add(Rule::normal(atom(), body()));
        } else if (kind < 7) {
            std::set<Atom, TermLess> hs;
            int k = 1 + pick(3);
            for (int j = 0; j < k; ++j) hs.insert(atom());
            std::vector<Atom> head(hs.begin(), hs.end());
            auto sz = static_cast<int>(head.size());
            int lo = pick(sz + 1);
            int hi = lo + pick(sz - lo + 1);
            p.add(Rule::choice(lo, hi, head, body()));
        } else if (kind < 8) {
            auto b = body();
            if (b.empty()) b.push_back(Literal{atom(), false});
            p.add(Rule::constraint(b));
        } else if (weak) {
            auto b = body();
            if (b.empty()) b.push_back(Literal{atom(), false});
            std::vector<Term> terms;
            if (pick(2)) terms.push_back(Term::integer(pick(3)));
            p.add(Rule::weak(b, Term::integer(pick(5) - 2), Term::integer(pick(3)), terms));
        }
    }
    return p;
}

/// Random propositional task over a0..a{n-1}: background, an explicit space
/// of at most `space` rules, 1-3 positives, 0-2 negatives, 0-3 orderings.
inline LearningTask random_task(std::mt19937& rng, int n_atoms = 4, int space = 8) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    LearningTask t;
    t.background = random_program(rng, n_atoms, 1 + pick(4), pick(3) == 0);
    Program cand = random_program(rng, n_atoms, space, true);
    t.space = build_search_space(cand.rules, ModeBias{});
    auto partial = [&](const std::string& id) {
        std::vector<Atom> inc, exc;
        for (int k = 0; k < n_atoms; ++k) {
            int r = pick(6);
            Atom a = Term::constant("a" + std::to_string(k));
            if (r == 0) inc.push_back(a);
            if (r == 1) exc.push_back(a);
        }
        return PartialInterpretation(Term::constant(id), inc, exc);
    };
    int np = 1 + pick(3), nn = pick(3), no = pick(4);
    for (int i = 0; i < np; ++i) t.positives.push_back(partial("p" + std::to_string(i + 1)));
    for (int i = 0; i < nn; ++i) t.negatives.push_back(partial("n" + std::to_string(i + 1)));
    for (int i = 0; i < no; ++i) {
        OrderingExample o;
        o.id = Term::constant("o" + std::to_string(i + 1));
        o.first = t.positives[static_cast<std::size_t>(pick(np))].id;
        o.second = t.positives[static_cast<std::size_t>(pick(np))].id;
        o.kind = pick(2) ? OrderingKind::Brave : OrderingKind::Cautious;
        if (o.kind == OrderingKind::Cautious && o.first == o.second) o.kind = OrderingKind::Brave;
        t.orderings.push_back(o);
    }
    return t;
}

/// All subsets of a small space, by bitmask.
// A random task that some hypothesis of its space solves: examples are drawn
// from AS(B u h) for a random h and orderings are kept only if h respects them.
inline LearningTask planted_task(std::mt19937& rng, int n_atoms = 4, int space = 8) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    for (;;) {
        LearningTask t = random_task(rng, n_atoms, space);
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < t.space.size(); ++i)
            if (pick(3) == 0) chosen.push_back(i);
        Hypothesis h(chosen);
        Program p = t.background;
        p.append(rules(t.space, h));
        auto as = brute_answer_sets(p);
        if (as.empty()) continue;
        t.positives.clear();
        t.orderings.clear();
        int np = 1 + pick(4);
        for (int i = 0; i < np; ++i) {
            const auto& a = as[static_cast<std::size_t>(pick(static_cast<int>(as.size())))];
            std::vector<Atom> inc, exc;
            for (int k = 0; k < n_atoms; ++k) {
                Atom x = Term::constant("a" + std::to_string(k));
                if (pick(2)) (a.contains(x) ? inc : exc).push_back(x);
            }
            t.positives.emplace_back(Term::constant("p" + std::to_string(i + 1)), inc, exc);
        }
        // Negatives stay only if h rules them out.
        std::erase_if(t.negatives, [&](const PartialInterpretation& e) {
            for (const auto& a : as)
                if (interpretation_extends(a, e)) return true;
            return false;
        });
        for (int i = 0; i < 1 + pick(3); ++i) {
            OrderingExample o;
            o.id = Term::constant("o" + std::to_string(i + 1));
            o.first = t.positives[static_cast<std::size_t>(pick(np))].id;
            o.second = t.positives[static_cast<std::size_t>(pick(np))].id;
            o.kind = pick(2) ? OrderingKind::Brave : OrderingKind::Cautious;
            auto find = [&](Term id) {
                for (const auto& e : t.positives)
                    if (e.id == id) return e;
                return PartialInterpretation{};
            };
            if (o.first != o.second && respects_ordering(p, o.kind, find(o.first), find(o.second)))
                t.orderings.push_back(o);
        }
        return t;
    }
}

inline std::vector<Hypothesis> all_hypotheses(const SearchSpace& s) {
    std::vector<Hypothesis> out;
    for (std::uint32_t mask = 0; mask < (1u << s.size()); ++mask) {
        std::vector<std::size_t> e;
        for (std::size_t k = 0; k < s.size(); ++k)
            if (mask & (1u << k)) e.push_back(k);
        out.emplace_back(std::move(e));
    }
    return out;
}

} // namespace loas::test
