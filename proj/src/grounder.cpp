// SPDX-License-Identifier: MIT
#include "loas/grounder.hpp"

#include <set>

#include "loas/errors.hpp"
#include "matching.hpp"

namespace loas {

using detail::AtomStore;
using detail::Binding;
using detail::VarTable;

namespace {

struct CompiledRule {
    const Rule* rule = nullptr;
    VarTable vt;
    std::vector<Atom> pos;
    std::vector<const Comparison*> cmps;
    std::vector<std::vector<int>> plans; // plans[i] starts with positive literal i
    bool ground = false;
    bool has_aggregates = false;
};

void global_variables(const Rule& r, VarTable& vt) {
    std::vector<Term> vs;
    for (const auto& b : r.body)
        if (auto* l = std::get_if<Literal>(&b); l && !l->negated) collect_variables(l->atom, vs);
    for (Term v : vs) vt.add(v);
}

std::vector<int> make_plan(const CompiledRule& cr, int first) {
    std::vector<int> plan{first};
    std::vector<bool> used(cr.pos.size(), false);
    used[first] = true;
    std::vector<Term> bound;
    collect_variables(cr.pos[first], bound);
    for (std::size_t step = 1; step < cr.pos.size(); ++step) {
        int best = -1, best_score = -1;
        for (std::size_t j = 0; j < cr.pos.size(); ++j) {
            if (used[j]) continue;
            std::vector<Term> vs;
            collect_variables(cr.pos[j], vs);
            int score = 0;
            for (Term v : vs)
                if (std::find(bound.begin(), bound.end(), v) != bound.end()) ++score;
            if (vs.empty()) score = 1000;
            if (score > best_score) {
                best = static_cast<int>(j);
                best_score = score;
            }
        }
        used[best] = true;
        plan.push_back(best);
        collect_variables(cr.pos[best], bound);
    }
    return plan;
}

std::uint32_t max_arg_depth(Atom a) {
    std::uint32_t d = 0;
    for (Term t : a.args()) d = std::max(d, t.depth());
    return d;
}

class Grounder {
public:
    Grounder(const Program& p, const GroundOptions& opt) : program_(p), opt_(opt) {
        compiled_.reserve(p.rules.size());
        instances_.resize(p.rules.size());
        for (const auto& r : p.rules) {
            CompiledRule cr;
            cr.rule = &r;
            cr.ground = r.is_ground();
            global_variables(r, cr.vt);
            for (const auto& b : r.body) {
                if (auto* l = std::get_if<Literal>(&b); l && !l->negated) cr.pos.push_back(l->atom);
                if (auto* c = std::get_if<Comparison>(&b)) cr.cmps.push_back(c);
                if (std::holds_alternative<CountAggregate>(b) || std::holds_alternative<SumAggregate>(b))
                    cr.has_aggregates = true;
            }
            for (std::size_t i = 0; i < cr.pos.size(); ++i) cr.plans.push_back(make_plan(cr, static_cast<int>(i)));
            compiled_.push_back(std::move(cr));
        }
    }

    Program run() {
        for (Atom s : opt_.seeds) store_.add(s);
        for (std::size_t i = 0; i < compiled_.size(); ++i) {
            auto& cr = compiled_[i];
            if (!cr.pos.empty()) continue;
            Binding b(cr.vt.size());
            emit(i, b);
        }
        while (store_.next_round()) {
            for (std::size_t i = 0; i < compiled_.size(); ++i) {
                auto& cr = compiled_[i];
                for (std::size_t d = 0; d < cr.pos.size(); ++d) {
                    const auto* rel = store_.relation(cr.pos[d]);
                    if (!rel || rel->delta_end == rel->old_end) continue;
                    Binding b(cr.vt.size());
                    std::vector<int> trail;
                    join(i, cr.plans[d], 0, static_cast<int>(d), b, trail);
                }
            }
        }
        Program out;
        for (std::size_t i = 0; i < instances_.size(); ++i) {
            for (auto& r : instances_[i]) {
                if (compiled_[i].has_aggregates && !compiled_[i].ground) expand_aggregates(r);
                out.add(std::move(r));
            }
        }
        return out;
    }

private:
    void join(std::size_t ri, const std::vector<int>& plan, std::size_t step, int delta, Binding& b,
              std::vector<int>& trail) {
        auto& cr = compiled_[ri];
        if (step == plan.size()) {
            emit(ri, b);
            return;
        }
        int li = plan[step];
        Atom pat = cr.pos[li];
        const auto* rel = store_.relation(pat);
        if (!rel) return;
        std::uint32_t lo = 0, hi = rel->delta_end;
        if (li == delta) lo = rel->old_end;
        else if (li < delta) hi = rel->old_end;
        detail::for_candidates(*rel, pat, cr.vt, b, lo, hi, [&](std::uint32_t k) {
            std::size_t mark = trail.size();
            if (detail::match(pat, rel->atoms[k], cr.vt, b, trail)) join(ri, plan, step + 1, delta, b, trail);
            detail::undo(b, trail, mark);
        });
    }

    void add_head(Atom a) {
        if (max_arg_depth(a) > opt_.max_depth)
            throw NonFiniteGrounding("atom " + to_string(a) + " exceeds the function nesting bound " +
                                     std::to_string(opt_.max_depth));
        store_.add(a);
    }

    void emit(std::size_t ri, const Binding& b) {
        auto& cr = compiled_[ri];
        const Rule& src = *cr.rule;
        for (const Comparison* c : cr.cmps) {
            Term l = detail::substitute(c->lhs, cr.vt, b), r = detail::substitute(c->rhs, cr.vt, b);
            if (!evaluate(c->op, l, r)) return;
        }
        if (cr.ground) {
            if (src.kind == RuleKind::Normal || src.kind == RuleKind::Choice)
                for (Atom h : src.head) add_head(h);
            instances_[ri].push_back(src);
            return;
        }
        Rule r;
        r.kind = src.kind;
        r.lower = src.lower;
        r.upper = src.upper;
        for (Atom h : src.head) r.head.push_back(detail::substitute(h, cr.vt, b));
        for (const auto& el : src.body) {
            if (auto* l = std::get_if<Literal>(&el)) {
                r.body.push_back(Literal{detail::substitute(l->atom, cr.vt, b), l->negated});
            } else if (auto* a = std::get_if<CountAggregate>(&el)) {
                CountAggregate g = *a;
                for (Atom& x : g.atoms) x = detail::substitute(x, cr.vt, b);
                r.body.push_back(std::move(g));
            } else if (auto* s = std::get_if<SumAggregate>(&el)) {
                SumAggregate g = *s;
                for (auto& e : g.elements) {
                    e.atom = detail::substitute(e.atom, cr.vt, b);
                    e.weight = detail::substitute(e.weight, cr.vt, b);
                }
                g.bound = detail::substitute(g.bound, cr.vt, b);
                r.body.push_back(std::move(g));
            }
        }
        if (r.kind == RuleKind::Weak) {
            r.weight = detail::substitute(src.weight, cr.vt, b);
            r.level = detail::substitute(src.level, cr.vt, b);
            for (Term t : src.terms) r.terms.push_back(detail::substitute(t, cr.vt, b));
            if (!r.weight.is_integer() || !r.level.is_integer())
                throw GroundingError("weak constraint weight and level must be integers, got [" +
                                     to_string(r.weight) + "@" + to_string(r.level) + "]");
        }
        if (r.kind == RuleKind::Normal || r.kind == RuleKind::Choice)
            for (Atom h : r.head) add_head(h);
        instances_[ri].push_back(std::move(r));
    }

    void expand_aggregates(Rule& r) {
        for (auto& el : r.body) {
            if (auto* a = std::get_if<CountAggregate>(&el)) {
                std::vector<Atom> keep;
                for (Atom x : a->atoms)
                    if (store_.contains(x)) keep.push_back(x);
                a->atoms = std::move(keep);
            } else if (auto* s = std::get_if<SumAggregate>(&el)) {
                if (!s->bound.is_integer())
                    throw GroundingError("#sum bound must be an integer, got " + to_string(s->bound));
                std::vector<SumElement> out;
                std::set<std::pair<Term, std::int64_t>, PairLess> seen;
                for (const auto& e : s->elements) expand_element(e, out, seen);
                s->elements = std::move(out);
            }
        }
    }

    struct PairLess {
        bool operator()(const std::pair<Term, std::int64_t>& a, const std::pair<Term, std::int64_t>& b) const {
            int c = compare(a.first, b.first);
            return c != 0 ? c < 0 : a.second < b.second;
        }
    };

    void expand_element(const SumElement& e, std::vector<SumElement>& out,
                        std::set<std::pair<Term, std::int64_t>, PairLess>& seen) {
        VarTable vt;
        std::vector<Term> vs;
        collect_variables(e.atom, vs);
        collect_variables(e.weight, vs);
        for (Term v : vs) vt.add(v);
        auto push = [&](Atom a, Term w) {
            if (!w.is_integer()) throw GroundingError("#sum weight must be an integer, got " + to_string(w));
            std::int64_t v = e.negate ? -w.value() : w.value();
            if (seen.insert({a, v}).second) out.push_back(SumElement{a, Term::integer(v), false});
        };
        if (e.atom.is_ground()) {
            if (store_.contains(e.atom)) push(e.atom, e.weight);
            return;
        }
        const auto* rel = store_.relation(e.atom);
        if (!rel) return;
        Binding b(vt.size());
        std::vector<int> trail;
        auto n = static_cast<std::uint32_t>(rel->atoms.size());
        detail::for_candidates(*rel, e.atom, vt, b, 0, n, [&](std::uint32_t k) {
            std::size_t mark = trail.size();
            if (detail::match(e.atom, rel->atoms[k], vt, b, trail)) push(rel->atoms[k], detail::substitute(e.weight, vt, b));
            detail::undo(b, trail, mark);
        });
    }

    const Program& program_;
    GroundOptions opt_;
    std::vector<CompiledRule> compiled_;
    std::vector<std::vector<Rule>> instances_;
    AtomStore store_;
};

} // namespace

Program ground(const Program& p, const GroundOptions& options) { return Grounder(p, options).run(); }

Program ground_over_domain(const Program& p, const std::vector<Term>& domain, std::size_t max_instances) {
    Program out;
    std::size_t total = 0;
    for (const auto& r : p.rules) {
        for (const auto& b : r.body)
            if (std::holds_alternative<SumAggregate>(b))
                throw GroundingError("domain grounding does not support #sum aggregates");
        auto vars = rule_variables(r);
        VarTable vt(vars);
        Binding b(vars.size());
        std::vector<std::size_t> idx(vars.size(), 0);
        if (!vars.empty() && domain.empty()) continue;
        while (true) {
            for (std::size_t k = 0; k < vars.size(); ++k) b[k] = domain[idx[k]];
            bool ok = true;
            Rule g = r;
            for (Atom& h : g.head) h = detail::substitute(h, vt, b);
            std::vector<BodyElement> body;
            for (const auto& el : r.body) {
                if (auto* l = std::get_if<Literal>(&el)) {
                    body.push_back(Literal{detail::substitute(l->atom, vt, b), l->negated});
                } else if (auto* c = std::get_if<Comparison>(&el)) {
                    if (!evaluate(c->op, detail::substitute(c->lhs, vt, b), detail::substitute(c->rhs, vt, b))) ok = false;
                } else if (auto* a = std::get_if<CountAggregate>(&el)) {
                    CountAggregate ga = *a;
                    for (Atom& x : ga.atoms) x = detail::substitute(x, vt, b);
                    body.push_back(std::move(ga));
                }
            }
            if (ok) {
                g.body = std::move(body);
                if (g.kind == RuleKind::Weak) {
                    g.weight = detail::substitute(r.weight, vt, b);
                    g.level = detail::substitute(r.level, vt, b);
                    for (Term& t : g.terms) t = detail::substitute(t, vt, b);
                }
                if (++total > max_instances)
                    throw GroundingError("domain grounding exceeds " + std::to_string(max_instances) + " instances");
                out.add(std::move(g));
            }
            std::size_t k = 0;
            while (k < vars.size() && ++idx[k] == domain.size()) idx[k++] = 0;
            if (k == vars.size()) break;
        }
    }
    return out;
}

namespace {
void collect_ground_subterms(Term t, std::set<Term, TermLess>& out) {
    if (t.is_ground()) out.insert(t);
    for (Term a : t.args()) collect_ground_subterms(a, out);
}

void collect_atom(Atom a, std::set<Term, TermLess>& out) {
    for (Term t : a.args()) collect_ground_subterms(t, out);
}
} // namespace

std::vector<Term> program_constants(const Program& p) {
    std::set<Term, TermLess> out;
    for (const auto& r : p.rules) {
        for (Atom h : r.head) collect_atom(h, out);
        for (const auto& b : r.body) {
            if (auto* l = std::get_if<Literal>(&b)) collect_atom(l->atom, out);
            if (auto* c = std::get_if<CountAggregate>(&b))
                for (Atom x : c->atoms) collect_atom(x, out);
            if (auto* c = std::get_if<Comparison>(&b)) {
                collect_ground_subterms(c->lhs, out);
                collect_ground_subterms(c->rhs, out);
            }
        }
    }
    return {out.begin(), out.end()};
}

} // namespace loas
