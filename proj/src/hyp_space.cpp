// SPDX-License-Identifier: MIT
#include "loas/hyp_space.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "loas/errors.hpp"
#include "loas/parser.hpp"

namespace loas {

ModeDeclaration make_mode(Atom pattern) {
    ModeDeclaration m;
    m.predicate = pattern.name();
    for (Term t : pattern.args()) {
        if (t == Term::constant("v")) m.args.push_back(Placeholder::Var);
        else if (t == Term::constant("c")) m.args.push_back(Placeholder::Const);
        else throw ConfigError("mode argument must be v or c, got " + to_string(t) + " in " + to_string(pattern));
    }
    return m;
}

ModeDeclaration parse_mode(std::string_view text) { return make_mode(parse_atom(text)); }

std::string to_string(const ModeDeclaration& m) {
    std::string s = m.predicate;
    if (m.args.empty()) return s;
    s += '(';
    for (std::size_t i = 0; i < m.args.size(); ++i) {
        if (i) s += ',';
        s += m.args[i] == Placeholder::Var ? 'v' : 'c';
    }
    return s + ')';
}

bool atom_compatible(Atom a, const ModeDeclaration& m) {
    if (a.name() != m.predicate || a.arity() != m.args.size()) return false;
    for (std::size_t i = 0; i < m.args.size(); ++i) {
        Term t = a.args()[i];
        if (m.args[i] == Placeholder::Var ? !t.is_variable() : !(t.is_ground() && t.kind() != TermKind::Function))
            return false;
    }
    return true;
}

std::int64_t rule_cost(const Rule& r) {
    auto body = static_cast<std::int64_t>(r.literals().size());
    switch (r.kind) {
    case RuleKind::Normal: return 1 + body;
    case RuleKind::Constraint: return body;
    case RuleKind::Weak: return body;
    case RuleKind::Choice: {
        auto k = static_cast<std::int64_t>(r.head.size());
        // number of subsets with size in [lower, upper]
        std::int64_t subsets = 0, binom = 1;
        for (std::int64_t s = 0; s <= k; ++s) {
            if (s >= r.lower && s <= r.upper) subsets += binom;
            binom = binom * (k - s) / (s + 1);
        }
        return body + k * subsets;
    }
    }
    return body;
}

namespace {

Term rename(Term t, const std::unordered_map<Term, Term>& sigma) {
    if (t.is_variable()) {
        auto it = sigma.find(t);
        return it == sigma.end() ? t : it->second;
    }
    if (t.kind() != TermKind::Function || t.is_ground()) return t;
    std::vector<Term> args;
    for (Term a : t.args()) args.push_back(rename(a, sigma));
    return Term::function(t.name(), std::move(args));
}

BodyElement rename(const BodyElement& b, const std::unordered_map<Term, Term>& sigma) {
    if (auto* l = std::get_if<Literal>(&b)) return Literal{rename(l->atom, sigma), l->negated};
    if (auto* c = std::get_if<Comparison>(&b)) return Comparison{rename(c->lhs, sigma), c->op, rename(c->rhs, sigma)};
    if (auto* a = std::get_if<CountAggregate>(&b)) {
        CountAggregate out = *a;
        for (Atom& x : out.atoms) x = rename(x, sigma);
        return out;
    }
    SumAggregate out = std::get<SumAggregate>(b);
    for (auto& e : out.elements) {
        e.atom = rename(e.atom, sigma);
        e.weight = rename(e.weight, sigma);
    }
    out.bound = rename(out.bound, sigma);
    return out;
}

bool body_less(const BodyElement& a, const BodyElement& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    if (auto* la = std::get_if<Literal>(&a)) {
        const auto& lb = std::get<Literal>(b);
        if (la->negated != lb.negated) return !la->negated;
        return compare(la->atom, lb.atom) < 0;
    }
    return to_string(a) < to_string(b);
}

Rule rename_rule(const Rule& r, const std::unordered_map<Term, Term>& sigma) {
    Rule out = r;
    for (Atom& h : out.head) h = rename(h, sigma);
    std::sort(out.head.begin(), out.head.end(), TermLess{});
    for (auto& b : out.body) b = rename(b, sigma);
    std::sort(out.body.begin(), out.body.end(), body_less);
    if (r.is_weak()) {
        out.weight = rename(r.weight, sigma);
        out.level = rename(r.level, sigma);
        for (Term& t : out.terms) t = rename(t, sigma);
    }
    return out;
}

Term canonical_var(std::size_t i) { return Term::variable("V" + std::to_string(i + 1)); }

void collect_terms(Term t, std::vector<Term>& out) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

} // namespace

std::vector<Term> body_terms(const std::vector<BodyElement>& body) {
    std::vector<Term> out;
    for (const auto& b : body)
        if (auto* l = std::get_if<Literal>(&b))
            for (Term t : l->atom.args()) collect_terms(t, out);
    return out;
}

Rule canonical_rule(const Rule& r) {
    std::vector<Term> vars = rule_variables(r);
    std::vector<std::size_t> perm(vars.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<Rule> best;
    std::string best_key;
    do {
        std::unordered_map<Term, Term> sigma;
        for (std::size_t i = 0; i < vars.size(); ++i) sigma.emplace(vars[i], canonical_var(perm[i]));
        Rule cand = rename_rule(r, sigma);
        std::string key = to_string(cand);
        if (!best || key < best_key) {
            best = std::move(cand);
            best_key = std::move(key);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

bool alpha_equivalent(const Rule& a, const Rule& b) {
    return a.kind == b.kind && to_string(canonical_rule(a)) == to_string(canonical_rule(b));
}

SearchSpace::SearchSpace(std::vector<SpaceEntry> entries) : entries_(std::move(entries)) {
    std::unordered_set<Term> ids;
    for (const auto& e : entries_)
        if (!ids.insert(e.id).second) throw TaskError("duplicate search space id " + to_string(e.id));
}

std::optional<std::size_t> SearchSpace::find(Term id) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> SearchSpace::find_equivalent(const Rule& r) const {
    std::string key = to_string(canonical_rule(r));
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].rule.kind == r.kind && to_string(canonical_rule(entries_[i].rule)) == key) return i;
    return std::nullopt;
}

namespace {

class Generator {
public:
    Generator(const ModeBias& m, std::vector<SpaceEntry>& out, std::set<std::string>& seen)
        : m_(m), out_(out), seen_(seen) {
        for (std::size_t i = 0; i < m.max_vars; ++i) vars_.push_back(canonical_var(i));
    }

    void run() {
        if (!m_.heads.empty()) {
            auto pool = literals(m_.bodies);
            head_atoms_ = atoms(m_.heads);
            for_each_body(pool, 0, [&](const std::vector<BodyElement>& body) { emit_las(body); });
        }
        if (!m_.orderings.empty() && !m_.weights.empty() && m_.max_level > 0) {
            auto pool = literals(m_.orderings);
            for_each_body(pool, 1, [&](const std::vector<BodyElement>& body) { emit_weak(body); });
        }
    }

private:
    std::vector<Atom> atoms(const std::vector<ModeDeclaration>& decls) const {
        std::vector<Atom> out;
        for (const auto& d : decls) {
            std::vector<Term> args(d.args.size());
            expand(d, 0, args, out);
        }
        return out;
    }

    void expand(const ModeDeclaration& d, std::size_t i, std::vector<Term>& args, std::vector<Atom>& out) const {
        if (i == d.args.size()) {
            out.push_back(make_atom(d.predicate, args));
            return;
        }
        const auto& choices = d.args[i] == Placeholder::Var ? vars_ : m_.constants;
        for (Term t : choices) {
            args[i] = t;
            expand(d, i + 1, args, out);
        }
    }

    std::vector<Literal> literals(const std::vector<ModeDeclaration>& decls) const {
        std::vector<Literal> out;
        for (Atom a : atoms(decls)) {
            out.push_back({a, false});
            out.push_back({a, true});
        }
        return out;
    }

    template <class F>
    void for_each_body(const std::vector<Literal>& pool, std::size_t min_size, F&& f) {
        std::vector<std::size_t> pick;
        std::vector<BodyElement> body;
        auto rec = [&](auto& self, std::size_t start) -> void {
            if (pick.size() >= min_size) visit_body(pool, pick, f);
            if (pick.size() == m_.max_body) return;
            for (std::size_t i = start; i < pool.size(); ++i) {
                pick.push_back(i);
                self(self, i + 1);
                pick.pop_back();
            }
        };
        rec(rec, 0);
    }

    template <class F>
    void visit_body(const std::vector<Literal>& pool, const std::vector<std::size_t>& pick, F&& f) {
        std::vector<BodyElement> body;
        std::vector<Term> pos_vars, all_vars;
        std::size_t negs = 0;
        for (std::size_t i : pick) {
            if (pool[i].negated && ++negs > m_.max_neg) return;
            const Literal& l = pool[i];
            for (std::size_t j : pick)
                if (pool[j].atom == l.atom && pool[j].negated != l.negated) return;
            body.push_back(l);
            collect_variables(l.atom, all_vars);
            if (!l.negated) collect_variables(l.atom, pos_vars);
        }
        if (pos_vars.size() != all_vars.size()) return; // unsafe
        // Only V1..Vk with no gaps; other namings are renamings of these.
        for (Term v : all_vars) {
            auto idx = static_cast<std::size_t>(std::stoul(v.name().substr(1)));
            if (idx > all_vars.size()) return;
        }
        Rule c = canonical_rule(Rule::constraint(body));
        if (!bodies_.insert(to_string(c)).second) return;
        f(c.body);
    }

    void add(Rule r) {
        r = canonical_rule(r);
        if (!seen_.insert(to_string(r)).second) return;
        if (out_.size() >= m_.cap)
            throw SearchSpaceExplosion("search space exceeds " + std::to_string(m_.cap) + " rules");
        std::int64_t cost = rule_cost(r);
        out_.push_back({Term::constant("r" + std::to_string(out_.size() + 1)), std::move(r), cost});
    }

    // Heads whose variables all occur in the (positive) body.
    std::vector<Atom> safe_heads(const std::vector<BodyElement>& body) const {
        std::vector<Term> pos;
        for (const auto& b : body)
            if (auto* l = std::get_if<Literal>(&b); l && !l->negated) collect_variables(l->atom, pos);
        std::vector<Atom> out;
        for (Atom h : head_atoms_) {
            std::vector<Term> hv;
            collect_variables(h, hv);
            if (std::all_of(hv.begin(), hv.end(),
                            [&](Term v) { return std::find(pos.begin(), pos.end(), v) != pos.end(); }))
                out.push_back(h);
        }
        return out;
    }

    void emit_las(const std::vector<BodyElement>& body) {
        if (!body.empty()) add(Rule::constraint(body));
        auto heads = safe_heads(body);
        for (Atom h : heads) add(Rule::normal(h, body));
        if (m_.max_head == 0) return;
        std::vector<Atom> pick;
        auto rec = [&](auto& self, std::size_t start) -> void {
            if (!pick.empty()) {
                auto k = static_cast<std::int64_t>(pick.size());
                for (std::int64_t lo = 0; lo <= k; ++lo)
                    for (std::int64_t hi = lo; hi <= k; ++hi) add(Rule::choice(lo, hi, pick, body));
            }
            if (pick.size() == m_.max_head) return;
            for (std::size_t i = start; i < heads.size(); ++i) {
                pick.push_back(heads[i]);
                self(self, i + 1);
                pick.pop_back();
            }
        };
        rec(rec, 0);
    }

    void emit_weak(const std::vector<BodyElement>& body) {
        auto terms = body_terms(body);
        for (std::int64_t l = 0; l < m_.max_level; ++l)
            for (std::int64_t w : m_.weights) add(Rule::weak(body, Term::integer(w), Term::integer(l), terms));
    }

    const ModeBias& m_;
    std::vector<SpaceEntry>& out_;
    std::set<std::string>& seen_;
    std::vector<Term> vars_;
    std::vector<Atom> head_atoms_;
    std::set<std::string> bodies_;
};

} // namespace

SearchSpace build_search_space(const ModeBias& m) { return build_search_space({}, m); }

SearchSpace build_search_space(const std::vector<Rule>& listed, const ModeBias& m) {
    if (m.max_level < 1) throw ConfigError("maximum level must be positive");
    std::vector<SpaceEntry> out;
    std::set<std::string> seen;
    for (const auto& r : listed) {
        if (!seen.insert(to_string(canonical_rule(r))).second) continue;
        out.push_back({Term::constant("r" + std::to_string(out.size() + 1)), r, rule_cost(r)});
    }
    Generator(m, out, seen).run();
    return SearchSpace(std::move(out));
}

} // namespace loas
