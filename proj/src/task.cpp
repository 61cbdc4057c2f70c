// SPDX-License-Identifier: MIT
#include "loas/task.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "loas/asp_solver.hpp"
#include "loas/errors.hpp"
#include "loas/grounder.hpp"
#include "loas/semantics.hpp"
#include "syntax.hpp"

namespace loas {

namespace {

std::vector<Atom> sorted_unique(std::vector<Atom> v) {
    std::sort(v.begin(), v.end(), TermLess{});
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool sorted_subset(const std::vector<Atom>& small, const std::vector<Atom>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end(), TermLess{});
}

} // namespace

PartialInterpretation::PartialInterpretation(Term id, std::vector<Atom> inc, std::vector<Atom> exc)
    : id(id), inc(sorted_unique(std::move(inc))), exc(sorted_unique(std::move(exc))) {}

std::size_t LearningTask::positive_index(Term id) const {
    for (std::size_t i = 0; i < positives.size(); ++i)
        if (positives[i].id == id) return i;
    throw TaskError("ordering refers to unknown positive example " + to_string(id));
}

void LearningTask::validate() const {
    std::unordered_set<Term> ids;
    for (const auto* set : {&positives, &negatives})
        for (const auto& e : *set) {
            if (!ids.insert(e.id).second) throw TaskError("duplicate example id " + to_string(e.id));
            std::vector<Atom> both;
            std::set_intersection(e.inc.begin(), e.inc.end(), e.exc.begin(), e.exc.end(), std::back_inserter(both),
                                  TermLess{});
            if (!both.empty())
                throw TaskError("example " + to_string(e.id) + " both includes and excludes " + to_string(both[0]));
            for (const auto* atoms : {&e.inc, &e.exc})
                for (Atom a : *atoms)
                    if (!a.is_ground()) throw TaskError("example " + to_string(e.id) + " has non-ground atom");
        }
    std::unordered_set<Term> oids;
    for (const auto& o : orderings) {
        if (!oids.insert(o.id).second) throw TaskError("duplicate ordering id " + to_string(o.id));
        positive_index(o.first);
        positive_index(o.second);
        if (o.kind == OrderingKind::Cautious && o.first == o.second)
            throw TaskError("cautious ordering " + to_string(o.id) + " relates an example to itself");
    }
}

Hypothesis::Hypothesis(std::vector<std::size_t> e) : entries(std::move(e)) {
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
}

std::int64_t cost(const SearchSpace& s, const Hypothesis& h) {
    std::int64_t c = 0;
    for (std::size_t i : h.entries) c += s[i].cost;
    return c;
}

Program rules(const SearchSpace& s, const Hypothesis& h) {
    Program p;
    for (std::size_t i : h.entries) p.add(s[i].rule);
    return p;
}

Hypothesis hypothesis_from_ids(const SearchSpace& s, const std::vector<Term>& ids) {
    std::vector<std::size_t> out;
    for (Term id : ids) {
        auto i = s.find(id);
        if (!i) throw TaskError("unknown rule id " + to_string(id));
        out.push_back(*i);
    }
    return Hypothesis(std::move(out));
}

Hypothesis hypothesis_from_rules(const SearchSpace& s, const Program& p) {
    std::vector<std::size_t> out;
    for (const auto& r : p.rules) {
        auto i = s.find_equivalent(r);
        if (!i) throw TaskError("rule not in the search space: " + to_string(r));
        out.push_back(*i);
    }
    return Hypothesis(std::move(out));
}

std::string to_string(const ViolatingReason& r) {
    if (auto* vi = std::get_if<ViolatingInterpretation>(&r)) return "interpretation " + to_string(vi->interpretation);
    const auto& vp = std::get<ViolatingPair>(r);
    return "pair " + to_string(vp.first) + " " + to_string(vp.second);
}

bool interpretation_extends(const Interpretation& a, const PartialInterpretation& e) {
    for (Atom x : e.inc)
        if (!a.contains(x)) return false;
    for (Atom x : e.exc)
        if (a.contains(x)) return false;
    return true;
}

bool partial_extends(const PartialInterpretation& e1, const PartialInterpretation& e2) {
    return sorted_subset(e2.inc, e1.inc) && sorted_subset(e2.exc, e1.exc);
}

bool respects_ordering(const Program& p, OrderingKind kind, const PartialInterpretation& e1,
                       const PartialInterpretation& e2) {
    auto as = enumerate_answer_sets(p);
    std::vector<WeakProfile> prof;
    for (const auto& a : as) prof.push_back(weak_profile(p, a));
    for (std::size_t i = 0; i < as.size(); ++i) {
        if (!interpretation_extends(as[i], e1)) continue;
        for (std::size_t j = 0; j < as.size(); ++j) {
            if (!interpretation_extends(as[j], e2)) continue;
            bool d = dominates(prof[i], prof[j]);
            if (kind == OrderingKind::Brave && d) return true;
            if (kind == OrderingKind::Cautious && !d) return false;
        }
    }
    return kind == OrderingKind::Cautious;
}

// ---------------------------------------------------------------------------
// TaskEvaluator

namespace {

using Profile = std::vector<std::pair<std::int64_t, std::int64_t>>; // (level, sum), level descending

// 1 if a dominates b, -1 if b dominates a, 0 otherwise.
int compare_profiles(const Profile& a, const Profile& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        std::int64_t la = i < a.size() ? a[i].first : INT64_MIN;
        std::int64_t lb = j < b.size() ? b[j].first : INT64_MIN;
        std::int64_t sa = 0, sb = 0;
        if (la >= lb) sa = a[i++].second;
        if (lb >= la) sb = b[j++].second;
        if (sa != sb) return sa < sb ? 1 : -1;
    }
    return 0;
}

} // namespace

struct TaskEvaluator::Impl {
    const LearningTask& task;
    Program base_weak;
    std::vector<std::size_t> ordering_first, ordering_second;

    std::map<WeakTuple, std::uint32_t> intern;
    std::vector<std::pair<std::int64_t, std::int64_t>> tuple_info; // (weight, level)

    struct Group {
        std::vector<Interpretation> as;
        std::vector<std::unique_ptr<InterpretationIndex>> index;
        std::vector<std::vector<std::size_t>> pos_ext;
        std::vector<std::optional<std::vector<std::uint32_t>>> base;
        std::unordered_map<std::size_t, std::vector<std::optional<std::vector<std::uint32_t>>>> rule;
    };
    std::map<std::vector<std::size_t>, std::unique_ptr<Group>> groups;

    explicit Impl(const LearningTask& t) : task(t) {
        for (const auto& r : t.background.rules)
            if (r.is_weak()) base_weak.add(r);
        for (const auto& o : t.orderings) {
            ordering_first.push_back(t.positive_index(o.first));
            ordering_second.push_back(t.positive_index(o.second));
        }
    }

    Group& group(const Hypothesis& h) {
        std::vector<std::size_t> key;
        for (std::size_t i : h.entries)
            if (!task.space[i].rule.is_weak()) key.push_back(i);
        auto it = groups.find(key);
        if (it != groups.end()) return *it->second;
        auto g = std::make_unique<Group>();
        Program p;
        for (const auto& r : task.background.rules)
            if (!r.is_weak()) p.add(r);
        for (std::size_t i : key) p.add(task.space[i].rule);
        g->as = enumerate_answer_sets(p);
        g->index.resize(g->as.size());
        g->base.resize(g->as.size());
        for (const auto& e : task.positives) {
            auto& ext = g->pos_ext.emplace_back();
            for (std::size_t a = 0; a < g->as.size(); ++a)
                if (interpretation_extends(g->as[a], e)) ext.push_back(a);
        }
        return *groups.emplace(std::move(key), std::move(g)).first->second;
    }

    const InterpretationIndex& index(Group& g, std::size_t a) {
        if (!g.index[a]) g.index[a] = std::make_unique<InterpretationIndex>(g.as[a]);
        return *g.index[a];
    }

    std::vector<std::uint32_t> intern_all(const std::vector<WeakTuple>& ts) {
        std::vector<std::uint32_t> out;
        for (const auto& t : ts) {
            auto [it, fresh] = intern.emplace(t, static_cast<std::uint32_t>(tuple_info.size()));
            if (fresh) tuple_info.emplace_back(t.weight, t.level);
            out.push_back(it->second);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    const std::vector<std::uint32_t>& base_tuples(Group& g, std::size_t a) {
        if (!g.base[a]) {
            std::vector<WeakTuple> ts;
            for (const auto& r : base_weak.rules) {
                auto more = index(g, a).weak_tuples(r);
                ts.insert(ts.end(), more.begin(), more.end());
            }
            g.base[a] = intern_all(ts);
        }
        return *g.base[a];
    }

    const std::vector<std::uint32_t>& rule_tuples(Group& g, std::size_t rule, std::size_t a) {
        auto& slot = g.rule[rule];
        if (slot.empty()) slot.resize(g.as.size());
        if (!slot[a]) slot[a] = intern_all(index(g, a).weak_tuples(task.space[rule].rule));
        return *slot[a];
    }

    Profile profile(Group& g, const Hypothesis& h, std::size_t a) {
        std::vector<std::uint32_t> ids = base_tuples(g, a);
        for (std::size_t i : h.entries) {
            if (!task.space[i].rule.is_weak()) continue;
            const auto& more = rule_tuples(g, i, a);
            ids.insert(ids.end(), more.begin(), more.end());
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        std::map<std::int64_t, std::int64_t, std::greater<>> sums;
        for (auto id : ids) sums[tuple_info[id].second] += tuple_info[id].first;
        Profile out;
        for (auto [l, s] : sums)
            if (s != 0) out.emplace_back(l, s);
        return out;
    }

    // Profiles computed during one judgement.
    struct Scratch {
        Impl& impl;
        Group& g;
        const Hypothesis& h;
        std::unordered_map<std::size_t, Profile> cache;
        const Profile& operator()(std::size_t a) {
            auto it = cache.find(a);
            if (it == cache.end()) it = cache.emplace(a, impl.profile(g, h, a)).first;
            return it->second;
        }
    };

    bool covers(Group& g) const {
        return std::all_of(g.pos_ext.begin(), g.pos_ext.end(), [](const auto& e) { return !e.empty(); });
    }

    bool respects(Group& g, Scratch& prof, std::size_t o) {
        const auto& x1 = g.pos_ext[ordering_first[o]];
        const auto& x2 = g.pos_ext[ordering_second[o]];
        bool brave = task.orderings[o].kind == OrderingKind::Brave;
        for (std::size_t i : x1)
            for (std::size_t j : x2) {
                bool d = compare_profiles(prof(i), prof(j)) > 0;
                if (brave && d) return true;
                if (!brave && !d) return false;
            }
        return !brave;
    }

    std::optional<std::size_t> find_as(const Group& g, const Interpretation& i) const {
        auto it = std::lower_bound(g.as.begin(), g.as.end(), i);
        if (it == g.as.end() || !(*it == i)) return std::nullopt;
        return static_cast<std::size_t>(it - g.as.begin());
    }
};

TaskEvaluator::TaskEvaluator(const LearningTask& t) : impl_(std::make_unique<Impl>(t)) {}
TaskEvaluator::~TaskEvaluator() = default;

const std::vector<Interpretation>& TaskEvaluator::answer_sets(const Hypothesis& h) { return impl_->group(h).as; }

bool TaskEvaluator::covers_positives(const Hypothesis& h) { return impl_->covers(impl_->group(h)); }

bool TaskEvaluator::respects(const Hypothesis& h, std::size_t ordering) {
    auto& g = impl_->group(h);
    Impl::Scratch prof{*impl_, g, h, {}};
    return impl_->respects(g, prof, ordering);
}

bool TaskEvaluator::is_positive(const Hypothesis& h) {
    auto& g = impl_->group(h);
    if (!impl_->covers(g)) return false;
    Impl::Scratch prof{*impl_, g, h, {}};
    for (std::size_t o = 0; o < impl_->task.orderings.size(); ++o)
        if (impl_->task.orderings[o].kind == OrderingKind::Brave && !impl_->respects(g, prof, o)) return false;
    return true;
}

std::optional<ViolatingReason> TaskEvaluator::violating_reason(const Hypothesis& h) {
    auto& g = impl_->group(h);
    const auto& t = impl_->task;
    for (const auto& a : g.as)
        for (const auto& e : t.negatives)
            if (interpretation_extends(a, e)) return ViolatingInterpretation{a};
    Impl::Scratch prof{*impl_, g, h, {}};
    for (std::size_t o = 0; o < t.orderings.size(); ++o) {
        if (t.orderings[o].kind != OrderingKind::Cautious) continue;
        for (std::size_t i : g.pos_ext[impl_->ordering_first[o]])
            for (std::size_t j : g.pos_ext[impl_->ordering_second[o]])
                if (compare_profiles(prof(i), prof(j)) <= 0) return ViolatingPair{g.as[i], g.as[j], o};
    }
    return std::nullopt;
}

bool TaskEvaluator::is_remaining(const Hypothesis& h, const ViolatingReason& r) {
    auto& g = impl_->group(h);
    if (auto* vi = std::get_if<ViolatingInterpretation>(&r)) return !impl_->find_as(g, vi->interpretation);
    const auto& vp = std::get<ViolatingPair>(r);
    auto i = impl_->find_as(g, vp.first), j = impl_->find_as(g, vp.second);
    if (!i || !j) return true;
    Impl::Scratch prof{*impl_, g, h, {}};
    return compare_profiles(prof(*i), prof(*j)) > 0;
}

bool TaskEvaluator::is_remaining(const Hypothesis& h, const std::vector<ViolatingReason>& vr) {
    return std::all_of(vr.begin(), vr.end(), [&](const ViolatingReason& r) { return is_remaining(h, r); });
}

std::size_t TaskEvaluator::groups() const { return impl_->groups.size(); }

bool is_positive_hypothesis(const LearningTask& t, const Hypothesis& h) { return TaskEvaluator(t).is_positive(h); }

std::optional<ViolatingReason> find_violating_reason(const LearningTask& t, const Hypothesis& h) {
    return TaskEvaluator(t).violating_reason(h);
}

bool is_remaining_hypothesis(const LearningTask& t, const Hypothesis& h, const std::vector<ViolatingReason>& vr) {
    return TaskEvaluator(t).is_remaining(h, vr);
}

bool is_inductive_solution(const LearningTask& t, const Hypothesis& h) {
    TaskEvaluator ev(t);
    if (!ev.covers_positives(h)) return false;
    for (std::size_t o = 0; o < t.orderings.size(); ++o)
        if (!ev.respects(h, o)) return false;
    for (const auto& a : ev.answer_sets(h))
        for (const auto& e : t.negatives)
            if (interpretation_extends(a, e)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Consistency conditions

namespace {

// Some cycle in the digraph over example ids, as a list of ids.
std::optional<std::vector<Term>> find_cycle(const std::vector<std::pair<Term, Term>>& edges) {
    std::unordered_map<Term, std::vector<Term>> adj;
    for (auto [a, b] : edges) adj[a].push_back(b);
    std::unordered_map<Term, int> colour; // 0 new, 1 on stack, 2 done
    std::vector<Term> stack;
    std::optional<std::vector<Term>> found;
    std::function<void(Term)> dfs = [&](Term u) {
        colour[u] = 1;
        stack.push_back(u);
        for (Term v : adj[u]) {
            if (found) return;
            if (colour[v] == 1) {
                auto it = std::find(stack.begin(), stack.end(), v);
                found = std::vector<Term>(it, stack.end());
                return;
            }
            if (colour[v] == 0) dfs(v);
        }
        stack.pop_back();
        colour[u] = 2;
    };
    for (auto [a, b] : edges)
        if (!found && colour[a] == 0) dfs(a);
    return found;
}

std::string cycle_text(const std::vector<Term>& c) {
    std::string s;
    for (Term t : c) s += to_string(t) + " -> ";
    return s + to_string(c.front());
}

} // namespace

bool ConditionReport::unsatisfiable() const {
    return std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.necessary && !c.holds; });
}

ConditionReport check_task_conditions(const LearningTask& t) {
    ConditionReport rep;
    ConditionCheck n1{"necessary (i)", true, true, "every positive example has a model of B extending it"};
    for (const auto& e : t.positives)
        if (!has_classical_model_extending(t.background, e.inc, e.exc)) {
            n1.holds = false;
            n1.detail = "no model of B extends positive example " + to_string(e.id);
            break;
        }
    ConditionCheck n2{"necessary (ii)", true, true, "no positive example extends a negative example"};
    for (const auto& p : t.positives)
        for (const auto& n : t.negatives)
            if (n2.holds && partial_extends(p, n)) {
                n2.holds = false;
                n2.detail = "positive example " + to_string(p.id) + " extends negative example " + to_string(n.id);
            }
    std::vector<std::pair<Term, Term>> cautious, all;
    for (const auto& o : t.orderings) {
        all.emplace_back(o.first, o.second);
        if (o.kind == OrderingKind::Cautious) cautious.emplace_back(o.first, o.second);
    }
    ConditionCheck n3{"necessary (iii)", true, true, "no cyclic chain of cautious orderings"};
    if (auto c = find_cycle(cautious)) {
        n3.holds = false;
        n3.detail = "cyclic chain of cautious orderings: " + cycle_text(*c);
    }
    ConditionCheck s1{"sufficient (i)", false, n1.holds, n1.detail};
    ConditionCheck s2{"sufficient (ii)", false, true, "no positive example extends another example"};
    for (std::size_t i = 0; i < t.positives.size() && s2.holds; ++i) {
        for (std::size_t j = 0; j < t.positives.size() && s2.holds; ++j)
            if (i != j && partial_extends(t.positives[i], t.positives[j])) {
                s2.holds = false;
                s2.detail = "positive example " + to_string(t.positives[i].id) + " extends " +
                            to_string(t.positives[j].id);
            }
        for (const auto& n : t.negatives)
            if (s2.holds && partial_extends(t.positives[i], n)) {
                s2.holds = false;
                s2.detail = "positive example " + to_string(t.positives[i].id) + " extends " + to_string(n.id);
            }
    }
    ConditionCheck s3{"sufficient (iii)", false, true, "no cyclic chain of ordering examples"};
    if (auto c = find_cycle(all)) {
        s3.holds = false;
        s3.detail = "cyclic chain of orderings: " + cycle_text(*c);
    }
    rep.checks = {n1, n2, n3, s1, s2, s3};
    return rep;
}

std::string to_string(const ConditionReport& r) {
    std::string s;
    for (const auto& c : r.checks)
        s += c.name + ": " + (c.holds ? "ok" : (c.necessary ? "FAILED" : "not met")) + " (" + c.detail + ")\n";
    if (r.unsatisfiable()) s += "UNSATISFIABLE\n";
    return s;
}

// ---------------------------------------------------------------------------
// Task files

namespace {

using syntax::Tok;

std::int64_t int_arg(syntax::Parser& p, const syntax::Token& at) {
    Term t = p.term();
    if (t.kind() != TermKind::Integer) p.fail(at, at.text + " expects an integer");
    return t.value();
}

void rule_block(syntax::Parser& p, std::vector<Rule>& out) {
    p.expect(Tok::LBrace, "'{'");
    while (!p.at(Tok::RBrace)) {
        if (p.at(Tok::End)) p.fail(p.peek(), "unterminated block");
        const auto& start = p.peek();
        std::size_t line = start.line, col = start.column;
        Rule r = p.rule();
        try {
            check_safety(r, out.size());
        } catch (const SafetyError& e) {
            throw SyntaxError(line, col, e.what());
        }
        out.push_back(std::move(r));
    }
    p.expect(Tok::RBrace, "'}'");
}

void example(syntax::Parser& p, std::vector<PartialInterpretation>& out, const char* prefix) {
    p.expect(Tok::LParen, "'('");
    Term id = Term::constant(prefix + std::to_string(out.size() + 1));
    if (!p.at(Tok::LBrace)) {
        id = p.term();
        p.expect(Tok::Comma, "','");
    }
    auto inc = p.brace_atoms();
    p.expect(Tok::Comma, "','");
    auto exc = p.brace_atoms();
    p.expect(Tok::RParen, "')'");
    p.expect(Tok::Dot, "'.'");
    out.emplace_back(id, std::move(inc), std::move(exc));
}

} // namespace

TaskSpec parse_task_spec(std::string_view text) {
    syntax::Parser p(text, {});
    TaskSpec spec;
    std::vector<Rule> background;
    while (!p.at(Tok::End)) {
        const syntax::Token t = p.peek();
        if (t.kind != Tok::Directive) {
            Rule r = p.rule();
            try {
                check_safety(r, background.size());
            } catch (const SafetyError& e) {
                throw SyntaxError(t.line, t.column, e.what());
            }
            background.push_back(std::move(r));
            continue;
        }
        p.next();
        const std::string& d = t.text;
        if (d == "#background") {
            rule_block(p, background);
            continue;
        }
        if (d == "#space") {
            rule_block(p, spec.listed);
            continue;
        }
        if (d == "#pos") {
            example(p, spec.positives, "p");
            continue;
        }
        if (d == "#neg") {
            example(p, spec.negatives, "n");
            continue;
        }
        p.expect(Tok::LParen, "'('");
        if (d == "#brave_ordering" || d == "#cautious_ordering") {
            std::vector<Term> args{p.term()};
            while (p.accept(Tok::Comma)) args.push_back(p.term());
            if (args.size() < 2 || args.size() > 3) p.fail(t, d + " takes two example ids and an optional ordering id");
            OrderingExample o;
            o.kind = d == "#brave_ordering" ? OrderingKind::Brave : OrderingKind::Cautious;
            o.id = args.size() == 3 ? args[0] : Term::constant("o" + std::to_string(spec.orderings.size() + 1));
            o.first = args[args.size() - 2];
            o.second = args[args.size() - 1];
            spec.orderings.push_back(o);
        } else if (d == "#modeh" || d == "#modeb" || d == "#modeo") {
            Atom a = p.atom();
            ModeDeclaration m;
            try {
                m = make_mode(a);
            } catch (const ConfigError& e) {
                p.fail(t, e.what());
            }
            auto& v = d == "#modeh" ? spec.bias.heads : d == "#modeb" ? spec.bias.bodies : spec.bias.orderings;
            v.push_back(m);
        } else if (d == "#weight") {
            spec.bias.weights.push_back(int_arg(p, t));
        } else if (d == "#constant") {
            Term c = p.term();
            if (!c.is_ground()) p.fail(t, "#constant expects a ground term");
            spec.bias.constants.push_back(c);
            spec.constants_given = true;
        } else if (d == "#maxlevel" || d == "#maxbody" || d == "#maxvars" || d == "#maxhead" || d == "#maxneg") {
            std::int64_t n = int_arg(p, t);
            if (n < (d == "#maxhead" || d == "#maxneg" ? 0 : 1)) p.fail(t, d + " out of range");
            if (d == "#maxlevel") spec.bias.max_level = n;
            else if (d == "#maxbody") spec.bias.max_body = static_cast<std::size_t>(n);
            else if (d == "#maxvars") spec.bias.max_vars = static_cast<std::size_t>(n);
            else if (d == "#maxhead") spec.bias.max_head = static_cast<std::size_t>(n);
            else spec.bias.max_neg = static_cast<std::size_t>(n);
        } else {
            p.fail(t, "unknown directive '" + d + "'");
        }
        p.expect(Tok::RParen, "')'");
        p.expect(Tok::Dot, "'.'");
    }
    spec.background.rules = std::move(background);
    return spec;
}

LearningTask make_task(const TaskSpec& spec) {
    LearningTask t;
    t.background = spec.background;
    t.positives = spec.positives;
    t.negatives = spec.negatives;
    t.orderings = spec.orderings;
    ModeBias bias = spec.bias;
    if (!spec.constants_given) {
        Program carrier = spec.background;
        for (const auto* set : {&spec.positives, &spec.negatives})
            for (const auto& e : *set) {
                for (Atom a : e.inc) carrier.add(Rule::normal(a));
                for (Atom a : e.exc) carrier.add(Rule::normal(a));
            }
        for (Term c : program_constants(carrier))
            if (c.kind() != TermKind::Function) bias.constants.push_back(c);
    }
    if (!bias.orderings.empty() && bias.weights.empty()) bias.weights = {1};
    t.space = build_search_space(spec.listed, bias);
    t.validate();
    return t;
}

LearningTask parse_task(std::string_view text) { return make_task(parse_task_spec(text)); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LearningTask load_task(const std::string& path) { return parse_task(read_file(path)); }

} // namespace loas
