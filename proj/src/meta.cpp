// SPDX-License-Identifier: MIT
#include "loas/meta.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "loas/errors.hpp"
#include "loas/grounder.hpp"
#include "loas/parser.hpp"

namespace loas::meta {

namespace {

const Term kX = Term::variable("X");

Atom wrap(std::string_view pred, Atom a, Term t) { return make_atom(pred, {a, t}); }

Term rename_var(Term t, Term from, Term to) {
    if (!t.valid() || t == from) return t == from ? to : t;
    if (t.kind() != TermKind::Function || t.is_ground()) return t;
    std::vector<Term> args;
    for (Term a : t.args()) args.push_back(rename_var(a, from, to));
    return Term::function(t.name(), std::move(args));
}

// Renames a rule variable that collides with the meta id variable t.
Rule avoid(const Rule& r, Term t) {
    if (!t.is_variable()) return r;
    auto vars = rule_variables(r);
    if (std::find(vars.begin(), vars.end(), t) == vars.end()) return r;
    Term fresh;
    for (int k = 1;; ++k) {
        fresh = Term::variable(t.name() + std::to_string(k));
        if (std::find(vars.begin(), vars.end(), fresh) == vars.end()) break;
    }
    auto ren = [&](Term x) { return rename_var(x, t, fresh); };
    Rule out = r;
    for (Atom& h : out.head) h = ren(h);
    for (auto& b : out.body) {
        if (auto* l = std::get_if<Literal>(&b)) l->atom = ren(l->atom);
        else if (auto* c = std::get_if<Comparison>(&b)) c->lhs = ren(c->lhs), c->rhs = ren(c->rhs);
        else if (auto* a = std::get_if<CountAggregate>(&b))
            for (Atom& x : a->atoms) x = ren(x);
        else {
            auto& s = std::get<SumAggregate>(b);
            for (auto& e : s.elements) e.atom = ren(e.atom), e.weight = ren(e.weight);
            s.bound = ren(s.bound);
        }
    }
    out.weight = ren(out.weight);
    out.level = ren(out.level);
    for (Term& x : out.terms) x = ren(x);
    return out;
}

// Body with positive literals wrapped in `pos`, negative ones and aggregate
// elements in `neg`.
std::vector<BodyElement> wrap_body(const std::vector<BodyElement>& body, std::string_view pos, std::string_view neg,
                                   Term t) {
    std::vector<BodyElement> out;
    for (const auto& b : body) {
        if (auto* l = std::get_if<Literal>(&b)) {
            out.push_back(Literal{wrap(l->negated ? neg : pos, l->atom, t), l->negated});
        } else if (auto* a = std::get_if<CountAggregate>(&b)) {
            CountAggregate c = *a;
            for (Atom& x : c.atoms) x = wrap(neg, x, t);
            out.push_back(c);
        } else if (auto* s = std::get_if<SumAggregate>(&b)) {
            SumAggregate c = *s;
            for (auto& e : c.elements) e.atom = wrap(neg, e.atom, t);
            out.push_back(c);
        } else {
            out.push_back(b);
        }
    }
    return out;
}

Program parse_meta(const std::string& text) { return parse_program(text, {.allow_reserved = true}); }

Atom id_atom(std::string_view pred, Term t) { return make_atom(pred, {t}); }

} // namespace

Program reify(const Program& p, std::string_view pred, Term t) {
    Program out;
    for (const auto& r0 : p.rules) {
        if (r0.is_weak()) throw Error("reify: weak constraints are encoded with meta_weak");
        Rule r = avoid(r0, t);
        Rule m = r;
        for (Atom& h : m.head) h = wrap(pred, h, t);
        m.body = wrap_body(r.body, pred, pred, t);
        out.add(std::move(m));
    }
    return out;
}

Program reify(const std::vector<Atom>& atoms, std::string_view pred, Term t) {
    Program out;
    for (Atom a : atoms) out.add(Rule::normal(wrap(pred, a, t)));
    return out;
}

Program append_body_atom(const Program& p, Atom a) {
    Program out = p;
    for (auto& r : out.rules) r.body.push_back(Literal{a, false});
    return out;
}

Program cover_program(const PartialInterpretation& e, Term t) {
    std::vector<BodyElement> body;
    for (Atom a : e.inc) body.push_back(Literal{wrap("in_as", a, t), false});
    for (Atom a : e.exc) body.push_back(Literal{wrap("in_as", a, t), true});
    Program out;
    out.add(Rule::normal(id_atom("cov", t), body));
    out.add(Rule::constraint({Literal{id_atom("cov", t), true}}));
    return out;
}

Rule meta_weak(const Rule& weak0, std::string_view p1, std::string_view p2, Term t) {
    if (!weak0.is_weak()) throw Error("meta_weak expects a weak constraint");
    Rule weak = avoid(weak0, t);
    Term args = weak.terms.empty() ? Term::constant("args") : Term::function("args", weak.terms);
    auto body = wrap_body(weak.body, p1, p1, t);
    body.push_back(Literal{id_atom(p2, t), false});
    return Rule::normal(make_atom("w", {weak.weight, weak.level, args, t}), std::move(body));
}

Program dominates_program(Term t1, Term t2) {
    std::string a = to_string(t1), b = to_string(t2);
    std::string ab = a + "," + b;
    return parse_meta("dom_lv(" + ab + ",L) :- lv(L), #sum{w(W,L,A," + a + ")=W, w(W,L,A," + b + ")=-W} < 0.\n" +
                      "non_dom_lv(" + ab + ",L) :- lv(L), #sum{w(W,L,A," + b + ")=W, w(W,L,A," + a +
                      ")=-W} < 0.\n" + "non_bef(" + ab + ",L) :- lv(L), lv(L2), L < L2, non_dom_lv(" + ab +
                      ",L2).\n" + "dom(" + ab + ") :- dom_lv(" + ab + ",L), not non_bef(" + ab + ",L).\n");
}

Program reductify(const Program& p) {
    Program out;
    Atom bot = make_atom(kBottom);
    for (const auto& r0 : p.rules) {
        if (r0.is_weak()) throw Error("reductify expects a program without weak constraints");
        Rule r = avoid(r0, kX);
        auto body = wrap_body(r.body, "mmr", "in_vs", kX);
        Literal vs{id_atom("vs", kX), false};
        switch (r.kind) {
        case RuleKind::Normal:
        case RuleKind::Constraint: {
            auto b = body;
            b.push_back(vs);
            Atom h = r.kind == RuleKind::Normal ? r.head.front() : bot;
            out.add(Rule::normal(wrap("mmr", h, kX), std::move(b)));
            break;
        }
        case RuleKind::Choice: {
            std::vector<Atom> in;
            for (Atom h : r.head) in.push_back(wrap("in_vs", h, kX));
            for (std::size_t i = 0; i < r.head.size(); ++i) {
                auto b = body;
                b.push_back(CountAggregate{r.lower, r.upper, in});
                b.push_back(Literal{in[i], false});
                b.push_back(vs);
                out.add(Rule::normal(wrap("mmr", r.head[i], kX), std::move(b)));
            }
            {
                auto b = body;
                b.push_back(CountAggregate{r.upper + 1, std::nullopt, in});
                b.push_back(vs);
                out.add(Rule::normal(wrap("mmr", bot, kX), std::move(b)));
            }
            if (r.lower > 0) {
                auto b = body;
                b.push_back(CountAggregate{std::nullopt, r.lower - 1, in});
                b.push_back(vs);
                out.add(Rule::normal(wrap("mmr", bot, kX), std::move(b)));
            }
            break;
        }
        case RuleKind::Weak: break;
        }
    }
    return out;
}

namespace {

const std::set<std::string, std::less<>> kReserved = {
    "in_as", "in_vs", "in_h", "w", "lv", "as", "vs", "cov", "v_i", "v_p",
    "violating", "dom", "dom_lv", "non_dom_lv", "non_bef", "mmr", "nas", "bot"};

void check_reserved(const Rule& r, const char* where) {
    auto check = [&](Atom a) {
        if (kReserved.count(a.name()))
            throw ReservedPredicateClash("predicate " + a.name() + " in " + where + " is reserved for the meta encoding");
    };
    for (Atom h : r.head) check(h);
    for (const auto& b : r.body) {
        if (auto* l = std::get_if<Literal>(&b)) check(l->atom);
        else if (auto* a = std::get_if<CountAggregate>(&b))
            for (Atom x : a->atoms) check(x);
        else if (auto* s = std::get_if<SumAggregate>(&b))
            for (const auto& e : s->elements) check(e.atom);
    }
}

} // namespace

MetaContext make_context(const LearningTask& t) {
    for (const auto& r : t.background.rules) check_reserved(r, "the background");
    for (const auto& e : t.space.entries()) check_reserved(e.rule, "the search space");
    MetaContext ctx;
    ctx.task = &t;
    for (std::size_t i = 0; i < t.positives.size(); ++i)
        ctx.positive_ids.push_back(Term::integer(static_cast<std::int64_t>(i + 1)));
    ctx.negative_id = Term::constant("n");
    auto next = static_cast<std::int64_t>(t.positives.size() + 1);
    for (const auto& o : t.orderings)
        if (o.kind == OrderingKind::Brave) {
            ctx.brave_ids.emplace_back(Term::integer(next), Term::integer(next + 1));
            next += 2;
        }
    std::set<std::int64_t> levels;
    bool symbolic = false;
    auto add_level = [&](const Rule& r) {
        if (!r.is_weak()) return;
        if (r.level.kind() == TermKind::Integer) levels.insert(r.level.value());
        else symbolic = true;
    };
    for (const auto& e : t.space.entries()) add_level(e.rule);
    for (const auto& r : t.background.rules) add_level(r);
    if (symbolic)
        for (const auto& r : ground(t.background).rules)
            if (r.is_weak() && r.level.kind() == TermKind::Integer) levels.insert(r.level.value());
    ctx.levels.assign(levels.begin(), levels.end());
    return ctx;
}

MetaProgram build_t_meta(const MetaContext& ctx) {
    const LearningTask& t = *ctx.task;
    MetaProgram mp;
    Program& out = mp.program;
    Atom as_x = id_atom("as", kX);

    for (const auto& r : t.background.rules) {
        if (r.is_weak()) out.add(meta_weak(r, "in_as", "as", kX));
        else out.append(append_body_atom(reify(Program{{r}}, "in_as", kX), as_x));
    }

    std::vector<Atom> in_h;
    for (std::size_t i = 0; i < t.space.size(); ++i) {
        const auto& e = t.space[i];
        Atom h = id_atom("in_h", e.id);
        mp.hyp_decode.emplace(e.id, i);
        in_h.push_back(h);
        if (e.rule.is_weak()) {
            out.append(append_body_atom(Program{{meta_weak(e.rule, "in_as", "as", kX)}}, h));
        } else {
            out.append(append_body_atom(append_body_atom(reify(Program{{e.rule}}, "in_as", kX), as_x), h));
        }
        out.add(Rule::weak({Literal{h, false}}, Term::integer(2 * e.cost), Term::integer(0), {e.id}));
    }
    if (!in_h.empty()) out.add(Rule::choice(0, static_cast<std::int64_t>(in_h.size()), in_h));

    for (std::size_t i = 0; i < t.positives.size(); ++i) {
        out.append(cover_program(t.positives[i], ctx.positive_ids[i]));
        out.add(Rule::normal(id_atom("as", ctx.positive_ids[i])));
    }

    Term n = ctx.negative_id;
    Atom violating = make_atom("violating");
    for (const auto& e : t.negatives) {
        std::vector<BodyElement> body;
        for (Atom a : e.inc) body.push_back(Literal{wrap("in_as", a, n), false});
        for (Atom a : e.exc) body.push_back(Literal{wrap("in_as", a, n), true});
        out.add(Rule::normal(make_atom("v_i"), body));
    }
    if (!t.negatives.empty()) {
        out.add(Rule::normal(id_atom("as", n)));
        out.add(Rule::normal(violating, {Literal{make_atom("v_i"), false}}));
    }
    out.add(Rule::weak({Literal{violating, true}}, Term::integer(1), Term::integer(0)));

    std::size_t brave = 0;
    bool cautious = false;
    for (const auto& o : t.orderings) {
        const auto& e1 = t.positives[t.positive_index(o.first)];
        const auto& e2 = t.positives[t.positive_index(o.second)];
        if (o.kind == OrderingKind::Brave) {
            auto [o1, o2] = ctx.brave_ids[brave++];
            out.add(Rule::normal(id_atom("as", o1)));
            out.add(Rule::normal(id_atom("as", o2)));
            out.append(cover_program(e1, o1));
            out.append(cover_program(e2, o2));
            out.append(dominates_program(o1, o2));
            out.add(Rule::constraint({Literal{make_atom("dom", {o1, o2}), true}}));
        } else {
            cautious = true;
            Term i1 = ctx.positive_ids[t.positive_index(o.first)];
            Term i2 = ctx.positive_ids[t.positive_index(o.second)];
            out.append(dominates_program(i1, i2));
            out.add(Rule::normal(make_atom("v_p", {i1, i2}), {Literal{make_atom("dom", {i1, i2}), true}}));
        }
    }
    for (auto l : ctx.levels) out.add(Rule::normal(id_atom("lv", Term::integer(l))));
    if (cautious) {
        out.append(parse_meta("v_p :- v_p(T1,T2).\nviolating :- v_p.\n"));
    }
    return mp;
}

MetaProgram build_vr_meta(const MetaContext& ctx, const std::vector<ViolatingReason>& vr) {
    const LearningTask& t = *ctx.task;
    MetaProgram mp;
    Program& out = mp.program;
    int next = 0;
    auto fresh = [&] { return Term::constant("v" + std::to_string(++next)); };
    for (const auto& r : vr) {
        if (auto* vi = std::get_if<ViolatingInterpretation>(&r)) {
            Term id = fresh();
            out.append(reify(vi->interpretation.atoms(), "in_vs", id));
            out.add(Rule::constraint({Literal{id_atom("nas", id), true}}));
            out.add(Rule::normal(id_atom("vs", id)));
        } else {
            const auto& vp = std::get<ViolatingPair>(r);
            Term a = fresh(), b = fresh();
            out.append(dominates_program(a, b));
            out.append(reify(vp.first.atoms(), "in_vs", a));
            out.append(reify(vp.second.atoms(), "in_vs", b));
            out.add(Rule::normal(id_atom("vs", a)));
            out.add(Rule::normal(id_atom("vs", b)));
            out.add(Rule::constraint({Literal{id_atom("nas", a), true}, Literal{id_atom("nas", b), true},
                                      Literal{make_atom("dom", {a, b}), true}}));
        }
    }

    out.append(reductify(t.background.non_weak()));
    out.append(parse_meta("nas(X) :- in_vs(A,X), not mmr(A,X).\nnas(X) :- not in_vs(A,X), mmr(A,X).\n"));
    for (std::size_t i = 0; i < t.space.size(); ++i) {
        const auto& e = t.space[i];
        Atom h = id_atom("in_h", e.id);
        mp.hyp_decode.emplace(e.id, i);
        if (e.rule.is_weak()) out.append(append_body_atom(Program{{meta_weak(e.rule, "in_vs", "vs", kX)}}, h));
        else out.append(append_body_atom(reductify(Program{{e.rule}}), h));
    }
    for (const auto& r : t.background.rules)
        if (r.is_weak()) out.add(meta_weak(r, "in_vs", "vs", kX));
    for (auto l : ctx.levels) out.add(Rule::normal(id_atom("lv", Term::integer(l))));
    return mp;
}

Decoded decode_meta_answer_set(const MetaContext& ctx, const Interpretation& a) {
    const LearningTask& t = *ctx.task;
    Decoded d;
    std::vector<std::size_t> entries;
    std::unordered_map<Term, std::vector<Atom>> in_as;
    bool vi = false;
    std::optional<std::pair<Term, Term>> vp;
    for (Atom x : a) {
        if (x.name() == "in_h" && x.arity() == 1) {
            auto i = t.space.find(x.args()[0]);
            if (!i) throw MalformedMetaModel("in_h names unknown rule " + to_string(x.args()[0]));
            entries.push_back(*i);
        } else if (x.name() == "in_as" && x.arity() == 2) {
            in_as[x.args()[1]].push_back(x.args()[0]);
        } else if (x.name() == "v_i" && x.arity() == 0) {
            vi = true;
        } else if (x.name() == "v_p" && x.arity() == 2 && !vp) {
            vp.emplace(x.args()[0], x.args()[1]);
        }
    }
    d.hypothesis = Hypothesis(std::move(entries));
    if (vp) {
        for (std::size_t o = 0; o < t.orderings.size(); ++o) {
            const auto& ord = t.orderings[o];
            if (ord.kind != OrderingKind::Cautious) continue;
            if (ctx.positive_ids[t.positive_index(ord.first)] == vp->first &&
                ctx.positive_ids[t.positive_index(ord.second)] == vp->second) {
                d.pair = ViolatingPair{Interpretation(in_as[vp->first]), Interpretation(in_as[vp->second]), o};
                break;
            }
        }
        if (!d.pair) throw MalformedMetaModel("v_p names no cautious ordering");
    }
    if (vi) d.reason = ViolatingInterpretation{Interpretation(in_as[ctx.negative_id])};
    else if (d.pair) d.reason = *d.pair;
    return d;
}

} // namespace loas::meta
