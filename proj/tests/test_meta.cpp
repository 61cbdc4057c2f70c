// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "loas/asp_solver.hpp"
#include "loas/errors.hpp"
#include "loas/meta.hpp"
#include "loas/parser.hpp"
#include "loas/semantics.hpp"
#include "appendix_goldens.hpp"
#include "oracle.hpp"

using namespace loas;
using namespace loas::meta;
using loas::test::appendix_vr;
using loas::test::golden_t_meta;
using loas::test::golden_vr_meta;
using loas::test::normalized;

namespace {

std::string task_path(const std::string& name) { return std::string(LOAS_TASKS_DIR) + "/" + name + ".task"; }

Program P(const std::string& text) { return parse_program(text, {.allow_reserved = true, .check_safety = false}); }

void expect_same_rules(const Program& got, const Program& want) {
    auto g = normalized(got), w = normalized(want);
    for (const auto& r : g) EXPECT_TRUE(w.count(r)) << "unexpected: " << r;
    for (const auto& r : w) EXPECT_TRUE(g.count(r)) << "missing: " << r;
}

std::vector<Atom> atoms(const std::string& text) {
    std::vector<Atom> out;
    for (const auto& r : P(text).rules) out.push_back(r.head.front());
    return out;
}

Interpretation I(const std::string& text) { return Interpretation(atoms(text)); }

// "{ a, f(b,c), ... }" from an answer-set listing.
Interpretation listing(const std::string& text) {
    std::string facts;
    int depth = 0;
    for (char c : text) {
        if (c == '{' || c == '}') continue;
        if (c == '(') ++depth;
        if (c == ')') --depth;
        facts += (c == ',' && depth == 0) ? '.' : c;
    }
    return I(facts + ".");
}

Interpretation unique_answer_set(const Program& p) {
    auto as = enumerate_answer_sets(p);
    EXPECT_EQ(as.size(), 1u);
    return as.empty() ? Interpretation{} : as.front();
}

} // namespace

TEST(Combinators, ReifyAndAppend) {
    expect_same_rules(reify(P("p :- not q."), "in_as", Term::variable("X")), P("in_as(p,X) :- not in_as(q,X)."));
    EXPECT_TRUE(reify(Program{}, "in_as", Term::variable("X")).rules.empty());
    expect_same_rules(reify(atoms("a. f(b)."), "in_vs", Term::constant("v1")), P("in_vs(a,v1). in_vs(f(b),v1)."));
    expect_same_rules(reify(P("1 {a; b} 2 :- c."), "in_as", Term::variable("X")),
                      P("1 {in_as(a,X); in_as(b,X)} 2 :- in_as(c,X)."));
    expect_same_rules(append_body_atom(P("f."), parse_atom("a")), P("f :- a."));
    EXPECT_TRUE(append_body_atom(Program{}, parse_atom("a")).rules.empty());
    EXPECT_THROW(reify(P(":~ a.[1@1]"), "in_as", Term::variable("X")), Error);
}

TEST(Combinators, IdVariableAvoidsRuleVariables) {
    auto r = reify(P("p(X) :- q(X)."), "in_as", Term::variable("X"));
    expect_same_rules(r, P("in_as(p(X1),X) :- in_as(q(X1),X)."));
}

TEST(Combinators, CoverGroundsToUniqueAnswerSet) {
    Term x = Term::variable("X"), as1 = Term::constant("as1"), as2 = Term::constant("as2");
    PartialInterpretation i1(Term::constant("i1"), atoms("p."), {});
    PartialInterpretation i2(Term::constant("i2"), {}, atoms("p."));
    expect_same_rules(cover_program(i1, as1), P("cov(as1) :- in_as(p,as1). :- not cov(as1)."));
    expect_same_rules(cover_program(i2, as2), P("cov(as2) :- not in_as(p,as2). :- not cov(as2)."));
    expect_same_rules(cover_program(PartialInterpretation(Term::constant("e"), {}, {}), as1),
                      P("cov(as1). :- not cov(as1)."));

    Program q = append_body_atom(reify(P("p :- not q. q :- not p."), "in_as", x), parse_atom("as(X)"));
    q.append(P("as(as1). as(as2)."));
    q.append(cover_program(i1, as1));
    q.append(cover_program(i2, as2));
    EXPECT_EQ(unique_answer_set(q), I("as(as1). as(as2). in_as(p,as1). in_as(q,as2). cov(as1). cov(as2)."));
}

TEST(Combinators, MetaWeakMatchesWeakTuples) {
    Term x = Term::variable("X");
    Program p = P(":~ p(V).[1@2, V]\n:~ q(V).[2@1, V]");
    EXPECT_EQ(normalized(Program{{meta_weak(p.rules[0], "in_as", "as", x)}}),
              normalized(P("w(1,2,args(V),X) :- as(X), in_as(p(V),X).")));
    EXPECT_EQ(normalized(Program{{meta_weak(p.rules[1], "in_as", "as", x)}}),
              normalized(P("w(2,1,args(V),X) :- as(X), in_as(q(V),X).")));
    EXPECT_EQ(to_string(meta_weak(P(":~ .[3@1]").rules[0], "in_as", "as", x)), "w(3,1,args,X) :- as(X).");

    Program m;
    for (const auto& r : p.rules) m.add(meta_weak(r, "in_as", "as", x));
    Interpretation i = I("p(1). p(2). q(1).");
    m.append(reify(i.atoms(), "in_as", Term::constant("id")));
    m.append(P("as(id)."));
    Interpretation a = unique_answer_set(m);
    std::set<std::string> ws;
    for (Atom at : a)
        if (at.name() == "w") ws.insert(to_string(at));
    EXPECT_EQ(ws, (std::set<std::string>{"w(1,2,args(1),id)", "w(1,2,args(2),id)", "w(2,1,args(1),id)"}));
    // The same tuples as the procedural profile.
    std::set<std::string> tuples;
    for (const auto& t : weak_profile(p, i).tuples) tuples.insert(to_string(t));
    EXPECT_EQ(tuples.size(), 3u);
}

TEST(Combinators, DominatesProgram) {
    Term x = Term::variable("X");
    Program p = P(":~ p(V).[1@2, V]\n:~ q(V).[2@1, V]");
    auto base = [&] {
        Program m;
        for (const auto& r : p.rules) m.add(meta_weak(r, "in_as", "as", x));
        m.append(reify(atoms("p(1). p(2). q(1)."), "in_as", Term::constant("id1")));
        m.append(reify(atoms("p(1). p(2). p(3)."), "in_as", Term::constant("id2")));
        m.append(P("as(id1). as(id2). lv(1). lv(2)."));
        return m;
    };
    Program m12 = base();
    m12.append(dominates_program(Term::constant("id1"), Term::constant("id2")));
    Interpretation a = unique_answer_set(m12);
    EXPECT_TRUE(a.contains(parse_atom("dom_lv(id1,id2,2)")));
    EXPECT_TRUE(a.contains(parse_atom("non_dom_lv(id1,id2,1)")));
    EXPECT_TRUE(a.contains(parse_atom("dom(id1,id2)")));
    for (Atom at : a) EXPECT_NE(at.name(), "non_bef");

    Program m21 = base();
    m21.append(dominates_program(Term::constant("id2"), Term::constant("id1")));
    Interpretation b = unique_answer_set(m21);
    EXPECT_TRUE(b.contains(parse_atom("dom_lv(id2,id1,1)")));
    EXPECT_TRUE(b.contains(parse_atom("non_dom_lv(id2,id1,2)")));
    EXPECT_TRUE(b.contains(parse_atom("non_bef(id2,id1,1)")));
    EXPECT_FALSE(b.contains(parse_atom("dom(id2,id1)")));

    // Equal profiles: neither direction.
    Program eq;
    for (const auto& r : p.rules) eq.add(meta_weak(r, "in_as", "as", x));
    eq.append(reify(atoms("p(1)."), "in_as", Term::constant("id1")));
    eq.append(reify(atoms("p(2)."), "in_as", Term::constant("id2")));
    eq.append(P("as(id1). as(id2). lv(1). lv(2)."));
    eq.append(dominates_program(Term::constant("id1"), Term::constant("id2")));
    eq.append(dominates_program(Term::constant("id2"), Term::constant("id1")));
    Interpretation c = unique_answer_set(eq);
    EXPECT_FALSE(c.contains(parse_atom("dom(id1,id2)")));
    EXPECT_FALSE(c.contains(parse_atom("dom(id2,id1)")));
}

TEST(Combinators, Reductify) {
    expect_same_rules(reductify(P("p :- not q. q :- not p.")),
                      P("mmr(p,X) :- not in_vs(q,X), vs(X). mmr(q,X) :- not in_vs(p,X), vs(X)."));
    expect_same_rules(reductify(P(":- a.")), P("mmr(bot,X) :- mmr(a,X), vs(X)."));
    expect_same_rules(reductify(P("1 {a} 1.")), P(R"(
        mmr(a,X) :- 1 {in_vs(a,X)} 1, in_vs(a,X), vs(X).
        mmr(bot,X) :- 2 {in_vs(a,X)}, vs(X).
        mmr(bot,X) :- {in_vs(a,X)} 0, vs(X).)"));
    // No lower-bound violation rule for l = 0.
    expect_same_rules(reductify(P("{a; b}.")), P(R"(
        mmr(a,X) :- 0 {in_vs(a,X); in_vs(b,X)} 2, in_vs(a,X), vs(X).
        mmr(b,X) :- 0 {in_vs(a,X); in_vs(b,X)} 2, in_vs(b,X), vs(X).
        mmr(bot,X) :- 3 {in_vs(a,X); in_vs(b,X)}, vs(X).)"));

    Program q = reductify(P("p :- not q. q :- not p."));
    q.append(P("vs(vs1). in_vs(p,vs1)."));
    EXPECT_EQ(unique_answer_set(q), I("vs(vs1). in_vs(p,vs1). mmr(p,vs1)."));
}

TEST(Appendix, TMetaMatchesGolden) {
    LearningTask t = load_task(task_path("appendix"));
    auto ctx = make_context(t);
    EXPECT_EQ(ctx.levels, (std::vector<std::int64_t>{1}));
    auto mp = build_t_meta(ctx);
    expect_same_rules(mp.program, P(golden_t_meta()));
    EXPECT_EQ(mp.hyp_decode.size(), 3u);
}

TEST(Appendix, VrMetaMatchesGolden) {
    LearningTask t = load_task(task_path("appendix"));
    auto ctx = make_context(t);
    expect_same_rules(build_vr_meta(ctx, appendix_vr(t)).program, P(golden_vr_meta()));
}

TEST(Appendix, DecodeListings) {
    LearningTask t = load_task(task_path("appendix"));
    auto ctx = make_context(t);
    Interpretation first = listing(R"({ as(1), as(2), as(3), as(4), as(n), as(5), as(6), lv(1), in_as(r(1),1),
  in_as(r(1),2), in_as(r(1),3), in_as(r(1),4), in_as(r(1),n), in_as(r(1),5),
  in_as(r(1),6), in_as(r(2),1), in_as(r(2),2), in_as(r(2),3), in_as(r(2),4),
  in_as(r(2),n), in_as(r(2),5), in_as(r(2),6), in_as(q(1),3), in_as(q(1),4),
  in_as(q(1),6), in_as(p(1),1), in_as(p(1),2), in_as(p(1),n), in_as(p(1),5),
  in_as(p(2),1), in_as(q(2),2), in_as(q(2),3), in_as(q(2),4), in_as(q(2),n),
  in_as(q(2),5), in_as(q(2),6), in_as(a,1), in_as(a,2), in_as(a,3),
  in_as(b,4), in_as(a,n), in_as(a,5), in_as(b,6), in_h(r2),
  w(1,1,args(2,r2),2), w(1,1,args(1,r2),3), w(1,1,args(2,r2),3),
  w(1,1,args(1,r2),4), w(1,1,args(2,r2),4), w(1,1,args(2,r2),n),
  w(1,1,args(2,r2),5), w(1,1,args(1,r2),6), w(1,1,args(2,r2),6), cov(1),
  cov(2), cov(3), cov(4), v_i, violating, dom_lv(1,2,1), dom(1,2), cov(5),
  cov(6), dom_lv(5,6,1), dom(5,6) })");
    Decoded d1 = decode_meta_answer_set(ctx, first);
    EXPECT_EQ(d1.hypothesis, hypothesis_from_ids(t.space, {Term::constant("r2")}));
    ASSERT_TRUE(d1.reason);
    EXPECT_EQ(*d1.reason, ViolatingReason(ViolatingInterpretation{I("r(1). r(2). p(1). q(2). a.")}));
    EXPECT_FALSE(d1.pair);

    Interpretation second = listing(R"({ as(1), as(2), as(3), as(4), as(n), as(5), as(6), lv(1), in_as(r(1),1),
  in_as(r(1),2), in_as(r(1),3), in_as(r(1),4), in_as(r(1),n), in_as(r(1),5),
  in_as(r(1),6), in_as(r(2),1), in_as(r(2),2), in_as(r(2),3), in_as(r(2),4),
  in_as(r(2),n), in_as(r(2),5), in_as(r(2),6), in_as(q(1),1), in_as(q(1),4),
  in_as(q(1),6), in_as(p(1),2), in_as(p(1),3), in_as(p(1),n), in_as(p(1),5),
  in_as(p(2),1), in_as(q(2),2), in_as(q(2),3), in_as(q(2),4), in_as(q(2),n),
  in_as(q(2),5), in_as(q(2),6), in_as(a,1), in_as(a,2), in_as(a,3),
  in_as(b,4), in_as(a,n), in_as(a,5), in_as(b,6), w(1,1,args(1,r2),1),
  in_h(r2), w(1,1,args(2,r2),2), w(1,1,args(2,r2),3), w(1,1,args(1,r2),4),
  w(1,1,args(2,r2),4), w(1,1,args(2,r2),n), w(1,1,args(2,r2),5),
  w(1,1,args(1,r2),6), w(1,1,args(2,r2),6), cov(1), cov(2), cov(3), cov(4),
  v_i, violating, v_p(1,2), v_p, cov(5), cov(6), dom_lv(5,6,1), dom(5,6) })");
    Decoded d2 = decode_meta_answer_set(ctx, second);
    EXPECT_EQ(d2.hypothesis, hypothesis_from_ids(t.space, {Term::constant("r2")}));
    ASSERT_TRUE(d2.pair);
    EXPECT_EQ(d2.pair->first, I("p(2). q(1). r(1). r(2). a."));
    EXPECT_EQ(d2.pair->second, I("p(1). q(2). r(1). r(2). a."));
    EXPECT_EQ(t.orderings[d2.pair->ordering].kind, OrderingKind::Cautious);

    Decoded d3 = decode_meta_answer_set(ctx, I("in_h(r1). as(1)."));
    EXPECT_FALSE(d3.reason);
    EXPECT_THROW(decode_meta_answer_set(ctx, I("in_h(r9).")), MalformedMetaModel);
}

TEST(Appendix, OptimalityFiveAfterViolatingReasons) {
    LearningTask t = load_task(task_path("appendix"));
    auto ctx = make_context(t);
    Program p = build_t_meta(ctx).program;

    auto before = solve_optimal(p);
    ASSERT_TRUE(before);
    EXPECT_EQ(before->sum(0), 2); // a single weak constraint, violating

    p.append(build_vr_meta(ctx, appendix_vr(t)).program);
    auto m = solve_optimal(p);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->sum(0), 5);
    Decoded d = decode_meta_answer_set(ctx, m->atoms);
    EXPECT_FALSE(d.reason);
    EXPECT_EQ(normalized(rules(t.space, d.hypothesis)), normalized(P("q(1).\n:~ q(V).[1@1,V,r2]")));
    EXPECT_TRUE(is_inductive_solution(t, d.hypothesis));
}

TEST(Appendix, EmptyExamplesAndReservedNames) {
    LearningTask t;
    t.background = P("a :- not b. b :- not a.");
    t.space = build_search_space(P(":~ a.[1@1]").rules, ModeBias{});
    auto mp = build_t_meta(make_context(t));
    expect_same_rules(mp.program, P(R"(
        in_as(a,X) :- not in_as(b,X), as(X).
        in_as(b,X) :- not in_as(a,X), as(X).
        w(1,1,args,X) :- in_as(a,X), as(X), in_h(r1).
        :~ in_h(r1).[2@0,r1]
        0 {in_h(r1)} 1.
        :~ not violating.[1@0]
        lv(1).)"));

    LearningTask bad = t;
    bad.background = P("cov(1).");
    EXPECT_THROW(make_context(bad), ReservedPredicateClash);
    bad.background = P("p :- in_h(x).");
    EXPECT_THROW(make_context(bad), ReservedPredicateClash);
}

TEST(Appendix, EmptyViolatingReasonsAreInert) {
    LearningTask t = load_task(task_path("appendix"));
    auto ctx = make_context(t);
    Program p = build_t_meta(ctx).program;
    Program q = p;
    q.append(build_vr_meta(ctx, {}).program);
    // Compared on the hypothesis and violating atoms.
    auto projected = [](const Program& prog) {
        std::set<std::string> out;
        AspSolver solver(ground(prog));
        solver.enumerate(
            [&](const Interpretation& a) {
                out.insert(to_string(a));
                return true;
            },
            {}, [](Atom x) { return x.name() == "in_h" || x.name() == "violating"; });
        return out;
    };
    auto before = projected(p);
    EXPECT_GT(before.size(), 2u);
    EXPECT_EQ(before, projected(q));
}

TEST(Property, EmissionRoundTrip) {
    std::mt19937 rng(11);
    LearningTask t = load_task(task_path("appendix"));
    auto ctx = make_context(t);
    auto check = [](const Program& p) {
        Program back = parse_program(to_string(p), {.allow_reserved = true});
        EXPECT_EQ(normalized(back), normalized(p));
        EXPECT_EQ(to_string(back), to_string(p));
    };
    check(build_t_meta(ctx).program);
    check(build_vr_meta(ctx, appendix_vr(t)).program);
    for (int k = 0; k < 40; ++k) {
        LearningTask r = test::random_task(rng);
        auto c = make_context(r);
        check(build_t_meta(c).program);
    }
}

TEST(Property, EncodedDominanceAgreesWithProcedural) {
    std::mt19937 rng(5);
    Term x = Term::variable("X"), t1 = Term::constant("t1"), t2 = Term::constant("t2");
    int pairs = 0;
    for (int k = 0; k < 200; ++k) {
        Program p = test::random_program(rng, 4, 6);
        auto as = test::brute_answer_sets(p);
        std::set<std::int64_t> levels;
        Program mw;
        for (const auto& r : p.rules)
            if (r.is_weak()) {
                levels.insert(r.level.value());
                mw.add(meta_weak(r, "in_as", "as", x));
            }
        for (auto l : levels) mw.add(Rule::normal(make_atom("lv", {Term::integer(l)})));
        mw.append(P("as(t1). as(t2)."));
        mw.append(dominates_program(t1, t2));
        for (const auto& a1 : as)
            for (const auto& a2 : as) {
                Program m = mw;
                m.append(reify(a1.atoms(), "in_as", t1));
                m.append(reify(a2.atoms(), "in_as", t2));
                Interpretation a = unique_answer_set(m);
                EXPECT_EQ(a.contains(make_atom("dom", {t1, t2})), dominates(p, a1, a2))
                    << to_string(p) << to_string(a1) << " vs " << to_string(a2);
                ++pairs;
            }
    }
    EXPECT_GT(pairs, 100);
}

TEST(Property, ReductFidelity) {
    std::mt19937 rng(9);
    Term v1 = Term::constant("v1");
    int yes = 0;
    for (int k = 0; k < 150; ++k) {
        Program b = test::random_program(rng, 4, 5, false);
        Program g = ground(b);
        auto m = reductify(b);
        m.append(P("nas(X) :- in_vs(A,X), not mmr(A,X). nas(X) :- not in_vs(A,X), mmr(A,X). vs(v1)."));
        for (std::uint32_t mask = 0; mask < 16; ++mask) {
            std::vector<Atom> in;
            for (int j = 0; j < 4; ++j)
                if (mask & (1u << j)) in.push_back(Term::constant("a" + std::to_string(j)));
            Interpretation i(in);
            Program q = m;
            q.append(reify(in, "in_vs", v1));
            Interpretation a = unique_answer_set(q);
            bool as = is_answer_set(g, i);
            yes += as;
            EXPECT_EQ(!a.contains(make_atom("nas", {v1})), as) << to_string(b) << to_string(i);
        }
    }
    EXPECT_GT(yes, 50);
}

// Every answer set costs 2 cost(H), plus one without `violating`; the
// optimal decoded hypotheses are the cheapest remaining positive ones.
TEST(Property, ParityAndOptimalRemaining) {
    std::mt19937 rng(21);
    int checked = 0;
    for (int k = 0; k < 250; ++k) {
        LearningTask t = test::random_task(rng, 4, 6);
        auto ctx = make_context(t);
        TaskEvaluator ev(t);
        auto hyps = test::all_hypotheses(t.space);

        std::vector<ViolatingReason> vr;
        for (int j = 0; j < 3; ++j) {
            const auto& h = hyps[std::uniform_int_distribution<std::size_t>(0, hyps.size() - 1)(rng)];
            if (ev.is_positive(h))
                if (auto r = ev.violating_reason(h)) vr.push_back(*r);
        }

        Program tm = build_t_meta(ctx).program;
        for (const auto& a : enumerate_answer_sets(tm)) {
            Decoded d = decode_meta_answer_set(ctx, a);
            bool viol = a.contains(make_atom("violating"));
            EXPECT_EQ(weak_profile(tm, a).sum(0), 2 * cost(t.space, d.hypothesis) + (viol ? 0 : 1));
            EXPECT_TRUE(ev.is_positive(d.hypothesis));
            if (viol) EXPECT_TRUE(d.reason);
        }

        std::int64_t best = -1;
        std::set<Hypothesis> want;
        for (const auto& h : hyps) {
            if (!ev.is_positive(h) || !ev.is_remaining(h, vr)) continue;
            std::int64_t c = 2 * cost(t.space, h) + (ev.violating_reason(h) ? 0 : 1);
            if (best < 0 || c < best) best = c, want.clear();
            if (c == best) want.insert(h);
        }

        Program full = tm;
        full.append(build_vr_meta(ctx, vr).program);
        AspSolver solver(ground(full));
        std::set<Hypothesis> got;
        std::int64_t got_cost = -1;
        solver.enumerate_optimal([&](const OptimalModel& m) {
            got_cost = m.sum(0);
            got.insert(decode_meta_answer_set(ctx, m.atoms).hypothesis);
            return true;
        });
        EXPECT_EQ(got_cost, best);
        EXPECT_EQ(got, want);
        checked += !want.empty();
    }
    EXPECT_GT(checked, 20);
}
