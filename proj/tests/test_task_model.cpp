// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <random>

#include "loas/errors.hpp"
#include "loas/parser.hpp"
#include "loas/semantics.hpp"
#include "loas/task.hpp"
#include "oracle.hpp"

using namespace loas;

namespace {

std::string task_path(const std::string& name) { return std::string(LOAS_TASKS_DIR) + "/" + name + ".task"; }

std::vector<Atom> atoms(const std::string& text) {
    std::vector<Atom> out;
    if (text.empty()) return out;
    for (const auto& r : parse_program(text).rules) out.push_back(r.head.front());
    return out;
}

PartialInterpretation PI(const std::string& inc, const std::string& exc, const char* id = "e") {
    return PartialInterpretation(Term::constant(id), atoms(inc), atoms(exc));
}

Interpretation I(const std::string& text) { return Interpretation(atoms(text)); }

const char* kSlots = "slot(m,1). slot(m,2). slot(t,1). slot(t,2). 0 {assign(D,S)} 1 :- slot(D,S).";
const char* kSlotFacts = "slot(m,1). slot(m,2). slot(t,1). slot(t,2).";

// Example 5 with the space cut down to H's two rules plus the variant using
// `not type(D,S,c2)`.
LearningTask example5_small() {
    TaskSpec spec = parse_task_spec(read_file(task_path("example5")));
    spec.bias = ModeBias{};
    spec.listed = parse_program(R"(
        :~ assign(D,S1), assign(D,S2), neq(S1,S2).[1@1,D,S1,S2]
        :~ assign(D,S), type(D,S,c1).[1@2,D,S]
        :~ assign(D,S), not type(D,S,c2).[1@2,D,S]
    )").rules;
    return make_task(spec);
}

// Judgements straight from the definitions over powerset answer sets.
struct Oracle {
    const LearningTask& t;
    Program p;
    std::vector<Interpretation> as;
    std::vector<WeakProfile> prof;

    Oracle(const LearningTask& task, const Hypothesis& h) : t(task), p(task.background) {
        p.append(rules(t.space, h));
        as = test::brute_answer_sets(p);
        for (const auto& a : as) prof.push_back(weak_profile(p, a));
    }
    bool covers() const {
        for (const auto& e : t.positives)
            if (std::none_of(as.begin(), as.end(), [&](const auto& a) { return interpretation_extends(a, e); }))
                return false;
        return true;
    }
    bool respects(const OrderingExample& o) const {
        const auto& e1 = t.positives[t.positive_index(o.first)];
        const auto& e2 = t.positives[t.positive_index(o.second)];
        bool any = false, all = true;
        for (std::size_t i = 0; i < as.size(); ++i)
            for (std::size_t j = 0; j < as.size(); ++j)
                if (interpretation_extends(as[i], e1) && interpretation_extends(as[j], e2)) {
                    bool d = dominates(prof[i], prof[j]);
                    any |= d;
                    all &= d;
                }
        return o.kind == OrderingKind::Brave ? any : all;
    }
    bool positive() const {
        if (!covers()) return false;
        for (const auto& o : t.orderings)
            if (o.kind == OrderingKind::Brave && !respects(o)) return false;
        return true;
    }
    bool violating() const {
        for (const auto& a : as)
            for (const auto& e : t.negatives)
                if (interpretation_extends(a, e)) return true;
        for (const auto& o : t.orderings)
            if (o.kind == OrderingKind::Cautious && !respects(o)) return true;
        return false;
    }
};

} // namespace

TEST(Extends, Interpretation) {
    auto e1 = PI("assign(m,1). assign(m,2).", "assign(t,1). assign(t,2).");
    EXPECT_TRUE(interpretation_extends(I(std::string(kSlotFacts) + "assign(m,1). assign(m,2)."), e1));
    EXPECT_TRUE(interpretation_extends(I("p. q."), PI("", "")));
    EXPECT_FALSE(interpretation_extends(I("p."), PI("p.", "p.")));
}

TEST(Extends, Partial) {
    EXPECT_TRUE(partial_extends(PI("p. q.", "r."), PI("p.", "r.")));
    EXPECT_TRUE(partial_extends(PI("p.", "q."), PI("", "")));
    EXPECT_FALSE(partial_extends(PI("p.", ""), PI("", "p.")));
}

TEST(Ordering, RespectTable) {
    auto e1 = PI("assign(m,1). assign(m,2).", "assign(t,1). assign(t,2).");
    auto e2 = PI("assign(m,1). assign(t,1).", "");
    const char* w[] = {":~ assign(D,S).[1@1]", ":~ assign(D,S).[1@1,D]", ":~ assign(D,S).[1@1,D,S]"};
    bool brave[] = {false, true, true}, cautious[] = {false, true, false};
    for (int i = 0; i < 3; ++i) {
        Program p = parse_program(std::string(kSlots) + w[i]);
        EXPECT_EQ(respects_ordering(p, OrderingKind::Brave, e1, e2), brave[i]) << w[i];
        EXPECT_EQ(respects_ordering(p, OrderingKind::Cautious, e1, e2), cautious[i]) << w[i];
    }
}

TEST(Ordering, CautiousIsVacuousWithoutPairs) {
    Program p = parse_program("0 {p} 1.");
    auto impossible = PI("q.", "");
    EXPECT_TRUE(respects_ordering(p, OrderingKind::Cautious, impossible, PI("", "")));
    EXPECT_FALSE(respects_ordering(p, OrderingKind::Brave, impossible, PI("", "")));
}

class Example4 : public ::testing::Test {
protected:
    LearningTask t = load_task(task_path("example4"));
    Hypothesis h1{};
    Hypothesis h2{{0}};
    Hypothesis h3{{0, 1}};
    std::string facts = std::string(kSlotFacts) + "busy(m,1).";
};

TEST_F(Example4, H1PositiveWithViolatingInterpretation) {
    EXPECT_TRUE(is_positive_hypothesis(t, h1));
    auto r = find_violating_reason(t, h1);
    ASSERT_TRUE(r.has_value());
    auto* vi = std::get_if<ViolatingInterpretation>(&*r);
    ASSERT_NE(vi, nullptr);
    EXPECT_EQ(vi->interpretation, I(facts + "assign(m,1)."));
    EXPECT_FALSE(is_inductive_solution(t, h1));
}

TEST_F(Example4, H2PositiveWithViolatingPair) {
    EXPECT_TRUE(is_positive_hypothesis(t, h2));
    auto r = find_violating_reason(t, h2);
    ASSERT_TRUE(r.has_value());
    auto* vp = std::get_if<ViolatingPair>(&*r);
    ASSERT_NE(vp, nullptr);
    EXPECT_EQ(vp->first, I(facts + "assign(t,1). assign(t,2)."));
    EXPECT_EQ(vp->second, I(facts + "assign(m,2). assign(t,1)."));
    EXPECT_EQ(vp->ordering, 0u);
}

TEST_F(Example4, H3IsInductiveSolution) {
    EXPECT_TRUE(is_positive_hypothesis(t, h3));
    EXPECT_FALSE(find_violating_reason(t, h3).has_value());
    EXPECT_TRUE(is_inductive_solution(t, h3));
    EXPECT_EQ(cost(t.space, h3), 3);
}

TEST_F(Example4, RemainingHypotheses) {
    EXPECT_TRUE(is_remaining_hypothesis(t, h2, {}));
    auto r1 = *find_violating_reason(t, h1);
    auto r2 = *find_violating_reason(t, h2);
    EXPECT_FALSE(is_remaining_hypothesis(t, h1, {r1}));
    EXPECT_FALSE(is_remaining_hypothesis(t, h2, {r2}));
    EXPECT_TRUE(is_remaining_hypothesis(t, h3, {r1, r2}));
}

TEST_F(Example4, UncoverableHypothesisIsNotPositive) {
    TaskSpec spec = parse_task_spec(read_file(task_path("example4")));
    spec.listed.push_back(parse_rule(":- assign(t,1)."));
    LearningTask t2 = make_task(spec);
    EXPECT_FALSE(is_positive_hypothesis(t2, Hypothesis({2})));
}

TEST(Example5, TargetIsInductiveSolution) {
    LearningTask t = example5_small();
    Hypothesis h({0, 1});
    EXPECT_EQ(cost(t.space, h), 5);
    EXPECT_TRUE(is_inductive_solution(t, h));
    EXPECT_TRUE(is_inductive_solution(t, Hypothesis({0, 2})));
    EXPECT_FALSE(is_inductive_solution(t, Hypothesis({0})));
    EXPECT_FALSE(is_inductive_solution(t, Hypothesis({1})));
}

TEST(Conditions, CyclicCautiousFlagged) {
    auto rep = check_task_conditions(load_task(task_path("cyclic_cautious")));
    EXPECT_TRUE(rep.unsatisfiable());
    EXPECT_FALSE(rep.checks[2].holds);
    EXPECT_EQ(rep.checks[2].name, "necessary (iii)");
    EXPECT_TRUE(rep.checks[0].holds);
    EXPECT_TRUE(rep.checks[1].holds);
}

TEST(Conditions, PositiveExtendingNegativeFlagged) {
    LearningTask t;
    t.background = parse_program("0 {p} 1.");
    t.positives = {PI("p.", "", "e1")};
    t.negatives = {PI("", "", "n1")};
    auto rep = check_task_conditions(t);
    EXPECT_TRUE(rep.unsatisfiable());
    EXPECT_FALSE(rep.checks[1].holds);
    EXPECT_TRUE(rep.checks[0].holds);
    EXPECT_TRUE(rep.checks[2].holds);
}

TEST(Conditions, NoModelExtendingPositive) {
    LearningTask t;
    t.background = parse_program("p.");
    t.positives = {PI("", "p.", "e1")};
    EXPECT_FALSE(check_task_conditions(t).checks[0].holds);
}

TEST(Conditions, Example5Passes) {
    auto rep = check_task_conditions(example5_small());
    EXPECT_FALSE(rep.unsatisfiable()) << to_string(rep);
    for (const auto& c : rep.checks)
        if (c.necessary) EXPECT_TRUE(c.holds) << c.name;
}

TEST(TaskFile, ParsesExamplesAndOrderings) {
    LearningTask t = load_task(task_path("appendix"));
    ASSERT_EQ(t.positives.size(), 4u);
    EXPECT_EQ(to_string(t.positives[0].id), "1");
    EXPECT_EQ(t.negatives.size(), 1u);
    ASSERT_EQ(t.orderings.size(), 2u);
    EXPECT_EQ(t.orderings[0].kind, OrderingKind::Brave);
    EXPECT_EQ(t.space.size(), 3u);
    EXPECT_EQ(to_string(t.space[2].id), "r3");
    EXPECT_EQ(t.background.size(), 6u);
}

TEST(TaskFile, Errors) {
    EXPECT_THROW(parse_task("#pos(a, {p}, {p})."), TaskError);
    EXPECT_THROW(parse_task("#pos(a, {p}, {}). #cautious_ordering(a, a)."), TaskError);
    EXPECT_THROW(parse_task("#pos(a, {p}, {}). #brave_ordering(a, b)."), TaskError);
    EXPECT_THROW(parse_task("#frobnicate(1)."), SyntaxError);
    EXPECT_THROW(parse_task("#modeo(p(x))."), SyntaxError);
    try {
        parse_task("p.\n#pos(a, {p}, {}\n");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(TaskFile, DefaultConstantPool) {
    LearningTask t = parse_task("q(a). #modeh(p(c)). #modeb(q(c)). #maxbody(1).");
    EXPECT_TRUE(t.space.find_equivalent(parse_rule("p(a) :- q(a).")).has_value());
}

TEST(Property, JudgementsMatchDefinitions) {
    std::mt19937 rng(11);
    int checked = 0;
    for (int n = 0; n < 150; ++n) {
        LearningTask t = test::random_task(rng, 4, 6);
        TaskEvaluator ev(t);
        for (const auto& h : test::all_hypotheses(t.space)) {
            Oracle o(t, h);
            bool pos = ev.is_positive(h);
            ASSERT_EQ(pos, o.positive());
            for (std::size_t k = 0; k < t.orderings.size(); ++k) ASSERT_EQ(ev.respects(h, k), o.respects(t.orderings[k]));
            bool inductive = is_inductive_solution(t, h);
            ASSERT_EQ(inductive, o.positive() && !o.violating());
            if (!pos) continue;
            auto r = ev.violating_reason(h);
            ASSERT_EQ(r.has_value(), o.violating());
            ASSERT_EQ(inductive, !r.has_value());
            if (r) ASSERT_FALSE(ev.is_remaining(h, *r));
            ++checked;
        }
    }
    EXPECT_GT(checked, 100);
}
