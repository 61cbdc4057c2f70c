// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <set>

#include "loas/errors.hpp"
#include "loas/hyp_space.hpp"
#include "loas/parser.hpp"

using namespace loas;

namespace {

Rule R(const std::string& s) { return parse_rule(s); }

ModeBias schedule_bias() {
    ModeBias m;
    m.orderings = {parse_mode("assign(v,v)"), parse_mode("neq(v,v)"), parse_mode("type(v,v,c)")};
    m.weights = {-1, 1};
    m.max_level = 2;
    m.max_body = 3;
    m.max_vars = 3;
    m.constants = {Term::constant("c1"), Term::constant("c2")};
    return m;
}

// Binomial-sum cost for choice heads, computed independently of rule_cost.
std::int64_t choice_cost_oracle(std::int64_t k, std::int64_t lo, std::int64_t hi, std::int64_t body) {
    std::int64_t subsets = 0;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        auto s = static_cast<std::int64_t>(__builtin_popcount(mask));
        if (s >= lo && s <= hi) ++subsets;
    }
    return body + k * subsets;
}

} // namespace

TEST(Mode, ParseAndPrint) {
    auto m = parse_mode("type(v,v,c)");
    EXPECT_EQ(m.predicate, "type");
    ASSERT_EQ(m.args.size(), 3u);
    EXPECT_EQ(m.args[2], Placeholder::Const);
    EXPECT_EQ(to_string(m), "type(v,v,c)");
    EXPECT_EQ(to_string(parse_mode("b")), "b");
    EXPECT_THROW(parse_mode("p(x)"), ConfigError);
}

TEST(Mode, AtomCompatible) {
    auto m = parse_mode("type(v,v,c)");
    EXPECT_TRUE(atom_compatible(parse_atom("type(D,S,c1)"), m));
    EXPECT_FALSE(atom_compatible(parse_atom("type(D,S,C)"), m));
    EXPECT_FALSE(atom_compatible(parse_atom("type(m,S,c1)"), m));
    EXPECT_FALSE(atom_compatible(parse_atom("type(D,S)"), m));
    EXPECT_TRUE(atom_compatible(parse_atom("q(1)"), parse_mode("q(c)")));
    EXPECT_FALSE(atom_compatible(parse_atom("q(f(1))"), parse_mode("q(c)")));
}

TEST(Cost, Examples) {
    EXPECT_EQ(rule_cost(R("1 {p; q} 2.")), 6);
    EXPECT_EQ(rule_cost(R("p :- q, not r.")), 3);
    EXPECT_EQ(rule_cost(R(":- q, r.")), 2);
    EXPECT_EQ(rule_cost(R(":~ assign(D,S1), assign(D,S2), neq(S1,S2).[1@1,D,S1,S2]")), 3);
    EXPECT_EQ(rule_cost(R("q(1).")), 1);
}

TEST(Cost, ChoiceMatchesSubsetCount) {
    for (std::int64_t k = 1; k <= 4; ++k)
        for (std::int64_t lo = 0; lo <= k; ++lo)
            for (std::int64_t hi = lo; hi <= k; ++hi) {
                std::vector<Atom> head;
                for (std::int64_t i = 0; i < k; ++i) head.push_back(Term::constant("h" + std::to_string(i)));
                Rule r = Rule::choice(lo, hi, head, {Literal{Term::constant("b"), false}});
                EXPECT_EQ(rule_cost(r), choice_cost_oracle(k, lo, hi, 1)) << to_string(r);
            }
}

TEST(Canonical, RenamingAndOrder) {
    EXPECT_TRUE(alpha_equivalent(R(":- p(X,Y), q(Y)."), R(":- q(A), p(B,A).")));
    EXPECT_FALSE(alpha_equivalent(R(":- p(X,Y), q(Y)."), R(":- p(X,Y), q(X).")));
    EXPECT_TRUE(alpha_equivalent(R(":~ a(X), b(Y).[1@1,X,Y]"), R(":~ b(B), a(A).[1@1,A,B]")));
    EXPECT_FALSE(alpha_equivalent(R(":~ a(X).[1@1,X]"), R(":~ a(X).[2@1,X]")));
    EXPECT_EQ(to_string(canonical_rule(R("h(Z) :- q(Z).")).head.front()), "h(V1)");
}

TEST(Canonical, BodyTermsFirstAppearance) {
    auto r = R(":- assign(D,S), type(D,S,c1).");
    auto t = body_terms(r.body);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(to_string(t[0]), "D");
    EXPECT_EQ(to_string(t[2]), "c1");
}

TEST(Space, EmptyBiasIsEmpty) {
    EXPECT_TRUE(build_search_space(ModeBias{}).empty());
}

TEST(Space, EntriesAreDistinctCanonicalAndParse) {
    auto s = build_search_space(schedule_bias());
    ASSERT_FALSE(s.empty());
    std::set<std::string> keys;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& e = s[i];
        EXPECT_EQ(to_string(e.id), "r" + std::to_string(i + 1));
        EXPECT_TRUE(keys.insert(to_string(canonical_rule(e.rule))).second) << to_string(e.rule);
        EXPECT_EQ(e.cost, rule_cost(e.rule));
        Rule back = parse_rule(to_string(e.rule));
        EXPECT_TRUE(alpha_equivalent(back, e.rule));
        EXPECT_NO_THROW(check_safety(e.rule, 0));
    }
}

TEST(Space, ContainsTargetOrderingRules) {
    auto s = build_search_space(schedule_bias());
    for (std::int64_t lvl : {0, 1}) {
        auto a = R(":~ assign(D,S1), assign(D,S2), neq(S1,S2).[1@" + std::to_string(lvl) + ",D,S1,S2]");
        auto b = R(":~ assign(D,S), type(D,S,c1).[1@" + std::to_string(lvl) + ",D,S,c1]");
        EXPECT_TRUE(s.find_equivalent(a).has_value()) << to_string(a);
        EXPECT_TRUE(s.find_equivalent(b).has_value()) << to_string(b);
    }
}

TEST(Space, WeightSetScalesOrderingRules) {
    auto both = schedule_bias();
    auto one = both;
    one.weights = {1};
    EXPECT_EQ(build_search_space(both).size(), 2 * build_search_space(one).size());
}

TEST(Space, MonotoneInLimits) {
    auto m = schedule_bias();
    std::size_t prev = 0;
    for (std::size_t b = 1; b <= 3; ++b) {
        m.max_body = b;
        std::size_t n = build_search_space(m).size();
        EXPECT_GE(n, prev);
        prev = n;
    }
}

TEST(Space, HeadsAndChoices) {
    ModeBias m;
    m.heads = {parse_mode("p"), parse_mode("q")};
    m.bodies = {parse_mode("r")};
    m.max_body = 1;
    m.max_head = 2;
    auto s = build_search_space(m);
    EXPECT_TRUE(s.find_equivalent(R("p.")).has_value());
    EXPECT_TRUE(s.find_equivalent(R("q :- not r.")).has_value());
    EXPECT_TRUE(s.find_equivalent(R(":- r.")).has_value());
    EXPECT_TRUE(s.find_equivalent(R("1 {p; q} 2 :- r.")).has_value());
    EXPECT_FALSE(s.find_equivalent(R(":- r, not r.")).has_value());
}

TEST(Space, UnsafeRulesExcluded) {
    ModeBias m;
    m.heads = {parse_mode("p(v)")};
    m.bodies = {parse_mode("q(v)")};
    m.max_body = 1;
    m.max_vars = 1;
    auto s = build_search_space(m);
    EXPECT_TRUE(s.find_equivalent(R("p(X) :- q(X).")).has_value());
    for (const auto& e : s.entries()) EXPECT_NO_THROW(check_safety(e.rule, 0)) << to_string(e.rule);
}

TEST(Space, ListedRulesComeFirst) {
    std::vector<Rule> listed = {R("q(1)."), R(":~ q(V).[1@1,V,r2]")};
    auto s = build_search_space(listed, ModeBias{});
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(to_string(s[1].id), "r2");
    EXPECT_EQ(s[1].cost, 1);
}

TEST(Space, CapThrows) {
    auto m = schedule_bias();
    m.cap = 10;
    EXPECT_THROW(build_search_space(m), SearchSpaceExplosion);
}
