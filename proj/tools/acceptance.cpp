// SPDX-License-Identifier: MIT
// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "appendix_goldens.hpp"
#include "loas/asp_solver.hpp"
#include "loas/bench.hpp"
#include "loas/engine.hpp"
#include "loas/meta.hpp"
#include "loas/parser.hpp"
#include "loas/semantics.hpp"
#include "oracle.hpp"

using namespace loas;

namespace {

using Clock = std::chrono::steady_clock;

std::string task_path(const std::string& name) { return std::string(LOAS_TASKS_DIR) + "/" + name + ".task"; }

Interpretation facts(const std::string& text) { return test::facts(text); }

PartialInterpretation PI(const std::string& inc, const std::string& exc, const char* id = "e") {
    return PartialInterpretation(Term::constant(id), facts(inc).atoms(), facts(exc).atoms());
}

// Collects failed checks; a criterion passes when none failed.
struct Check {
    std::vector<std::string> failures;
    std::string note;
    void operator()(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

const char* kSlots = "slot(m,1). slot(m,2). slot(t,1). slot(t,2).\n0 {assign(D,S)} 1 :- slot(D,S).\n";
const char* kW[] = {":~ assign(D,S).[1@1]", ":~ assign(D,S).[1@1, D]", ":~ assign(D,S).[1@1, D, S]"};

void example_one(Check& ok) {
    for (int i = 0; i < 3; ++i) {
        Program p = parse_program(std::string(kSlots) + kW[i]);
        auto opt = optimal_answer_sets(p);
        ok(opt.size() == 1 && std::none_of(opt.front().begin(), opt.front().end(),
                                           [](Atom a) { return a.name() == "assign"; }),
           std::string("optimum under ") + kW[i]);
        if (i == 0) continue;
        for (const auto& a : enumerate_answer_sets(p)) {
            std::set<Term, TermLess> days;
            std::int64_t n = 0;
            for (Atom x : a)
                if (x.name() == "assign") days.insert(x.args()[0]), ++n;
            auto want = i == 1 ? static_cast<std::int64_t>(days.size()) : n;
            ok(weak_profile(p, a).sum(1) == want, std::string("level-1 sum under ") + kW[i] + " on " + to_string(a));
        }
    }
}

void example_two(Check& ok) {
    auto e1 = PI("assign(m,1). assign(m,2).", "assign(t,1). assign(t,2).");
    auto e2 = PI("assign(m,1). assign(t,1).", "");
    bool brave[] = {false, true, true}, cautious[] = {false, true, false};
    for (int i = 0; i < 3; ++i) {
        Program p = parse_program(std::string(kSlots) + kW[i]);
        ok(respects_ordering(p, OrderingKind::Brave, e1, e2) == brave[i], std::string("brave ") + kW[i]);
        ok(respects_ordering(p, OrderingKind::Cautious, e1, e2) == cautious[i], std::string("cautious ") + kW[i]);
    }
}

void example_four(Check& ok) {
    LearningTask t = load_task(task_path("example4"));
    std::string b = "slot(m,1). slot(m,2). slot(t,1). slot(t,2). busy(m,1).";
    Hypothesis h1{}, h2{{0}}, h3{{0, 1}};
    ok(is_positive_hypothesis(t, h1), "H1 positive");
    auto r1 = find_violating_reason(t, h1);
    auto* vi = r1 ? std::get_if<ViolatingInterpretation>(&*r1) : nullptr;
    ok(vi && vi->interpretation == facts(b + "assign(m,1)."), "H1 violating interpretation");
    ok(is_positive_hypothesis(t, h2), "H2 positive");
    auto r2 = find_violating_reason(t, h2);
    auto* vp = r2 ? std::get_if<ViolatingPair>(&*r2) : nullptr;
    ok(vp && vp->first == facts(b + "assign(t,1). assign(t,2).") && vp->second == facts(b + "assign(m,2). assign(t,1)."),
       "H2 violating pair");
    // Pair-violating only: no answer set of B u H2 extends a negative.
    bool vi2 = false;
    Program p2 = t.background;
    p2.append(rules(t.space, h2));
    for (const auto& a : enumerate_answer_sets(p2))
        for (const auto& e : t.negatives) vi2 |= interpretation_extends(a, e);
    ok(!vi2, "H2 has no violating interpretation");
    ok(is_inductive_solution(t, h3), "H3 inductive");
}

void example_five(Check& ok) {
    LearningTask t = load_task(task_path("example5_restricted"));
    Program h = parse_program(":~ assign(D,S1), assign(D,S2), neq(S1,S2).[1@0, D, S1, S2]\n"
                              ":~ assign(D,S), type(D,S,c1).[1@1, D, S, c1]");
    EngineConfig c;
    c.strategy = Strategy::MetaNative;
    auto res = learn(t, c);
    ok(!res.solutions.empty(), "some solution");
    bool has_h = false;
    for (const auto& s : res.solutions) {
        ok(cost(t.space, s) == 5, "cost 5");
        ok(is_inductive_solution(t, s), "inductive");
        Program got = rules(t.space, s);
        if (got.rules.size() != h.rules.size()) continue;
        has_h |= std::all_of(h.rules.begin(), h.rules.end(), [&](const Rule& r) {
            return std::any_of(got.rules.begin(), got.rules.end(), [&](const Rule& g) { return alpha_equivalent(r, g); });
        });
    }
    ok(has_h, "H among the solutions");
    ok.note = std::to_string(t.space.size()) + " space entries, " + std::to_string(res.solutions.size()) +
              " solutions, " + std::to_string(res.iterations) + " iterations";
}

void appendix(Check& ok) {
    Program w = parse_program(":~ p(V).[1@2, V]\n:~ q(V).[2@1, V]");
    auto prof = weak_profile(w, facts("p(1). p(2). q(1)."));
    std::vector<WeakTuple> want{{1, 2, {Term::integer(1)}}, {1, 2, {Term::integer(2)}}, {2, 1, {Term::integer(1)}}};
    std::sort(want.begin(), want.end());
    ok(prof.tuples == want, "weak tuples");

    ParseOptions meta_parse{.allow_reserved = true, .check_safety = false};
    auto dom = [&](const char* a, const char* b) {
        Program m;
        for (const auto& r : w.rules) m.add(meta::meta_weak(r, "in_as", "as", Term::variable("X")));
        m.append(meta::reify(facts("p(1). p(2). q(1).").atoms(), "in_as", Term::constant("id1")));
        m.append(meta::reify(facts("p(1). p(2). p(3).").atoms(), "in_as", Term::constant("id2")));
        m.append(parse_program("as(id1). as(id2). lv(1). lv(2).", meta_parse));
        m.append(meta::dominates_program(Term::constant(a), Term::constant(b)));
        auto as = enumerate_answer_sets(m);
        return as.size() == 1 && as.front().contains(make_atom("dom", {Term::constant(a), Term::constant(b)}));
    };
    ok(dom("id1", "id2"), "dom(id1,id2)");
    ok(!dom("id2", "id1"), "no dom(id2,id1)");

    ok(test::normalized(meta::reductify(parse_program("p :- not q. q :- not p."))) ==
           test::normalized(parse_program("mmr(p,X) :- not in_vs(q,X), vs(X). mmr(q,X) :- not in_vs(p,X), vs(X).",
                                          meta_parse)),
       "reductify of the choice pair");

    LearningTask t = load_task(task_path("appendix"));
    auto ctx = meta::make_context(t);
    Program tm = meta::build_t_meta(ctx).program;
    ok(test::normalized(tm) == test::normalized(parse_program(test::golden_t_meta(), meta_parse)), "T_meta golden");
    auto vr = test::appendix_vr(t);
    Program vm = meta::build_vr_meta(ctx, vr).program;
    ok(test::normalized(vm) == test::normalized(parse_program(test::golden_vr_meta(), meta_parse)), "VR_meta golden");
    tm.append(vm);
    auto m = solve_optimal(tm);
    ok(m && m->sum(0) == 5, "final optimality 5");
}

EngineConfig with(Strategy s) {
    EngineConfig c;
    c.strategy = s;
    if (s == Strategy::MetaExternal) c.external_command = std::string(LOAS_CLI) + " solve {}";
    return c;
}

struct ParityCount {
    std::size_t models = 0, bad = 0;
};

void oracle_equivalence(Check& ok, ParityCount& parity) {
    std::mt19937 rng(2024);
    int tasks = 0, nonempty = 0;
    for (int k = 0; k < 60; ++k) {
        LearningTask t = k % 2 ? test::planted_task(rng, 4 + k % 3, 6 + k % 7) : test::random_task(rng, 4 + k % 3, 6 + k % 7);
        if (t.space.size() > 12) continue;
        ++tasks;
        auto want = brute_force_solutions(t);
        nonempty += !want.empty();
        auto ctx = meta::make_context(t);
        for (auto s : {Strategy::MetaNative, Strategy::MetaExternal, Strategy::Direct}) {
            auto c = with(s);
            c.on_meta_model = [&](const Interpretation& a, std::int64_t opt) {
                ++parity.models;
                auto d = meta::decode_meta_answer_set(ctx, a);
                bool viol = a.contains(make_atom("violating"));
                if (opt != 2 * cost(t.space, d.hypothesis) + (viol ? 0 : 1)) ++parity.bad;
            };
            ok(ilasp2(t, c) == want, "task " + std::to_string(k) + " " + to_string(s));
        }
    }
    ok(tasks >= 50, "at least 50 tasks");
    ok.note = std::to_string(tasks) + " tasks, " + std::to_string(nonempty) + " with solutions";
}

void reason_efficiency(Check& ok) {
    LearningTask t = load_task(task_path("many_violating"));
    TaskEvaluator ev(t);
    std::size_t violating = 0;
    std::set<std::string> interpretations;
    for (const auto& h : test::all_hypotheses(t.space)) {
        if (!ev.is_positive(h) || !ev.violating_reason(h)) continue;
        ++violating;
        for (const auto& a : ev.answer_sets(h))
            for (const auto& e : t.negatives)
                if (interpretation_extends(a, e)) interpretations.insert(to_string(a));
    }
    ok(t.orderings.empty(), "no orderings");
    ok(violating >= 1000, "at least 1000 violating hypotheses");
    ok(interpretations.size() <= 10, "at most 10 violating interpretations");
    std::string iters;
    for (auto s : {Strategy::MetaNative, Strategy::Direct}) {
        auto res = learn(t, with(s));
        std::set<std::string> distinct;
        for (const auto& r : res.violating_reasons) distinct.insert(to_string(r));
        ok(res.iterations <= 10 + distinct.size(), "iteration bound " + to_string(s));
        ok(!res.solutions.empty(), "solved " + to_string(s));
        iters += " " + to_string(s) + "=" + std::to_string(res.iterations);
    }
    ok.note = std::to_string(violating) + " violating hypotheses, " + std::to_string(interpretations.size()) +
              " interpretations, iterations" + iters;
}

void accuracy(Check& ok) {
    bench::BenchSpec s;
    std::map<int, double> mean;
    for (int n : {5, 10, 20}) {
        s.examples = n;
        mean[n] = bench::mean_accuracy(bench::run_accuracy(s));
    }
    ok(mean[10] >= 0.85, "mean accuracy at 10 examples >= 0.85");
    ok(mean[20] >= mean[5], "20 examples at least as accurate as 5");
    std::ostringstream note;
    note.precision(3);
    note << "accuracy 5:" << mean[5] << " 10:" << mean[10] << " 20:" << mean[20];
    ok.note = note.str();
}

void conditions(Check& ok) {
    auto cyc = check_task_conditions(load_task(task_path("cyclic_cautious")));
    ok(cyc.unsatisfiable(), "cyclic cautious orderings flagged");
    LearningTask ext;
    ext.background = parse_program("0 {p} 1.");
    ext.positives = {PI("p.", "", "e1")};
    ext.negatives = {PI("", "", "n1")};
    ok(check_task_conditions(ext).unsatisfiable(), "positive extending a negative flagged");
    auto ex5 = check_task_conditions(load_task(task_path("example5")));
    for (const auto& c : ex5.checks)
        if (c.necessary) ok(c.holds, "Example 5 " + c.name);
}

struct Criterion {
    int id;
    const char* title;
    double limit_s;
    std::function<void(Check&)> run;
};

} // namespace

int main() {
    ParityCount parity;
    std::vector<Criterion> all = {
        {1, "Example 1 optima and level sums", 1, example_one},
        {2, "Example 2 ordering table", 1, example_two},
        {3, "Example 4 judgements", 1, example_four},
        {4, "Example 5 learned at cost 5 (meta-native)", 60, example_five},
        {5, "appendix meta-level goldens", 60, appendix},
        {6, "random micro-tasks equal brute force", 600, [&](Check& c) { oracle_equivalence(c, parity); }},
        {7, "meta optimality parity", 600,
         [&](Check& c) {
             c(parity.models > 0, "models observed");
             c(parity.bad == 0, std::to_string(parity.bad) + " models off parity");
             c.note = std::to_string(parity.models) + " optimal meta models";
         }},
        {8, "violating-reason efficiency", 600, reason_efficiency},
        {9, "scheduling accuracy trend", 1800, accuracy},
        {10, "necessary-condition checker", 1, conditions},
    };
    int failed = 0;
    for (auto& c : all) {
        Check check;
        auto start = Clock::now();
        try {
            c.run(check);
        } catch (const std::exception& e) {
            check(false, std::string("exception: ") + e.what());
        }
        double s = std::chrono::duration<double>(Clock::now() - start).count();
        check(s < c.limit_s, "time limit " + std::to_string(c.limit_s) + " s");
        bool pass = check.failures.empty();
        failed += !pass;
        std::printf("criterion %2d: %s  %s (%.2f s%s%s)\n", c.id, pass ? "PASS" : "FAIL", c.title, s,
                    check.note.empty() ? "" : "; ", check.note.c_str());
        for (const auto& f : check.failures) std::printf("    failed: %s\n", f.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
