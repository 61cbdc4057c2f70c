// SPDX-License-Identifier: MIT
// Meta-level programs of the worked appendix task, shared by the meta tests
// and the acceptance run.
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "loas/parser.hpp"
#include "loas/program.hpp"
#include "loas/task.hpp"

namespace loas::test {

// Rules as strings with body elements (and choice heads) sorted.
inline std::set<std::string> normalized(const Program& p) {
    std::set<std::string> out;
    for (Rule r : p.rules) {
        std::sort(r.head.begin(), r.head.end(), TermLess{});
        std::sort(r.body.begin(), r.body.end(),
                  [](const BodyElement& a, const BodyElement& b) { return to_string(a) < to_string(b); });
        out.insert(to_string(r));
    }
    return out;
}

inline Interpretation facts(const std::string& text) {
    std::vector<Atom> out;
    for (const auto& r : parse_program(text).rules) out.push_back(r.head.front());
    return Interpretation(out);
}

inline std::string dom_block(const std::string& a, const std::string& b) {
    std::string ab = a + "," + b;
    return "dom_lv(" + ab + ",L) :- lv(L), #sum{w(W,L,A," + a + ")=W, w(W,L,A," + b + ")=-W} < 0.\n" +
           "non_dom_lv(" + ab + ",L) :- lv(L), #sum{w(W,L,A," + b + ")=W, w(W,L,A," + a + ")=-W} < 0.\n" +
           "non_bef(" + ab + ",L) :- lv(L), lv(L2), L < L2, non_dom_lv(" + ab + ",L2).\n" + "dom(" + ab +
           ") :- dom_lv(" + ab + ",L), not non_bef(" + ab + ",L).\n";
}

// Expected T_meta for tasks/appendix.task.
inline std::string golden_t_meta() {
    return R"(
in_as(p(V),X) :- in_as(r(V),X), not in_as(q(V),X), as(X).
in_as(q(V),X) :- in_as(r(V),X), not in_as(p(V),X), as(X).
in_as(r(1),X) :- as(X).
in_as(r(2),X) :- as(X).
in_as(a,X) :- not in_as(b,X), as(X).
in_as(b,X) :- not in_as(a,X), as(X).
in_as(q(1),X) :- as(X), in_h(r1).
w(1,1,args(V,r2),X) :- in_as(q(V),X), as(X), in_h(r2).
w(1,1,args(b,r3),X) :- in_as(b,X), as(X), in_h(r3).
0 {in_h(r1); in_h(r2); in_h(r3)} 3.
:~ in_h(r1).[2@0,r1]
:~ in_h(r2).[2@0,r2]
:~ in_h(r3).[2@0,r3]
as(1). as(2). as(3). as(4).
cov(1) :- in_as(p(2),1).
cov(2) :- not in_as(p(2),2).
cov(3) :- in_as(a,3), not in_as(b,3).
cov(4) :- not in_as(a,4).
:- not cov(1).
:- not cov(2).
:- not cov(3).
:- not cov(4).
v_i :- in_as(p(1),n).
as(n).
violating :- v_i.
:~ not violating.[1@0]
as(5). as(6).
cov(5) :- in_as(a,5), not in_as(b,5).
cov(6) :- not in_as(a,6).
:- not cov(5).
:- not cov(6).
:- not dom(5,6).
lv(1).
v_p(1,2) :- not dom(1,2).
v_p :- v_p(T1,T2).
violating :- v_p.
)" + dom_block("5", "6") +
           dom_block("1", "2");
}

// Expected VR_meta for the reasons of appendix_vr.
inline std::string golden_vr_meta() {
    return R"(
in_vs(p(1),v1). in_vs(p(2),v1). in_vs(r(1),v1). in_vs(r(2),v1). in_vs(a,v1).
vs(v1).
:- not nas(v1).
in_vs(p(2),v2). in_vs(q(1),v2). in_vs(r(1),v2). in_vs(r(2),v2). in_vs(a,v2).
vs(v2).
in_vs(q(1),v3). in_vs(q(2),v3). in_vs(r(1),v3). in_vs(r(2),v3). in_vs(a,v3).
vs(v3).
:- not nas(v2), not nas(v3), not dom(v2,v3).
mmr(p(V),X) :- mmr(r(V),X), not in_vs(q(V),X), vs(X).
mmr(q(V),X) :- mmr(r(V),X), not in_vs(p(V),X), vs(X).
mmr(r(1),X) :- vs(X).
mmr(r(2),X) :- vs(X).
mmr(a,X) :- not in_vs(b,X), vs(X).
mmr(b,X) :- not in_vs(a,X), vs(X).
mmr(q(1),X) :- vs(X), in_h(r1).
w(1,1,args(V,r2),X) :- vs(X), in_vs(q(V),X), in_h(r2).
w(1,1,args(b,r3),X) :- vs(X), in_vs(b,X), in_h(r3).
nas(X) :- in_vs(A,X), not mmr(A,X).
nas(X) :- not in_vs(A,X), mmr(A,X).
lv(1).
)" + dom_block("v2", "v3");
}

inline std::vector<ViolatingReason> appendix_vr(const LearningTask& t) {
    std::size_t cautious = 0;
    while (t.orderings[cautious].kind != OrderingKind::Cautious) ++cautious;
    return {ViolatingInterpretation{facts("p(1). p(2). r(1). r(2). a.")},
            ViolatingPair{facts("p(2). q(1). r(1). r(2). a."), facts("q(1). q(2). r(1). r(2). a."), cautious}};
}

} // namespace loas::test
