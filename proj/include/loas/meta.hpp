// SPDX-License-Identifier: MIT
// Meta-level encoding of a learning task: answer sets of T_meta (plus the
// violating-reason program) encode positive hypotheses and their witnesses.
#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "loas/program.hpp"
#include "loas/task.hpp"

namespace loas::meta {

/// Replaces every atom a of p by pred(a, t). Weak constraints are rejected.
Program reify(const Program& p, std::string_view pred, Term t);
/// Facts pred(a, t) for each atom.
Program reify(const std::vector<Atom>& atoms, std::string_view pred, Term t);
Program append_body_atom(const Program& p, Atom a);
Program cover_program(const PartialInterpretation& e, Term t);
/// w(wt, lev, args(t1..tn), t) :- p1(b1, t), ..., not p1(c1, t), ..., p2(t).
/// The id variable is t itself when t is a variable.
Rule meta_weak(const Rule& weak, std::string_view p1, std::string_view p2, Term t);
Program dominates_program(Term t1, Term t2);
Program reductify(const Program& p);

struct MetaContext {
    const LearningTask* task = nullptr;
    std::vector<Term> positive_ids;                // 1, 2, ... per positive example
    Term negative_id;                              // n
    std::vector<std::pair<Term, Term>> brave_ids;  // per brave ordering, in order
    std::vector<std::int64_t> levels;
};

/// Throws ReservedPredicateClash if B or S_M use a meta predicate.
MetaContext make_context(const LearningTask& t);

struct MetaProgram {
    Program program;
    std::map<Term, std::size_t, TermLess> hyp_decode; // in_h argument -> space index
};

MetaProgram build_t_meta(const MetaContext& ctx);
MetaProgram build_vr_meta(const MetaContext& ctx, const std::vector<ViolatingReason>& vr);

struct Decoded {
    Hypothesis hypothesis;
    /// The violating interpretation when v_i holds, else the pair of the least v_p.
    std::optional<ViolatingReason> reason;
    /// The least v_p pair even when v_i also holds.
    std::optional<ViolatingPair> pair;
};

/// Throws MalformedMetaModel on in_h arguments that name no space entry.
Decoded decode_meta_answer_set(const MetaContext& ctx, const Interpretation& a);

} // namespace loas::meta
