// SPDX-License-Identifier: MIT
// Learning tasks with ordering examples, and the judgements over them.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "loas/hyp_space.hpp"
#include "loas/program.hpp"

namespace loas {

struct PartialInterpretation {
    Term id;
    std::vector<Atom> inc; // sorted, unique
    std::vector<Atom> exc; // sorted, unique

    PartialInterpretation() = default;
    PartialInterpretation(Term id, std::vector<Atom> inc, std::vector<Atom> exc);
};

enum class OrderingKind : std::uint8_t { Brave, Cautious };

struct OrderingExample {
    Term id;
    Term first;
    Term second;
    OrderingKind kind = OrderingKind::Brave;
};

struct LearningTask {
    Program background;
    SearchSpace space;
    std::vector<PartialInterpretation> positives;
    std::vector<PartialInterpretation> negatives;
    std::vector<OrderingExample> orderings;

    /// Index into positives; throws TaskError for unknown ids.
    std::size_t positive_index(Term id) const;
    /// Rejects inconsistent examples, unresolvable or reflexive cautious
    /// orderings and duplicate ids. Throws TaskError.
    void validate() const;
};

/// Sorted indices into the task's search space.
struct Hypothesis {
    std::vector<std::size_t> entries;

    Hypothesis() = default;
    explicit Hypothesis(std::vector<std::size_t> entries);
    bool operator==(const Hypothesis&) const = default;
    auto operator<=>(const Hypothesis&) const = default;
};

std::int64_t cost(const SearchSpace& s, const Hypothesis& h);
Program rules(const SearchSpace& s, const Hypothesis& h);
/// Resolves ids to entries; throws TaskError for an unknown id.
Hypothesis hypothesis_from_ids(const SearchSpace& s, const std::vector<Term>& ids);
/// Matches each rule to an alpha-equivalent entry; throws TaskError if absent.
Hypothesis hypothesis_from_rules(const SearchSpace& s, const Program& p);

struct ViolatingInterpretation {
    Interpretation interpretation;
    bool operator==(const ViolatingInterpretation&) const = default;
};

struct ViolatingPair {
    Interpretation first;
    Interpretation second;
    std::size_t ordering = 0; // index into LearningTask::orderings
    bool operator==(const ViolatingPair&) const = default;
};

using ViolatingReason = std::variant<ViolatingInterpretation, ViolatingPair>;
std::string to_string(const ViolatingReason& r);

bool interpretation_extends(const Interpretation& a, const PartialInterpretation& e);
bool partial_extends(const PartialInterpretation& e1, const PartialInterpretation& e2);

/// Brave: some pair of answer sets extending e1, e2 has the first dominating.
/// Cautious: every such pair does (vacuously true without pairs).
bool respects_ordering(const Program& p, OrderingKind kind, const PartialInterpretation& e1,
                       const PartialInterpretation& e2);

bool is_positive_hypothesis(const LearningTask& t, const Hypothesis& h);
std::optional<ViolatingReason> find_violating_reason(const LearningTask& t, const Hypothesis& h);
bool is_remaining_hypothesis(const LearningTask& t, const Hypothesis& h, const std::vector<ViolatingReason>& vr);
bool is_inductive_solution(const LearningTask& t, const Hypothesis& h);

/// Answer sets of B ∪ H' cached per non-weak part, with per-answer-set weak
/// tuples cached per rule. All judgements above go through this.
class TaskEvaluator {
public:
    explicit TaskEvaluator(const LearningTask& t);
    ~TaskEvaluator();
    TaskEvaluator(const TaskEvaluator&) = delete;
    TaskEvaluator& operator=(const TaskEvaluator&) = delete;

    /// AS(B ∪ h), sorted.
    const std::vector<Interpretation>& answer_sets(const Hypothesis& h);
    bool covers_positives(const Hypothesis& h);
    bool respects(const Hypothesis& h, std::size_t ordering);
    bool is_positive(const Hypothesis& h);
    std::optional<ViolatingReason> violating_reason(const Hypothesis& h);
    bool is_remaining(const Hypothesis& h, const std::vector<ViolatingReason>& vr);
    bool is_remaining(const Hypothesis& h, const ViolatingReason& r);
    /// Number of distinct non-weak parts whose answer sets were computed.
    std::size_t groups() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct ConditionCheck {
    std::string name;  // e.g. "necessary (iii)"
    bool necessary = false;
    bool holds = true;
    std::string detail;
};

struct ConditionReport {
    std::vector<ConditionCheck> checks;
    /// Some necessary condition fails, so the task has no solution.
    bool unsatisfiable() const;
};

ConditionReport check_task_conditions(const LearningTask& t);
std::string to_string(const ConditionReport& r);

/// Parsed task file before the search space is built.
struct TaskSpec {
    Program background;
    std::vector<Rule> listed; // #space rules
    ModeBias bias;
    bool constants_given = false;
    std::vector<PartialInterpretation> positives;
    std::vector<PartialInterpretation> negatives;
    std::vector<OrderingExample> orderings;
};

/// Reads #pos/#neg/#brave_ordering/#cautious_ordering, mode declarations,
/// bias limits, #background { } and #space { } blocks, and bare rules.
TaskSpec parse_task_spec(std::string_view text);
/// Builds the space (constant pool defaults to the constants of B and the
/// examples) and validates the task.
LearningTask make_task(const TaskSpec& spec);
LearningTask parse_task(std::string_view text);
LearningTask load_task(const std::string& path);
std::string read_file(const std::string& path);

} // namespace loas
