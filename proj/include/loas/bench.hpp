// SPDX-License-Identifier: MIT
// Interview-timetable accuracy experiment: random target preferences, random
// ordering examples, learned hypotheses scored by pairwise ranking agreement.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "loas/engine.hpp"
#include "loas/hyp_space.hpp"
#include "loas/task.hpp"

namespace loas::bench {

struct BenchSpec {
    int days = 3;
    int slots_per_day = 3;
    int targets = 10;
    int trials = 5;
    int examples = 10;
    double fullness_lo = 5.0 / 9.0; // fraction of assign atoms specified
    double fullness_hi = 1.0;
    std::uint64_t seed = 1;
    /// Limits of the generated weak-constraint space.
    std::size_t max_body = 2;
    std::size_t max_vars = 2;
    std::size_t max_neg = 3;
    Strategy strategy = Strategy::Direct;
    std::optional<int> timeout_seconds;
};

/// Slots, neq over slots and over days, the type/3 pattern (cycled past three
/// days) and the assignment choice rule.
Program scheduling_background(int days, int slots_per_day);

/// Background plus the space of weak constraints over assign, neq and type
/// with weights -1 and 1 on two levels. Constraints without an assign literal
/// rank every timetable alike and are left out.
LearningTask generate_scheduling_task(const BenchSpec& spec);

/// 1-3 distinct weak constraints of the space that rank some pair of
/// answer sets of B. Throws ExhaustedSampling after `attempts` rejections.
Hypothesis sample_target_hypothesis(const LearningTask& t, std::mt19937_64& rng, int attempts = 1000);

/// Adds n orderings (and their endpoints as positives) that B with the target
/// respects bravely; those it also respects cautiously become cautious.
/// Returns the mean fullness of the endpoints.
double generate_ordering_examples(LearningTask& t, const Hypothesis& target, int n, double fullness_lo,
                                  double fullness_hi, std::mt19937_64& rng, int attempts = 10000);

/// Fraction of unordered pairs of AS(b) on which both programs give the same
/// three-way preference.
double pairwise_accuracy(const Program& b, const Program& target, const Program& learned);
double pairwise_accuracy_serial(const Program& b, const Program& target, const Program& learned);

struct TrialRow {
    int target_id = 0;
    int trial = 0;
    int n_examples = 0;
    double fullness_mean = 0;
    double accuracy = 0;
    double wall_ms = 0;
    std::size_t iterations = 0;
};

/// Every (target, trial) run; trials run in parallel with RNG streams derived
/// from (seed, target, trial).
std::vector<TrialRow> run_accuracy(const BenchSpec& spec);
void write_csv(std::ostream& out, const std::vector<TrialRow>& rows);
double mean_accuracy(const std::vector<TrialRow>& rows);

} // namespace loas::bench
