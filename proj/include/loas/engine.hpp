// SPDX-License-Identifier: MIT
// The ILASP2 loop over the meta encoding (native or external solver), an
// equivalent direct search over hypothesis subsets, and a brute-force oracle.
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "loas/program.hpp"
#include "loas/task.hpp"

namespace loas {

enum class Strategy : std::uint8_t { MetaNative, MetaExternal, Direct };

std::string to_string(Strategy s);
/// "meta-native", "meta-external" or "direct"; throws ConfigError otherwise.
Strategy parse_strategy(std::string_view s);

/// Environment variable naming the default external solver command.
inline constexpr const char* kSolverCmdEnv = "LOAS_SOLVER_CMD";

struct EngineConfig {
    Strategy strategy = Strategy::MetaNative;
    /// `{}` is replaced by the program path; without it the path is appended.
    std::string external_command;
    std::size_t max_iterations = 10000;
    std::optional<int> timeout_seconds;
    /// Stop after this many optimal solutions (0 keeps all of them).
    std::size_t max_solutions = 0;
    /// Sees every optimal meta-level answer set with its optimality.
    std::function<void(const Interpretation&, std::int64_t)> on_meta_model;
};

struct SolveResult {
    Interpretation answer_set;
    std::int64_t optimality = 0; // level-0 cost
};

/// Some optimal answer set with its level-0 cost, through the configured
/// backend (Direct uses the native one). Absent when p has no answer set.
std::optional<SolveResult> solve_optimal(const Program& p, const EngineConfig& config,
                                         std::optional<std::chrono::steady_clock::time_point> deadline = {});

/// Runs `command` on a file holding p and parses its transcript.
std::optional<SolveResult> solve_external(const Program& p, const std::string& command);
/// Atoms of the last Answer block, cost of the last Optimization line.
/// Throws ExternalSolverError when neither an answer nor UNSATISFIABLE is found.
std::optional<SolveResult> parse_solver_output(const std::string& transcript, int exit_code = 0);

struct LearnResult {
    std::vector<Hypothesis> solutions; // sorted
    std::size_t iterations = 0;        // optimisation rounds, the last one included
    std::vector<ViolatingReason> violating_reasons;
    double wall_ms = 0;
};

/// Throws IterationLimitExceeded, Timeout, ConfigError and solver errors.
LearnResult learn(const LearningTask& t, const EngineConfig& config = {});
std::vector<Hypothesis> ilasp2(const LearningTask& t, const EngineConfig& config = {});

inline constexpr std::size_t kBruteForceLimit = 16;

/// Minimum-cost inductive solutions by checking every subset of S_M.
/// Throws SpaceTooLarge beyond `limit` entries.
std::vector<Hypothesis> brute_force_solutions(const LearningTask& t, std::size_t limit = kBruteForceLimit);
/// Same, one subset at a time on a single evaluator.
std::vector<Hypothesis> brute_force_solutions_serial(const LearningTask& t, std::size_t limit = kBruteForceLimit);

} // namespace loas
