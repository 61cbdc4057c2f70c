// SPDX-License-Identifier: MIT
// Answer-set search over ground programs: Clark completion plus weight
// constraints on a CDCL core, loop nogoods from unfounded sets, and
// lexicographic optimization of weak constraints.
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "loas/grounder.hpp"
#include "loas/program.hpp"
#include "loas/sat_solver.hpp"

namespace loas {

struct Assumptions {
    std::vector<Atom> true_atoms;
    std::vector<Atom> false_atoms;
};

struct OptimalModel {
    Interpretation atoms;
    std::map<std::int64_t, std::int64_t> level_sums; // only non-zero levels

    std::int64_t sum(std::int64_t level) const {
        auto it = level_sums.find(level);
        return it == level_sums.end() ? 0 : it->second;
    }
};

class AspSolver {
public:
    enum class Mode {
        Stable,   // answer sets
        Classical // models of the rules read as implications
    };

    explicit AspSolver(const Program& ground, Mode mode = Mode::Stable);
    ~AspSolver();
    AspSolver(const AspSolver&) = delete;
    AspSolver& operator=(const AspSolver&) = delete;

    void set_deadline(std::optional<std::chrono::steady_clock::time_point> d);

    /// Some model under the assumptions, ignoring weak constraints.
    std::optional<Interpretation> find(const Assumptions& a = {});

    /// Calls f on each model (projected onto atoms accepted by `projection`
    /// when given; one model per distinct projection). f returns false to stop.
    std::size_t enumerate(const std::function<bool(const Interpretation&)>& f, const Assumptions& a = {},
                          const std::function<bool(Atom)>& projection = {});

    /// One optimal model w.r.t. the weak constraints.
    std::optional<OptimalModel> optimize(const Assumptions& a = {});

    /// Every optimal model (projected as in enumerate). Returns their count.
    std::size_t enumerate_optimal(const std::function<bool(const OptimalModel&)>& f, const Assumptions& a = {},
                                  const std::function<bool(Atom)>& projection = {});

    const sat::Solver::Stats& stats() const;
    std::size_t num_atoms() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// AS(p), sorted canonically. Grounds p first.
std::vector<Interpretation> enumerate_answer_sets(const Program& p, const GroundOptions& options = {});

/// AS*(p), sorted canonically.
std::vector<Interpretation> optimal_answer_sets(const Program& p, const GroundOptions& options = {});

/// Some optimal answer set of p with its level sums; nullopt when p has none.
std::optional<OptimalModel> solve_optimal(const Program& p, const GroundOptions& options = {},
                                          std::optional<std::chrono::steady_clock::time_point> deadline = {});

/// True iff some classical model of the non-weak rules of p contains `inc`
/// and avoids `exc`. p is instantiated over its own constants plus those of
/// the given atoms; programs with function symbols fall back to relevance
/// grounding.
bool has_classical_model_extending(const Program& p, const std::vector<Atom>& inc, const std::vector<Atom>& exc);

} // namespace loas
