// SPDX-License-Identifier: MIT
#include "loas/engine.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <omp.h>

#include "loas/asp_solver.hpp"
#include "loas/errors.hpp"
#include "loas/grounder.hpp"
#include "loas/meta.hpp"
#include "loas/parser.hpp"

namespace loas {

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::MetaNative: return "meta-native";
    case Strategy::MetaExternal: return "meta-external";
    case Strategy::Direct: return "direct";
    }
    return "?";
}

Strategy parse_strategy(std::string_view s) {
    if (s == "meta-native") return Strategy::MetaNative;
    if (s == "meta-external") return Strategy::MetaExternal;
    if (s == "direct") return Strategy::Direct;
    throw ConfigError("unknown strategy '" + std::string(s) + "' (expected direct, meta-native or meta-external)");
}

namespace {

// Meta atoms nest one level deeper than the task's own atoms.
const GroundOptions kMetaGround{.max_depth = 3, .seeds = {}};

std::string resolve_command(const EngineConfig& c) {
    if (!c.external_command.empty()) return c.external_command;
    if (const char* env = std::getenv(kSolverCmdEnv); env && *env) return env;
    throw ConfigError("the meta-external strategy needs a solver command (--solver-cmd or " +
                      std::string(kSolverCmdEnv) + ")");
}

void check_deadline(const Deadline& d) {
    if (d && Clock::now() > *d) throw Timeout("learning exceeded its time budget");
}

std::vector<Atom> split_atoms(const std::string& line) {
    std::vector<Atom> out;
    std::string cur;
    int depth = 0;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(parse_atom(cur));
        cur.clear();
    };
    for (char c : line) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && (c == ' ' || c == '\t' || c == '\r')) flush();
        else cur += c;
    }
    flush();
    return out;
}

} // namespace

std::optional<SolveResult> parse_solver_output(const std::string& transcript, int exit_code) {
    std::istringstream in(transcript);
    std::string line;
    std::optional<std::vector<Atom>> answer;
    std::optional<std::int64_t> cost;
    bool unsat = false, in_block = false;
    while (std::getline(in, line)) {
        if (line.rfind("Answer:", 0) == 0) {
            answer.emplace();
            in_block = true;
            continue;
        }
        if (line.rfind("Optimization:", 0) == 0) {
            std::istringstream nums(line.substr(13));
            std::int64_t v = 0;
            while (nums >> v) cost = v;
            in_block = false;
            continue;
        }
        if (line.rfind("UNSATISFIABLE", 0) == 0) unsat = true;
        if (in_block) {
            if (line.empty() || std::isupper(static_cast<unsigned char>(line[0]))) {
                in_block = false;
                continue;
            }
            try {
                auto more = split_atoms(line);
                answer->insert(answer->end(), more.begin(), more.end());
            } catch (const Error& e) {
                throw ExternalSolverError(exit_code, transcript, std::string("unreadable answer: ") + e.what());
            }
        }
    }
    if (answer) return SolveResult{Interpretation(std::move(*answer)), cost.value_or(0)};
    if (unsat) return std::nullopt;
    throw ExternalSolverError(exit_code, transcript,
                              "solver output has neither an answer nor UNSATISFIABLE (exit " +
                                  std::to_string(exit_code) + ")");
}

std::optional<SolveResult> solve_external(const Program& p, const std::string& command) {
    char path[] = "/tmp/loas-meta-XXXXXX";
    int fd = mkstemp(path);
    if (fd < 0) throw ExternalSolverError(-1, "", "cannot create a temporary program file");
    close(fd);
    {
        std::ofstream out(path);
        out << to_string(p);
    }
    std::string cmd = command;
    if (auto at = cmd.find("{}"); at != std::string::npos) cmd.replace(at, 2, path);
    else cmd += std::string(" ") + path;
    cmd += " 2>&1";

    std::string transcript;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        std::remove(path);
        throw ExternalSolverError(-1, "", "cannot start solver: " + command);
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) transcript.append(buf, n);
    int status = pclose(pipe);
    std::remove(path);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return parse_solver_output(transcript, code);
}

std::optional<SolveResult> solve_optimal(const Program& p, const EngineConfig& config, Deadline deadline) {
    if (config.strategy == Strategy::MetaExternal) return solve_external(p, resolve_command(config));
    auto m = solve_optimal(p, kMetaGround, deadline);
    if (!m) return std::nullopt;
    return SolveResult{std::move(m->atoms), m->sum(0)};
}

namespace {

void add_reason(LearnResult& res, ViolatingReason r, const EngineConfig& c) {
    if (std::find(res.violating_reasons.begin(), res.violating_reasons.end(), r) != res.violating_reasons.end())
        throw Error("internal: violating reason found twice: " + to_string(r));
    if (res.violating_reasons.size() >= c.max_iterations)
        throw IterationLimitExceeded("no optimal solution within " + std::to_string(c.max_iterations) + " iterations");
    res.violating_reasons.push_back(std::move(r));
}

// Excludes exactly the hypothesis h from further meta answer sets.
Rule exclude(const SearchSpace& s, const Hypothesis& h) {
    std::vector<BodyElement> body;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool in = std::binary_search(h.entries.begin(), h.entries.end(), i);
        body.push_back(Literal{make_atom("in_h", {s[i].id}), !in});
    }
    return Rule::constraint(std::move(body));
}

void learn_meta(const LearningTask& t, const EngineConfig& c, Deadline deadline, LearnResult& res) {
    auto ctx = meta::make_context(t);
    Program tm = meta::build_t_meta(ctx).program;
    for (;;) {
        ++res.iterations;
        Program prog = tm;
        prog.append(meta::build_vr_meta(ctx, res.violating_reasons).program);
        auto sol = solve_optimal(prog, c, deadline);
        if (!sol) return;
        if (c.on_meta_model) c.on_meta_model(sol->answer_set, sol->optimality);
        if (sol->optimality % 2 == 0) {
            auto d = meta::decode_meta_answer_set(ctx, sol->answer_set);
            if (!d.reason) throw MalformedMetaModel("even optimality without a violating reason");
            add_reason(res, std::move(*d.reason), c);
            continue;
        }
        // Odd optimality: collect every optimal hypothesis.
        std::set<Hypothesis> found;
        auto full = [&] { return c.max_solutions && found.size() >= c.max_solutions; };
        if (c.strategy == Strategy::MetaNative) {
            AspSolver solver(ground(prog, kMetaGround));
            solver.set_deadline(deadline);
            solver.enumerate_optimal(
                [&](const OptimalModel& m) {
                    if (c.on_meta_model) c.on_meta_model(m.atoms, m.sum(0));
                    found.insert(meta::decode_meta_answer_set(ctx, m.atoms).hypothesis);
                    return !full();
                },
                {}, [](Atom a) { return a.name() == "in_h"; });
        } else {
            found.insert(meta::decode_meta_answer_set(ctx, sol->answer_set).hypothesis);
            while (!full()) {
                check_deadline(deadline);
                Program more = prog;
                for (const auto& h : found) more.add(exclude(t.space, h));
                auto next = solve_optimal(more, c, deadline);
                if (!next || next->optimality != sol->optimality) break;
                if (c.on_meta_model) c.on_meta_model(next->answer_set, next->optimality);
                found.insert(meta::decode_meta_answer_set(ctx, next->answer_set).hypothesis);
            }
        }
        res.solutions.assign(found.begin(), found.end());
        return;
    }
}

// Subsets of the space with total cost exactly `budget`, entries sorted by cost.
class CostSubsets {
public:
    explicit CostSubsets(const SearchSpace& s) : s_(s) {
        for (std::size_t i = 0; i < s.size(); ++i) order_.push_back(i);
        std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return s[a].cost < s[b].cost; });
        for (const auto& e : s.entries()) total_ += e.cost;
    }
    std::int64_t total() const { return total_; }

    template <class F>
    void for_each(std::int64_t budget, F&& f) {
        chosen_.clear();
        dfs(0, budget, f);
    }

private:
    template <class F>
    bool dfs(std::size_t from, std::int64_t budget, F& f) {
        if (budget == 0) {
            std::vector<std::size_t> e = chosen_;
            std::sort(e.begin(), e.end());
            if (!f(Hypothesis(std::move(e)))) return false;
        }
        for (std::size_t k = from; k < order_.size(); ++k) {
            auto c = s_[order_[k]].cost;
            if (c > budget) break;
            chosen_.push_back(order_[k]);
            bool go = dfs(k + 1, budget - c, f);
            chosen_.pop_back();
            if (!go) return false;
        }
        return true;
    }

    const SearchSpace& s_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> chosen_;
    std::int64_t total_ = 0;
};

// The meta loop's fixpoint without the encoding: at each cost, violating
// remaining hypotheses contribute their reasons; the first cost with a
// non-violating positive hypothesis yields all of them.
void learn_direct(const LearningTask& t, const EngineConfig& c, Deadline deadline, LearnResult& res) {
    TaskEvaluator ev(t);
    CostSubsets subsets(t.space);
    std::size_t ticks = 0;
    for (std::int64_t cost = 0; cost <= subsets.total(); ++cost) {
        subsets.for_each(cost, [&](const Hypothesis& h) {
            if ((++ticks & 255) == 0) check_deadline(deadline);
            if (!ev.is_positive(h) || !ev.is_remaining(h, res.violating_reasons)) return true;
            if (auto r = ev.violating_reason(h)) {
                ++res.iterations;
                add_reason(res, std::move(*r), c);
                return true;
            }
            res.solutions.push_back(h);
            return !(c.max_solutions && res.solutions.size() >= c.max_solutions);
        });
        if (!res.solutions.empty()) break;
    }
    ++res.iterations;
    std::sort(res.solutions.begin(), res.solutions.end());
}

} // namespace

LearnResult learn(const LearningTask& t, const EngineConfig& config) {
    auto start = Clock::now();
    Deadline deadline;
    if (config.timeout_seconds) deadline = start + std::chrono::seconds(*config.timeout_seconds);
    if (config.max_iterations == 0) throw ConfigError("max_iterations must be positive");
    if (config.strategy == Strategy::MetaExternal) resolve_command(config);
    LearnResult res;
    if (config.strategy == Strategy::Direct) learn_direct(t, config, deadline, res);
    else learn_meta(t, config, deadline, res);
    res.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return res;
}

std::vector<Hypothesis> ilasp2(const LearningTask& t, const EngineConfig& config) { return learn(t, config).solutions; }

namespace {

std::vector<std::vector<Hypothesis>> subsets_by_cost(const LearningTask& t, std::size_t limit) {
    if (t.space.size() > limit)
        throw SpaceTooLarge("brute force supports at most " + std::to_string(limit) + " space entries, got " +
                            std::to_string(t.space.size()));
    std::map<std::int64_t, std::vector<Hypothesis>> by_cost;
    for (std::uint32_t mask = 0; mask < (1u << t.space.size()); ++mask) {
        std::vector<std::size_t> e;
        for (std::size_t i = 0; i < t.space.size(); ++i)
            if (mask & (1u << i)) e.push_back(i);
        Hypothesis h(std::move(e));
        by_cost[cost(t.space, h)].push_back(std::move(h));
    }
    std::vector<std::vector<Hypothesis>> out;
    for (auto& [c, hs] : by_cost) out.push_back(std::move(hs));
    return out;
}

bool inductive(TaskEvaluator& ev, const LearningTask& t, const Hypothesis& h) {
    if (!ev.covers_positives(h)) return false;
    for (std::size_t o = 0; o < t.orderings.size(); ++o)
        if (!ev.respects(h, o)) return false;
    for (const auto& a : ev.answer_sets(h))
        for (const auto& e : t.negatives)
            if (interpretation_extends(a, e)) return false;
    return true;
}

} // namespace

std::vector<Hypothesis> brute_force_solutions_serial(const LearningTask& t, std::size_t limit) {
    TaskEvaluator ev(t);
    for (const auto& group : subsets_by_cost(t, limit)) {
        std::vector<Hypothesis> out;
        for (const auto& h : group)
            if (inductive(ev, t, h)) out.push_back(h);
        if (!out.empty()) return out;
    }
    return {};
}

std::vector<Hypothesis> brute_force_solutions(const LearningTask& t, std::size_t limit) {
    auto groups = subsets_by_cost(t, limit);
    // One evaluator per thread; its caches are not shared.
    int threads = omp_get_max_threads();
    std::vector<std::unique_ptr<TaskEvaluator>> evs(static_cast<std::size_t>(threads));
    for (const auto& group : groups) {
        std::vector<char> ok(group.size(), 0);
        auto n = static_cast<std::int64_t>(group.size());
#pragma omp parallel for schedule(dynamic, 8)
        for (std::int64_t k = 0; k < n; ++k) {
            auto& ev = evs[static_cast<std::size_t>(omp_get_thread_num())];
            if (!ev) ev = std::make_unique<TaskEvaluator>(t);
            ok[static_cast<std::size_t>(k)] = inductive(*ev, t, group[static_cast<std::size_t>(k)]);
        }
        std::vector<Hypothesis> out;
        for (std::size_t k = 0; k < group.size(); ++k)
            if (ok[k]) out.push_back(group[k]);
        if (!out.empty()) return out;
    }
    return {};
}

} // namespace loas
