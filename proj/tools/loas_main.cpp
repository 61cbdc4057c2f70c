// SPDX-License-Identifier: MIT
// loas: learning weak constraints from ordering examples.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "loas/asp_solver.hpp"
#include "loas/bench.hpp"
#include "loas/engine.hpp"
#include "loas/errors.hpp"
#include "loas/grounder.hpp"
#include "loas/meta.hpp"
#include "loas/parser.hpp"
#include "loas/task.hpp"

using namespace loas;
using json = nlohmann::json;

namespace {

enum Exit { Ok = 0, Unsat = 1, Usage = 2, Resource = 3 };

struct Options {
    std::string task, hyp, file, vr, strategy = "meta-native", solver_cmd, csv, fullness = "5:9";
    std::optional<std::size_t> max_body, max_vars;
    std::size_t max_iterations = 10000, max_solutions = 0;
    std::optional<int> timeout;
    bool json = false;
    bool strategy_given = false;
    int days = 3, slots = 3, targets = 10, trials = 5, examples = 10;
    std::uint64_t seed = 1;
};

LearningTask load(const Options& o) {
    TaskSpec spec = parse_task_spec(read_file(o.task));
    if (o.max_body) spec.bias.max_body = *o.max_body;
    if (o.max_vars) spec.bias.max_vars = *o.max_vars;
    return make_task(spec);
}

EngineConfig config(const Options& o) {
    EngineConfig c;
    c.strategy = parse_strategy(o.strategy);
    c.external_command = o.solver_cmd;
    c.max_iterations = o.max_iterations;
    c.timeout_seconds = o.timeout;
    c.max_solutions = o.max_solutions;
    return c;
}

std::string hypothesis_text(const SearchSpace& s, const Hypothesis& h) {
    std::string out;
    for (std::size_t i : h.entries) out += to_string(s[i].rule) + "\n";
    return out;
}

int cmd_learn(const Options& o) {
    LearningTask t = load(o);
    auto report = check_task_conditions(t);
    if (report.unsatisfiable()) {
        std::cerr << to_string(report);
        if (o.json) std::cout << json{{"solutions", json::array()}, {"iterations", 0},
                                      {"violatingReasons", json::array()}, {"wallTimeMs", 0}}.dump(2) << "\n";
        return Unsat;
    }
    auto res = learn(t, config(o));
    if (o.json) {
        json sols = json::array(), reasons = json::array();
        for (const auto& h : res.solutions) {
            json rs = json::array();
            for (std::size_t i : h.entries) rs.push_back(to_string(t.space[i].rule));
            sols.push_back({{"rules", rs}, {"cost", cost(t.space, h)}});
        }
        for (const auto& r : res.violating_reasons) reasons.push_back(to_string(r));
        std::cout << json{{"solutions", sols}, {"iterations", res.iterations}, {"violatingReasons", reasons},
                          {"wallTimeMs", res.wall_ms}}.dump(2)
                  << "\n";
    } else {
        for (std::size_t k = 0; k < res.solutions.size(); ++k)
            std::cout << "%% solution " << k + 1 << "\n" << hypothesis_text(t.space, res.solutions[k]);
        if (res.solutions.empty()) std::cout << "UNSATISFIABLE\n";
    }
    return res.solutions.empty() ? Unsat : Ok;
}

int cmd_check(const Options& o) {
    LearningTask t = load(o);
    Program h = parse_program(read_file(o.hyp));
    // Judge the given rules as they are, whether or not S_M contains them.
    LearningTask judged = t;
    judged.space = build_search_space(h.rules, ModeBias{});
    std::vector<std::size_t> all(judged.space.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    Hypothesis hyp(all);
    TaskEvaluator ev(judged);
    bool positive = ev.is_positive(hyp);
    auto reason = positive ? ev.violating_reason(hyp) : std::nullopt;
    bool ok = positive && !reason;
    if (o.json) {
        json j{{"inductive", ok}, {"positive", positive}, {"cost", cost(judged.space, hyp)}};
        if (reason) j["violatingReason"] = to_string(*reason);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (ok ? "inductive solution" : positive ? "violating hypothesis" : "not a positive hypothesis")
                  << " (cost " << cost(judged.space, hyp) << ")\n";
        if (reason) std::cout << "reason: " << to_string(*reason) << "\n";
    }
    return ok ? Ok : Unsat;
}

// Violating reasons, one per statement:
//   #violating_interpretation({a, b}).
//   #violating_pair(o1, {a}, {b}).
std::vector<ViolatingReason> parse_reasons(const std::string& text, const LearningTask& t) {
    std::vector<ViolatingReason> out;
    auto set_at = [&](std::size_t& pos) {
        auto open = text.find('{', pos), close = text.find('}', open);
        if (open == std::string::npos || close == std::string::npos) throw SyntaxError(1, pos + 1, "expected { ... }");
        std::string body = text.substr(open + 1, close - open - 1), facts;
        int depth = 0;
        for (char c : body) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            facts += (c == ',' && depth == 0) ? '.' : c;
        }
        pos = close + 1;
        std::vector<Atom> atoms;
        if (facts.find_first_not_of(" \t\n") != std::string::npos)
            for (const auto& r : parse_program(facts + ".").rules) atoms.push_back(r.head.front());
        return Interpretation(atoms);
    };
    std::size_t pos = 0;
    while ((pos = text.find('#', pos)) != std::string::npos) {
        if (text.compare(pos, 25, "#violating_interpretation") == 0) {
            out.push_back(ViolatingInterpretation{set_at(pos)});
        } else if (text.compare(pos, 15, "#violating_pair") == 0) {
            auto open = text.find('(', pos), comma = text.find(',', open);
            std::string id = text.substr(open + 1, comma - open - 1);
            id.erase(0, id.find_first_not_of(" \t"));
            id.erase(id.find_last_not_of(" \t") + 1);
            std::size_t o = 0;
            while (o < t.orderings.size() && to_string(t.orderings[o].id) != id) ++o;
            if (o == t.orderings.size()) throw TaskError("unknown ordering id " + id);
            pos = comma;
            auto a = set_at(pos);
            auto b = set_at(pos);
            out.push_back(ViolatingPair{a, b, o});
        } else {
            throw SyntaxError(1, pos + 1, "expected #violating_interpretation or #violating_pair");
        }
    }
    return out;
}

int cmd_emit_meta(const Options& o) {
    LearningTask t = load(o);
    auto ctx = meta::make_context(t);
    Program p = meta::build_t_meta(ctx).program;
    if (!o.vr.empty()) p.append(meta::build_vr_meta(ctx, parse_reasons(read_file(o.vr), t)).program);
    std::cout << to_string(p);
    return Ok;
}

int cmd_consistency(const Options& o) {
    LearningTask t = load(o);
    auto report = check_task_conditions(t);
    std::cout << to_string(report);
    return report.unsatisfiable() ? Unsat : Ok;
}

int cmd_ground(const Options& o) {
    std::cout << to_string(ground(parse_program(read_file(o.file))));
    return Ok;
}

// Answers in the transcript format the external backend reads.
int cmd_solve(const Options& o) {
    Program p = parse_program(read_file(o.file), {.allow_reserved = true});
    auto m = solve_optimal(p, GroundOptions{.max_depth = 3, .seeds = {}});
    if (!m) {
        std::cout << "UNSATISFIABLE\n";
        return Unsat;
    }
    std::cout << "Answer: 1\n";
    std::string sep;
    for (Atom a : m->atoms) {
        std::cout << sep << to_string(a);
        sep = " ";
    }
    std::cout << "\n";
    std::int64_t hi = 0, lo = 0;
    for (auto [l, s] : m->level_sums) hi = std::max(hi, l), lo = std::min(lo, l);
    std::cout << "Optimization:";
    for (auto l = hi; l >= lo; --l) std::cout << " " << m->sum(l);
    std::cout << "\nOPTIMUM FOUND\n";
    return Ok;
}

std::pair<double, double> parse_fullness(const std::string& s, int atoms) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("--fullness expects lo:hi");
    double lo = std::stod(s.substr(0, colon)), hi = std::stod(s.substr(colon + 1));
    // Values above 1 count assign atoms.
    if (hi > 1.0) lo /= atoms, hi /= atoms;
    if (lo < 0 || hi > 1 || lo > hi) throw ConfigError("--fullness range out of bounds: " + s);
    return {lo, hi};
}

int cmd_bench(const Options& o) {
    bench::BenchSpec spec;
    spec.days = o.days;
    spec.slots_per_day = o.slots;
    spec.targets = o.targets;
    spec.trials = o.trials;
    spec.examples = o.examples;
    spec.seed = o.seed;
    if (o.strategy_given) spec.strategy = parse_strategy(o.strategy);
    spec.timeout_seconds = o.timeout;
    if (o.max_body) spec.max_body = *o.max_body;
    if (o.max_vars) spec.max_vars = *o.max_vars;
    std::tie(spec.fullness_lo, spec.fullness_hi) = parse_fullness(o.fullness, o.days * o.slots);
    auto rows = bench::run_accuracy(spec);
    if (!o.csv.empty()) {
        std::ofstream out(o.csv);
        if (!out) throw ConfigError("cannot write " + o.csv);
        bench::write_csv(out, rows);
    }
    double ms = 0;
    for (const auto& r : rows) ms += r.wall_ms;
    std::cout << "examples=" << o.examples << " runs=" << rows.size() << " mean_accuracy=" << bench::mean_accuracy(rows)
              << " mean_wall_ms=" << (rows.empty() ? 0 : ms / static_cast<double>(rows.size())) << "\n";
    return Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learning weak constraints from ordering examples (ILASP2)"};
    app.require_subcommand(1);
    Options o;

    auto engine_flags = [&](CLI::App* sub) {
        sub->add_option("--strategy", o.strategy, "direct, meta-native or meta-external")
            ->check(CLI::IsMember({"direct", "meta-native", "meta-external"}));
        sub->add_option("--solver-cmd", o.solver_cmd, "external solver command; {} is the program path");
        sub->add_option("--max-body", o.max_body, "largest body in the generated space");
        sub->add_option("--max-vars", o.max_vars, "most distinct variables per generated rule");
        sub->add_option("--max-iterations", o.max_iterations, "bound on violating reasons")->check(CLI::PositiveNumber);
        sub->add_option("--max-solutions", o.max_solutions, "stop after this many solutions (0: all)");
        sub->add_option("--timeout", o.timeout, "wall-clock budget in seconds")->check(CLI::PositiveNumber);
        sub->add_flag("--json", o.json, "machine-readable output");
    };

    auto* learn_cmd = app.add_subcommand("learn", "print every optimal inductive solution");
    learn_cmd->add_option("task", o.task)->required()->check(CLI::ExistingFile);
    engine_flags(learn_cmd);

    auto* check_cmd = app.add_subcommand("check", "judge a hypothesis against a task");
    check_cmd->add_option("task", o.task)->required()->check(CLI::ExistingFile);
    check_cmd->add_option("hypothesis", o.hyp)->required()->check(CLI::ExistingFile);
    engine_flags(check_cmd);

    auto* ground_cmd = app.add_subcommand("ground", "print the grounding of a program");
    ground_cmd->add_option("file", o.file)->required()->check(CLI::ExistingFile);

    auto* meta_cmd = app.add_subcommand("emit-meta", "print T_meta, with VR_meta when --vr is given");
    meta_cmd->add_option("task", o.task)->required()->check(CLI::ExistingFile);
    meta_cmd->add_option("--vr", o.vr, "violating reasons file")->check(CLI::ExistingFile);
    engine_flags(meta_cmd);

    auto* cons_cmd = app.add_subcommand("consistency", "report necessary and sufficient conditions");
    cons_cmd->add_option("task", o.task)->required()->check(CLI::ExistingFile);
    engine_flags(cons_cmd);

    auto* solve_cmd = app.add_subcommand("solve", "print one optimal answer set in solver transcript form");
    solve_cmd->add_option("file", o.file)->required()->check(CLI::ExistingFile);

    auto* bench_cmd = app.add_subcommand("bench", "run an experiment");
    auto* acc_cmd = bench_cmd->add_subcommand("accuracy", "pairwise ranking accuracy of learned preferences");
    bench_cmd->require_subcommand(1);
    acc_cmd->add_option("--days", o.days)->check(CLI::PositiveNumber);
    acc_cmd->add_option("--slots", o.slots)->check(CLI::PositiveNumber);
    acc_cmd->add_option("--targets", o.targets)->check(CLI::PositiveNumber);
    acc_cmd->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
    acc_cmd->add_option("--examples", o.examples)->check(CLI::NonNegativeNumber);
    acc_cmd->add_option("--fullness", o.fullness, "lo:hi as fractions or assign-atom counts");
    acc_cmd->add_option("--seed", o.seed);
    acc_cmd->add_option("--csv", o.csv);
    engine_flags(acc_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? Ok : Usage;
    }

    try {
        if (*learn_cmd) return cmd_learn(o);
        if (*check_cmd) return cmd_check(o);
        if (*ground_cmd) return cmd_ground(o);
        if (*meta_cmd) return cmd_emit_meta(o);
        if (*cons_cmd) return cmd_consistency(o);
        if (*solve_cmd) return cmd_solve(o);
        if (*acc_cmd) {
            o.strategy_given = acc_cmd->count("--strategy") > 0;
            return cmd_bench(o);
        }
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const TaskError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const SafetyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const IterationLimitExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Resource;
    } catch (const Timeout& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Resource;
    } catch (const SearchSpaceExplosion& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Resource;
    } catch (const NonFiniteGrounding& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Resource;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }
    return Usage;
}
