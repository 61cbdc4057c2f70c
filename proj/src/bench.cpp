// SPDX-License-Identifier: MIT
#include "loas/bench.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>

#include <omp.h>

#include "loas/asp_solver.hpp"
#include "loas/errors.hpp"
#include "loas/semantics.hpp"

namespace loas::bench {

namespace {

const char* const kDayNames[] = {"m", "t", "w", "th", "f", "sa", "su"};

Term day(int d) {
    if (d < 7) return Term::constant(kDayNames[d]);
    return Term::constant("d" + std::to_string(d + 1));
}

// Course types of the three-day timetable; later days repeat it.
const char* const kPattern[3][3] = {{"c1", "c2", "c2"}, {"c2", "c2", "c2"}, {"c2", "c1", "c2"}};

bool has_assign(const Rule& r) {
    return std::any_of(r.body.begin(), r.body.end(), [](const BodyElement& b) {
        auto* l = std::get_if<Literal>(&b);
        return l && !l->negated && l->atom.name() == "assign";
    });
}

std::mt19937_64 stream(std::uint64_t seed, int a, int b) {
    std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
    return std::mt19937_64(s);
}

std::vector<WeakProfile> profiles(const std::vector<Interpretation>& as, const Program& weak) {
    std::vector<WeakProfile> out(as.size());
    auto n = static_cast<std::int64_t>(as.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = weak_profile(weak, as[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<Atom> assign_atoms(const Program& b) {
    std::vector<Atom> out;
    for (const auto& r : b.rules)
        if (r.is_fact() && r.head.front().name() == "slot") {
            auto args = r.head.front().args();
            out.push_back(make_atom("assign", {args.begin(), args.end()}));
        }
    std::sort(out.begin(), out.end(), TermLess{});
    return out;
}

} // namespace

Program scheduling_background(int days, int slots_per_day) {
    if (days < 1 || slots_per_day < 1) throw ConfigError("days and slots per day must be positive");
    Program b;
    for (int d = 0; d < days; ++d)
        for (int s = 1; s <= slots_per_day; ++s) b.add(Rule::normal(make_atom("slot", {day(d), Term::integer(s)})));
    for (int s = 1; s <= slots_per_day; ++s)
        for (int s2 = 1; s2 <= slots_per_day; ++s2)
            if (s != s2) b.add(Rule::normal(make_atom("neq", {Term::integer(s), Term::integer(s2)})));
    for (int d = 0; d < days; ++d)
        for (int d2 = 0; d2 < days; ++d2)
            if (d != d2) b.add(Rule::normal(make_atom("neq", {day(d), day(d2)})));
    for (int d = 0; d < days; ++d)
        for (int s = 1; s <= slots_per_day; ++s)
            b.add(Rule::normal(
                make_atom("type", {day(d), Term::integer(s), Term::constant(kPattern[d % 3][(s - 1) % 3])})));
    Term x = Term::variable("X"), y = Term::variable("Y");
    b.add(Rule::choice(0, 1, {make_atom("assign", {x, y})}, {Literal{make_atom("slot", {x, y}), false}}));
    return b;
}

LearningTask generate_scheduling_task(const BenchSpec& spec) {
    ModeBias m;
    m.orderings = {parse_mode("assign(v,v)"), parse_mode("neq(v,v)"), parse_mode("type(v,v,c)")};
    m.weights = {-1, 1};
    m.max_level = 2;
    m.max_body = spec.max_body;
    m.max_vars = spec.max_vars;
    m.max_neg = spec.max_neg;
    m.constants = {Term::constant("c1"), Term::constant("c2")};
    std::vector<Rule> kept;
    const SearchSpace full = build_search_space(m);
    for (const auto& e : full.entries())
        if (has_assign(e.rule)) kept.push_back(e.rule);
    LearningTask t;
    t.background = scheduling_background(spec.days, spec.slots_per_day);
    t.space = build_search_space(kept, ModeBias{});
    return t;
}

Hypothesis sample_target_hypothesis(const LearningTask& t, std::mt19937_64& rng, int attempts) {
    if (t.space.empty()) throw ExhaustedSampling("empty search space");
    auto as = enumerate_answer_sets(t.background.non_weak());
    std::uniform_int_distribution<std::size_t> pick(0, t.space.size() - 1);
    std::uniform_int_distribution<int> size(1, 3);
    for (int k = 0; k < attempts; ++k) {
        auto want = std::min<std::size_t>(static_cast<std::size_t>(size(rng)), t.space.size());
        std::vector<std::size_t> e;
        while (e.size() < want) {
            auto i = pick(rng);
            if (std::find(e.begin(), e.end(), i) == e.end()) e.push_back(i);
        }
        Hypothesis h(std::move(e));
        Program weak = t.background.weak();
        weak.append(rules(t.space, h));
        auto prof = profiles(as, weak);
        bool ranks = std::any_of(prof.begin(), prof.end(),
                                 [&](const WeakProfile& p) { return p.level_sums != prof.front().level_sums; });
        if (ranks) return h;
    }
    throw ExhaustedSampling("no hypothesis ranking two answer sets differently after " + std::to_string(attempts) +
                            " samples");
}

double generate_ordering_examples(LearningTask& t, const Hypothesis& target, int n, double fullness_lo,
                                  double fullness_hi, std::mt19937_64& rng, int attempts) {
    if (n <= 0) return 0;
    auto as = enumerate_answer_sets(t.background.non_weak());
    Program weak = t.background.weak();
    weak.append(rules(t.space, target));
    auto prof = profiles(as, weak);
    auto atoms = assign_atoms(t.background);
    const auto total = static_cast<int>(atoms.size());
    int lo = std::clamp(static_cast<int>(std::ceil(fullness_lo * total - 1e-9)), 0, total);
    int hi = std::clamp(static_cast<int>(std::floor(fullness_hi * total + 1e-9)), lo, total);

    std::uniform_int_distribution<std::size_t> pick_as(0, as.size() - 1);
    std::uniform_int_distribution<int> pick_k(lo, hi);
    std::size_t next_pos = t.positives.size(), next_ord = t.orderings.size();
    double fullness_sum = 0;
    int endpoints = 0;

    auto endpoint = [&](int& k) {
        const auto& a = as[pick_as(rng)];
        k = pick_k(rng);
        std::vector<Atom> shuffled = atoms;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::vector<Atom> inc, exc;
        for (int j = 0; j < k; ++j) (a.contains(shuffled[j]) ? inc : exc).push_back(shuffled[j]);
        return PartialInterpretation(Term::constant("e" + std::to_string(++next_pos)), inc, exc);
    };
    auto extensions = [&](const PartialInterpretation& e) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < as.size(); ++i)
            if (interpretation_extends(as[i], e)) out.push_back(i);
        return out;
    };

    int made = 0;
    for (int tries = 0; made < n; ++tries) {
        if (tries >= attempts)
            throw ExhaustedSampling("only " + std::to_string(made) + " of " + std::to_string(n) +
                                    " bravely respected orderings found");
        int k1 = 0, k2 = 0;
        auto saved = next_pos;
        auto e1 = endpoint(k1), e2 = endpoint(k2);
        auto x1 = extensions(e1), x2 = extensions(e2);
        bool brave = false, cautious = true;
        for (auto i : x1)
            for (auto j : x2) {
                bool d = dominates(prof[i], prof[j]);
                brave |= d;
                cautious &= d;
            }
        if (!brave) {
            next_pos = saved;
            continue;
        }
        OrderingExample o;
        o.id = Term::constant("o" + std::to_string(++next_ord));
        o.first = e1.id;
        o.second = e2.id;
        o.kind = cautious ? OrderingKind::Cautious : OrderingKind::Brave;
        t.positives.push_back(std::move(e1));
        t.positives.push_back(std::move(e2));
        t.orderings.push_back(o);
        fullness_sum += static_cast<double>(k1 + k2) / total;
        endpoints += 2;
        ++made;
    }
    return fullness_sum / endpoints;
}

double pairwise_accuracy(const Program& b, const Program& target, const Program& learned) {
    auto as = enumerate_answer_sets(b.non_weak());
    Program pt = b.weak(), pl = b.weak();
    pt.append(target.weak());
    pl.append(learned.weak());
    auto a = profiles(as, pt), c = profiles(as, pl);
    auto n = static_cast<std::int64_t>(as.size());
    std::int64_t agree = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : agree)
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = i + 1; j < n; ++j) {
            auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            agree += preference(a[ui], a[uj]) == preference(c[ui], c[uj]);
        }
    auto pairs = n * (n - 1) / 2;
    return pairs == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(pairs);
}

double pairwise_accuracy_serial(const Program& b, const Program& target, const Program& learned) {
    auto as = enumerate_answer_sets(b.non_weak());
    Program pt = b.weak(), pl = b.weak();
    pt.append(target.weak());
    pl.append(learned.weak());
    std::vector<WeakProfile> a, c;
    for (const auto& x : as) {
        a.push_back(weak_profile(pt, x));
        c.push_back(weak_profile(pl, x));
    }
    std::size_t agree = 0, pairs = 0;
    for (std::size_t i = 0; i < as.size(); ++i)
        for (std::size_t j = i + 1; j < as.size(); ++j) {
            ++pairs;
            agree += preference(a[i], a[j]) == preference(c[i], c[j]);
        }
    return pairs == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(pairs);
}

std::vector<TrialRow> run_accuracy(const BenchSpec& spec) {
    LearningTask skeleton = generate_scheduling_task(spec);
    std::vector<Hypothesis> targets;
    for (int k = 0; k < spec.targets; ++k) {
        auto rng = stream(spec.seed, k, -1);
        targets.push_back(sample_target_hypothesis(skeleton, rng));
    }
    std::vector<TrialRow> rows(static_cast<std::size_t>(spec.targets * spec.trials));
    auto n = static_cast<std::int64_t>(rows.size());
    std::exception_ptr failure;
    // The inner kernels stay serial inside a parallel trial.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < n; ++r) try {
        int target = static_cast<int>(r) / spec.trials, trial = static_cast<int>(r) % spec.trials;
        auto rng = stream(spec.seed, target, trial);
        LearningTask t = skeleton;
        const auto& ht = targets[static_cast<std::size_t>(target)];
        TrialRow row;
        row.target_id = target;
        row.trial = trial;
        row.n_examples = spec.examples;
        row.fullness_mean = generate_ordering_examples(t, ht, spec.examples, spec.fullness_lo, spec.fullness_hi, rng);
        EngineConfig c;
        c.strategy = spec.strategy;
        c.max_solutions = 1;
        c.timeout_seconds = spec.timeout_seconds;
        auto res = learn(t, c);
        row.wall_ms = res.wall_ms;
        row.iterations = res.iterations;
        Program learned = res.solutions.empty() ? Program{} : rules(t.space, res.solutions.front());
        row.accuracy = pairwise_accuracy_serial(t.background, rules(t.space, ht), learned);
        rows[static_cast<std::size_t>(r)] = row;
    } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

void write_csv(std::ostream& out, const std::vector<TrialRow>& rows) {
    out << "target_id,trial,n_examples,fullness_mean,accuracy,wall_ms,iterations\n";
    for (const auto& r : rows)
        out << r.target_id << ',' << r.trial << ',' << r.n_examples << ',' << r.fullness_mean << ',' << r.accuracy
            << ',' << r.wall_ms << ',' << r.iterations << '\n';
}

double mean_accuracy(const std::vector<TrialRow>& rows) {
    if (rows.empty()) return 0;
    double s = 0;
    for (const auto& r : rows) s += r.accuracy;
    return s / static_cast<double>(rows.size());
}

} // namespace loas::bench
