// SPDX-License-Identifier: MIT
#include "loas/asp_solver.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "loas/errors.hpp"
#include "loas/semantics.hpp"

namespace loas {

using sat::Lit;
using sat::Var;

namespace {

// WC bounds equivalent to `sum op b`.
void bounds_for(CmpOp op, std::int64_t b, std::int64_t& lo, std::int64_t& hi) {
    lo = -sat::kNoBound;
    hi = sat::kNoBound;
    switch (op) {
    case CmpOp::Lt: hi = b - 1; break;
    case CmpOp::Le: hi = b; break;
    case CmpOp::Gt: lo = b + 1; break;
    case CmpOp::Ge: lo = b; break;
    case CmpOp::Eq: lo = hi = b; break;
    case CmpOp::Ne: break; // handled by the caller
    }
}

} // namespace

struct AspSolver::Impl {
    struct Support {
        std::vector<int> heads;
        std::vector<int> pos;
        std::vector<Lit> ext; // negative literals and aggregates
        Lit body;
        bool choice = false;
    };
    struct Tuple {
        std::int64_t weight, level;
        Lit lit;
    };

    Mode mode;
    sat::Solver s;
    Lit top;
    std::vector<Atom> atoms; // canonical order
    std::unordered_map<Atom, int> atom_id;
    std::vector<Var> atom_var;
    std::map<std::vector<Lit>, Lit> conj_cache;
    std::vector<Support> rules;
    std::vector<std::vector<int>> supports; // atom -> rule indices
    std::vector<std::vector<int>> pos_occ;  // atom -> rules with it in the positive body
    std::vector<int> scc;
    bool tight = true;
    std::vector<Tuple> tuples;
    std::vector<std::int64_t> levels; // descending

    Impl(const Program& p, Mode m) : mode(m) {
        top = sat::pos(s.new_var());
        s.add_clause({top});
        collect_atoms(p);
        build(p);
    }

    void collect_atoms(const Program& p) {
        std::set<Atom, TermLess> all;
        for (const auto& r : p.rules) {
            if (!r.is_ground()) throw NotGround("solver requires a ground program: " + to_string(r));
            for (Atom h : r.head) all.insert(h);
            for (const auto& b : r.body) {
                if (auto* l = std::get_if<Literal>(&b)) all.insert(l->atom);
                else if (auto* c = std::get_if<CountAggregate>(&b)) all.insert(c->atoms.begin(), c->atoms.end());
                else if (auto* sa = std::get_if<SumAggregate>(&b))
                    for (const auto& e : sa->elements) all.insert(e.atom);
            }
        }
        atoms.assign(all.begin(), all.end());
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            atom_id.emplace(atoms[i], static_cast<int>(i));
            atom_var.push_back(s.new_var());
        }
        supports.resize(atoms.size());
        pos_occ.resize(atoms.size());
    }

    Lit lit_of(Atom a) const { return sat::pos(atom_var[atom_id.at(a)]); }

    Lit conj(std::vector<Lit> lits) {
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        lits.erase(std::remove(lits.begin(), lits.end(), top), lits.end());
        if (lits.empty()) return top;
        if (lits.size() == 1) return lits[0];
        auto it = conj_cache.find(lits);
        if (it != conj_cache.end()) return it->second;
        Lit b = sat::pos(s.new_var());
        std::vector<Lit> back{b};
        for (Lit l : lits) {
            s.add_clause({~b, l});
            back.push_back(~l);
        }
        s.add_clause(back);
        conj_cache.emplace(std::move(lits), b);
        return b;
    }

    Lit disj(const std::vector<Lit>& lits) {
        std::vector<Lit> neg;
        for (Lit l : lits) neg.push_back(~l);
        return ~conj(neg);
    }

    Lit weight_constraint(std::vector<sat::WeightedLit> lits, std::int64_t lo, std::int64_t hi) {
        Lit x = sat::pos(s.new_var());
        s.add_weight_constraint(x, std::move(lits), lo, hi);
        return x;
    }

    Lit aggregate(const std::vector<sat::WeightedLit>& lits, CmpOp op, std::int64_t bound) {
        std::int64_t lo, hi;
        if (op == CmpOp::Ne) {
            Lit below = weight_constraint(lits, -sat::kNoBound, bound - 1);
            Lit above = weight_constraint(lits, bound + 1, sat::kNoBound);
            return disj({below, above});
        }
        bounds_for(op, bound, lo, hi);
        return weight_constraint(lits, lo, hi);
    }

    // nullopt when the body is statically false.
    std::optional<Lit> encode_body(const Rule& r, std::vector<int>& pos, std::vector<Lit>& ext) {
        std::vector<Lit> lits;
        for (const auto& b : r.body) {
            if (auto* l = std::get_if<Literal>(&b)) {
                Lit a = lit_of(l->atom);
                if (l->negated) {
                    lits.push_back(~a);
                    ext.push_back(~a);
                } else {
                    lits.push_back(a);
                    pos.push_back(atom_id.at(l->atom));
                }
            } else if (auto* c = std::get_if<Comparison>(&b)) {
                if (!evaluate(c->op, c->lhs, c->rhs)) return std::nullopt;
            } else if (auto* ca = std::get_if<CountAggregate>(&b)) {
                std::vector<sat::WeightedLit> ws;
                for (Atom x : ca->atoms) ws.push_back({lit_of(x), 1});
                Lit x = weight_constraint(ws, ca->lower ? *ca->lower : -sat::kNoBound,
                                          ca->upper ? *ca->upper : sat::kNoBound);
                lits.push_back(x);
                ext.push_back(x);
            } else if (auto* sa = std::get_if<SumAggregate>(&b)) {
                if (!sa->bound.is_integer()) throw GroundingError("#sum bound is not an integer");
                std::vector<sat::WeightedLit> ws;
                for (const auto& e : sa->elements) {
                    if (!e.weight.is_integer()) throw GroundingError("#sum weight is not an integer");
                    ws.push_back({lit_of(e.atom), e.negate ? -e.weight.value() : e.weight.value()});
                }
                Lit x = aggregate(ws, sa->op, sa->bound.value());
                lits.push_back(x);
                ext.push_back(x);
            }
        }
        return conj(std::move(lits));
    }

    void build(const Program& p) {
        std::map<WeakTuple, std::vector<Lit>> tuple_bodies;
        for (const auto& r : p.rules) {
            Support sup;
            auto body = encode_body(r, sup.pos, sup.ext);
            if (!body) continue;
            sup.body = *body;
            switch (r.kind) {
            case RuleKind::Normal:
                s.add_clause({~sup.body, lit_of(r.head.front())});
                sup.heads.push_back(atom_id.at(r.head.front()));
                break;
            case RuleKind::Constraint: s.add_clause({~sup.body}); break;
            case RuleKind::Choice: {
                sup.choice = true;
                auto n = static_cast<std::int64_t>(r.head.size());
                if (r.lower > 0 || r.upper < n) {
                    std::vector<sat::WeightedLit> ws;
                    for (Atom h : r.head) ws.push_back({lit_of(h), 1});
                    s.add_clause({~sup.body, weight_constraint(ws, r.lower, r.upper)});
                }
                for (Atom h : r.head) sup.heads.push_back(atom_id.at(h));
                break;
            }
            case RuleKind::Weak: {
                if (!r.weight.is_integer() || !r.level.is_integer())
                    throw GroundingError("weak constraint weight and level must be integers: " + to_string(r));
                tuple_bodies[WeakTuple{r.weight.value(), r.level.value(), r.terms}].push_back(sup.body);
                continue;
            }
            }
            if (sup.heads.empty()) continue;
            auto idx = static_cast<int>(rules.size());
            std::sort(sup.heads.begin(), sup.heads.end());
            sup.heads.erase(std::unique(sup.heads.begin(), sup.heads.end()), sup.heads.end());
            for (int h : sup.heads) supports[h].push_back(idx);
            for (int a : sup.pos) pos_occ[a].push_back(idx);
            rules.push_back(std::move(sup));
        }
        std::set<std::int64_t> lv;
        for (auto& [key, bodies] : tuple_bodies) {
            if (key.weight == 0) continue;
            tuples.push_back({key.weight, key.level, disj(bodies)});
            lv.insert(key.level);
        }
        levels.assign(lv.rbegin(), lv.rend());
        if (mode == Mode::Classical) return;
        for (std::size_t a = 0; a < atoms.size(); ++a) {
            std::vector<Lit> c{sat::neg(atom_var[a])};
            for (int r : supports[a]) c.push_back(rules[r].body);
            s.add_clause(std::move(c));
        }
        compute_sccs();
        if (!tight) s.set_model_check([this](const sat::Solver& sv) { return unfounded(sv); });
    }

    // Tarjan over the positive dependency graph head -> positive body atom.
    // Components come out dependencies-first.
    void compute_sccs() {
        std::size_t n = atoms.size();
        std::vector<std::vector<int>> succ(n);
        for (const auto& r : rules)
            for (int h : r.heads)
                for (int b : r.pos) {
                    succ[h].push_back(b);
                    if (b == h) tight = false;
                }
        scc.assign(n, -1);
        std::vector<int> index(n, -1), low(n, 0), stack;
        std::vector<char> on_stack(n, 0);
        int counter = 0, comp = 0;
        std::vector<std::pair<int, std::size_t>> call;
        for (std::size_t root = 0; root < n; ++root) {
            if (index[root] >= 0) continue;
            call.push_back({static_cast<int>(root), 0});
            index[root] = low[root] = counter++;
            stack.push_back(static_cast<int>(root));
            on_stack[root] = 1;
            while (!call.empty()) {
                auto& [v, i] = call.back();
                if (i < succ[v].size()) {
                    int w = succ[v][i++];
                    if (index[w] < 0) {
                        index[w] = low[w] = counter++;
                        stack.push_back(w);
                        on_stack[w] = 1;
                        call.push_back({w, 0});
                    } else if (on_stack[w]) {
                        low[v] = std::min(low[v], index[w]);
                    }
                    continue;
                }
                int done = v;
                call.pop_back();
                if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
                if (low[done] == index[done]) {
                    std::size_t size = 0;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        scc[w] = comp;
                        ++size;
                    } while (w != done);
                    if (size > 1) tight = false;
                    ++comp;
                }
            }
        }
    }

    std::vector<std::vector<Lit>> unfounded(const sat::Solver& sv) const {
        std::vector<char> founded(atoms.size(), 0);
        std::vector<std::size_t> missing(rules.size());
        std::vector<int> queue;
        auto is_true = [&](int a) { return sv.value(atom_var[a]) > 0; };
        auto fire = [&](std::size_t r) {
            for (int h : rules[r].heads)
                if (!founded[h] && is_true(h)) {
                    founded[h] = 1;
                    queue.push_back(h);
                }
        };
        for (std::size_t r = 0; r < rules.size(); ++r) {
            bool applicable = std::all_of(rules[r].ext.begin(), rules[r].ext.end(),
                                          [&](Lit l) { return sv.value(l) > 0; });
            missing[r] = applicable ? rules[r].pos.size() : SIZE_MAX;
            if (missing[r] == 0) fire(r);
        }
        while (!queue.empty()) {
            int a = queue.back();
            queue.pop_back();
            for (int r : pos_occ[a])
                if (missing[r] != SIZE_MAX && --missing[r] == 0) fire(r);
        }
        int bottom = -1;
        for (std::size_t a = 0; a < atoms.size(); ++a)
            if (is_true(static_cast<int>(a)) && !founded[a] && (bottom < 0 || scc[a] < bottom)) bottom = scc[a];
        if (bottom < 0) return {};
        std::vector<int> u;
        for (std::size_t a = 0; a < atoms.size(); ++a)
            if (scc[a] == bottom && is_true(static_cast<int>(a)) && !founded[a]) u.push_back(static_cast<int>(a));
        std::vector<Lit> external;
        for (int a : u)
            for (int r : supports[a]) {
                const auto& pos = rules[r].pos;
                bool inside = std::any_of(pos.begin(), pos.end(), [&](int b) {
                    return std::binary_search(u.begin(), u.end(), b);
                });
                if (!inside) external.push_back(rules[r].body);
            }
        std::sort(external.begin(), external.end());
        external.erase(std::unique(external.begin(), external.end()), external.end());
        std::vector<std::vector<Lit>> out;
        for (int a : u) {
            std::vector<Lit> c{sat::neg(atom_var[a])};
            c.insert(c.end(), external.begin(), external.end());
            out.push_back(std::move(c));
        }
        return out;
    }

    // False when an assumption can never hold.
    bool assumption_lits(const Assumptions& a, std::vector<Lit>& out) const {
        for (Atom x : a.true_atoms) {
            auto it = atom_id.find(x);
            if (it != atom_id.end()) out.push_back(sat::pos(atom_var[it->second]));
            else if (mode == Mode::Stable) return false;
        }
        for (Atom x : a.false_atoms) {
            auto it = atom_id.find(x);
            if (it != atom_id.end()) out.push_back(sat::neg(atom_var[it->second]));
        }
        return true;
    }

    sat::Result run(const std::vector<Lit>& assumptions) {
        auto r = s.solve(assumptions);
        if (r == sat::Result::Unknown) throw Timeout("answer-set search exceeded its time budget");
        return r;
    }

    Interpretation model(const std::function<bool(Atom)>& projection) const {
        std::vector<Atom> out;
        for (std::size_t a = 0; a < atoms.size(); ++a)
            if (s.model_value(atom_var[a]) && (!projection || projection(atoms[a]))) out.push_back(atoms[a]);
        return Interpretation(std::move(out));
    }

    std::int64_t level_sum(std::int64_t level) const {
        std::int64_t sum = 0;
        for (const auto& t : tuples)
            if (t.level == level && s.model_value(t.lit)) sum += t.weight;
        return sum;
    }

    OptimalModel optimal_model(const std::function<bool(Atom)>& projection) const {
        OptimalModel m{model(projection), {}};
        for (std::int64_t l : levels)
            if (std::int64_t v = level_sum(l)) m.level_sums[l] = v;
        return m;
    }

    std::vector<sat::WeightedLit> objective(std::int64_t level) const {
        std::vector<sat::WeightedLit> ws;
        for (const auto& t : tuples)
            if (t.level == level) ws.push_back({t.lit, t.weight});
        return ws;
    }

    // Minimizes level by level under `base`; bounds stay guarded by `session`.
    bool optimize_in(const std::vector<Lit>& base, Var session) {
        if (run(base) != sat::Result::Sat) return false;
        for (std::int64_t l : levels) {
            auto ws = objective(l);
            std::int64_t floor = 0;
            for (auto& w : ws) floor += std::min<std::int64_t>(w.weight, 0);
            std::int64_t value = level_sum(l);
            while (value > floor) {
                Var step = s.new_var();
                s.add_clause({sat::neg(step), weight_constraint(ws, -sat::kNoBound, value - 1)});
                auto extended = base;
                extended.push_back(sat::pos(step));
                auto r = run(extended);
                s.add_clause({sat::neg(step)});
                if (r != sat::Result::Sat) break;
                value = level_sum(l);
            }
            s.add_clause({sat::neg(session), weight_constraint(ws, -sat::kNoBound, value)});
        }
        // Leave an optimal model as the current one.
        if (run(base) != sat::Result::Sat) throw Error("optimal model vanished after bounding");
        return true;
    }

    void block(Var session, const std::function<bool(Atom)>& projection, bool& exhausted) {
        std::vector<Lit> c{sat::neg(session)};
        for (std::size_t a = 0; a < atoms.size(); ++a) {
            if (projection && !projection(atoms[a])) continue;
            c.push_back(s.model_value(atom_var[a]) ? sat::neg(atom_var[a]) : sat::pos(atom_var[a]));
        }
        exhausted = c.size() == 1;
        s.add_clause(std::move(c));
    }
};

AspSolver::AspSolver(const Program& ground, Mode mode) : impl_(std::make_unique<Impl>(ground, mode)) {}
AspSolver::~AspSolver() = default;

void AspSolver::set_deadline(std::optional<std::chrono::steady_clock::time_point> d) { impl_->s.set_deadline(d); }

const sat::Solver::Stats& AspSolver::stats() const { return impl_->s.stats(); }
std::size_t AspSolver::num_atoms() const { return impl_->atoms.size(); }

std::optional<Interpretation> AspSolver::find(const Assumptions& a) {
    std::vector<Lit> as;
    if (!impl_->assumption_lits(a, as)) return std::nullopt;
    if (impl_->run(as) != sat::Result::Sat) return std::nullopt;
    return impl_->model({});
}

std::size_t AspSolver::enumerate(const std::function<bool(const Interpretation&)>& f, const Assumptions& a,
                                 const std::function<bool(Atom)>& projection) {
    std::vector<Lit> base;
    if (!impl_->assumption_lits(a, base)) return 0;
    Var session = impl_->s.new_var();
    base.push_back(sat::pos(session));
    std::size_t count = 0;
    while (impl_->run(base) == sat::Result::Sat) {
        ++count;
        bool go_on = f(impl_->model(projection));
        bool exhausted = false;
        impl_->block(session, projection, exhausted);
        if (!go_on || exhausted) break;
    }
    impl_->s.add_clause({sat::neg(session)});
    return count;
}

std::optional<OptimalModel> AspSolver::optimize(const Assumptions& a) {
    std::vector<Lit> base;
    if (!impl_->assumption_lits(a, base)) return std::nullopt;
    Var session = impl_->s.new_var();
    base.push_back(sat::pos(session));
    std::optional<OptimalModel> out;
    if (impl_->optimize_in(base, session)) out = impl_->optimal_model({});
    impl_->s.add_clause({sat::neg(session)});
    return out;
}

std::size_t AspSolver::enumerate_optimal(const std::function<bool(const OptimalModel&)>& f, const Assumptions& a,
                                         const std::function<bool(Atom)>& projection) {
    std::vector<Lit> base;
    if (!impl_->assumption_lits(a, base)) return 0;
    Var session = impl_->s.new_var();
    base.push_back(sat::pos(session));
    std::size_t count = 0;
    if (impl_->optimize_in(base, session)) {
        while (impl_->run(base) == sat::Result::Sat) {
            ++count;
            bool go_on = f(impl_->optimal_model(projection));
            bool exhausted = false;
            impl_->block(session, projection, exhausted);
            if (!go_on || exhausted) break;
        }
    }
    impl_->s.add_clause({sat::neg(session)});
    return count;
}

std::vector<Interpretation> enumerate_answer_sets(const Program& p, const GroundOptions& options) {
    AspSolver s(ground(p, options));
    std::vector<Interpretation> out;
    s.enumerate([&](const Interpretation& i) {
        out.push_back(i);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Interpretation> optimal_answer_sets(const Program& p, const GroundOptions& options) {
    AspSolver s(ground(p, options));
    std::vector<Interpretation> out;
    s.enumerate_optimal([&](const OptimalModel& m) {
        out.push_back(m.atoms);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<OptimalModel> solve_optimal(const Program& p, const GroundOptions& options,
                                          std::optional<std::chrono::steady_clock::time_point> deadline) {
    AspSolver s(ground(p, options));
    s.set_deadline(deadline);
    return s.optimize();
}

namespace {
bool has_function_terms(const Program& p) {
    auto nested = [](Atom a) {
        for (Term t : a.args())
            if (t.kind() == TermKind::Function) return true;
        return false;
    };
    for (const auto& r : p.rules) {
        for (Atom h : r.head)
            if (nested(h)) return true;
        for (const auto& l : r.literals())
            if (nested(l.atom)) return true;
    }
    return false;
}
} // namespace

bool has_classical_model_extending(const Program& p, const std::vector<Atom>& inc, const std::vector<Atom>& exc) {
    Program rules = p.non_weak();
    Program grounded;
    if (has_function_terms(rules)) {
        grounded = ground(rules);
    } else {
        Program domain_src = rules;
        for (Atom a : inc) domain_src.add(Rule::normal(a));
        for (Atom a : exc) domain_src.add(Rule::normal(a));
        grounded = ground_over_domain(rules, program_constants(domain_src));
    }
    AspSolver s(grounded, AspSolver::Mode::Classical);
    return s.find({inc, exc}).has_value();
}

} // namespace loas
