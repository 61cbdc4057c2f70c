// SPDX-License-Identifier: MIT
#include "loas/program.hpp"

#include <algorithm>

#include "loas/errors.hpp"

namespace loas {

Atom make_atom(std::string_view predicate, std::vector<Term> args) {
    return Term::function(predicate, std::move(args));
}

Rule Rule::normal(Atom head, std::vector<BodyElement> body) {
    Rule r;
    r.kind = RuleKind::Normal;
    r.head = {head};
    r.body = std::move(body);
    return r;
}

Rule Rule::constraint(std::vector<BodyElement> body) {
    Rule r;
    r.kind = RuleKind::Constraint;
    r.body = std::move(body);
    return r;
}

Rule Rule::choice(std::int64_t lower, std::int64_t upper, std::vector<Atom> head,
                  std::vector<BodyElement> body) {
    Rule r;
    r.kind = RuleKind::Choice;
    r.lower = lower;
    r.upper = upper;
    r.head = std::move(head);
    r.body = std::move(body);
    return r;
}

Rule Rule::weak(std::vector<BodyElement> body, Term weight, Term level, std::vector<Term> terms) {
    Rule r;
    r.kind = RuleKind::Weak;
    r.body = std::move(body);
    r.weight = weight;
    r.level = level;
    r.terms = std::move(terms);
    return r;
}

bool Rule::is_ground() const { return rule_variables(*this).empty(); }

std::vector<Literal> Rule::literals() const {
    std::vector<Literal> out;
    for (const auto& b : body)
        if (auto* l = std::get_if<Literal>(&b)) out.push_back(*l);
    return out;
}

void Program::append(const Program& other) {
    rules.insert(rules.end(), other.rules.begin(), other.rules.end());
}

Program Program::weak() const {
    Program p;
    for (const auto& r : rules)
        if (r.is_weak()) p.add(r);
    return p;
}

Program Program::non_weak() const {
    Program p;
    for (const auto& r : rules)
        if (!r.is_weak()) p.add(r);
    return p;
}

bool Program::is_ground() const {
    return std::all_of(rules.begin(), rules.end(), [](const Rule& r) { return r.is_ground(); });
}

Interpretation::Interpretation(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end(), TermLess{});
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool Interpretation::contains(Atom a) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), a, TermLess{});
}

bool operator<(const Interpretation& a, const Interpretation& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        int c = compare(a.atoms()[i], b.atoms()[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

bool evaluate(CmpOp op, Term lhs, Term rhs) {
    int c = compare(lhs, rhs);
    switch (op) {
    case CmpOp::Lt: return c < 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Gt: return c > 0;
    case CmpOp::Ge: return c >= 0;
    case CmpOp::Eq: return c == 0;
    case CmpOp::Ne: return c != 0;
    }
    return false;
}

std::string_view to_string(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    }
    return "?";
}

std::string to_string(const Literal& l) {
    return l.negated ? "not " + to_string(l.atom) : to_string(l.atom);
}

namespace {

struct ElementPrinter {
    std::string operator()(const Literal& l) const { return to_string(l); }
    std::string operator()(const Comparison& c) const {
        return to_string(c.lhs) + " " + std::string(to_string(c.op)) + " " + to_string(c.rhs);
    }
    std::string operator()(const CountAggregate& a) const {
        std::string s;
        if (a.lower) s += std::to_string(*a.lower) + " ";
        s += "{";
        for (std::size_t i = 0; i < a.atoms.size(); ++i) {
            if (i) s += "; ";
            s += to_string(a.atoms[i]);
        }
        s += "}";
        if (a.upper) s += " " + std::to_string(*a.upper);
        return s;
    }
    std::string operator()(const SumAggregate& a) const {
        std::string s = "#sum{";
        for (std::size_t i = 0; i < a.elements.size(); ++i) {
            if (i) s += ", ";
            const auto& e = a.elements[i];
            s += to_string(e.atom) + "=" + (e.negate ? "-" : "") + to_string(e.weight);
        }
        s += "} " + std::string(to_string(a.op)) + " " + to_string(a.bound);
        return s;
    }
};

std::string body_string(const std::vector<BodyElement>& body) {
    std::string s;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) s += ", ";
        s += to_string(body[i]);
    }
    return s;
}

} // namespace

std::string to_string(const BodyElement& b) { return std::visit(ElementPrinter{}, b); }

std::string to_string(const Rule& r) {
    std::string s;
    switch (r.kind) {
    case RuleKind::Normal:
        s = to_string(r.head.front());
        if (!r.body.empty()) s += " :- " + body_string(r.body);
        s += ".";
        break;
    case RuleKind::Constraint: s = ":- " + body_string(r.body) + "."; break;
    case RuleKind::Choice: {
        s = std::to_string(r.lower) + " {";
        for (std::size_t i = 0; i < r.head.size(); ++i) {
            if (i) s += "; ";
            s += to_string(r.head[i]);
        }
        s += "} " + std::to_string(r.upper);
        if (!r.body.empty()) s += " :- " + body_string(r.body);
        s += ".";
        break;
    }
    case RuleKind::Weak:
        s = ":~ " + body_string(r.body) + ".[" + to_string(r.weight) + "@" + to_string(r.level);
        for (Term t : r.terms) s += ", " + to_string(t);
        s += "]";
        break;
    }
    return s;
}

std::string to_string(const Program& p) {
    std::string s;
    for (const auto& r : p.rules) {
        s += to_string(r);
        s += '\n';
    }
    return s;
}

std::string to_string(const Interpretation& i) {
    std::string s = "{";
    bool first = true;
    for (Atom a : i) {
        if (!first) s += ", ";
        first = false;
        s += to_string(a);
    }
    return s + "}";
}

namespace {

void element_variables(const BodyElement& b, std::vector<Term>& out) {
    if (auto* l = std::get_if<Literal>(&b)) {
        collect_variables(l->atom, out);
    } else if (auto* c = std::get_if<Comparison>(&b)) {
        collect_variables(c->lhs, out);
        collect_variables(c->rhs, out);
    } else if (auto* a = std::get_if<CountAggregate>(&b)) {
        for (Atom x : a->atoms) collect_variables(x, out);
    } else if (auto* s = std::get_if<SumAggregate>(&b)) {
        collect_variables(s->bound, out);
    }
}

bool contains(const std::vector<Term>& vs, Term v) {
    return std::find(vs.begin(), vs.end(), v) != vs.end();
}

} // namespace

std::vector<Term> rule_variables(const Rule& r) {
    std::vector<Term> out;
    for (Atom h : r.head) collect_variables(h, out);
    for (const auto& b : r.body) {
        element_variables(b, out);
        if (auto* s = std::get_if<SumAggregate>(&b)) {
            for (const auto& e : s->elements) {
                collect_variables(e.atom, out);
                collect_variables(e.weight, out);
            }
        }
    }
    if (r.kind == RuleKind::Weak) {
        collect_variables(r.weight, out);
        collect_variables(r.level, out);
        for (Term t : r.terms) collect_variables(t, out);
    }
    return out;
}

void check_safety(const Rule& r, std::size_t rule_index) {
    std::vector<Term> bound;
    for (const auto& b : r.body)
        if (auto* l = std::get_if<Literal>(&b); l && !l->negated) collect_variables(l->atom, bound);

    std::vector<Term> global;
    for (Atom h : r.head) collect_variables(h, global);
    for (const auto& b : r.body) element_variables(b, global);
    if (r.kind == RuleKind::Weak) {
        collect_variables(r.weight, global);
        collect_variables(r.level, global);
        for (Term t : r.terms) collect_variables(t, global);
    }
    for (Term v : global)
        if (!contains(bound, v)) throw SafetyError(rule_index, v.name());

    for (const auto& b : r.body) {
        auto* s = std::get_if<SumAggregate>(&b);
        if (!s) continue;
        for (const auto& e : s->elements) {
            std::vector<Term> local = bound;
            collect_variables(e.atom, local);
            std::vector<Term> wv;
            collect_variables(e.weight, wv);
            for (Term v : wv)
                if (!contains(local, v)) throw SafetyError(rule_index, v.name());
        }
    }
}

} // namespace loas
