// SPDX-License-Identifier: MIT
#include "loas/term.hpp"

#include <deque>
#include <mutex>
#include <unordered_set>

namespace loas {

struct TermNode {
    TermKind kind;
    bool ground;
    std::uint32_t depth;
    std::size_t hash;
    std::int64_t value;
    std::string name;
    std::vector<Term> args;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct NodeHash {
    std::size_t operator()(const TermNode* n) const noexcept { return n->hash; }
};

struct NodeEq {
    bool operator()(const TermNode* a, const TermNode* b) const noexcept {
        return a->kind == b->kind && a->value == b->value && a->name == b->name && a->args == b->args;
    }
};

class TermTable {
public:
    const TermNode* intern(TermNode&& probe) {
        std::lock_guard lock(mutex_);
        auto it = table_.find(&probe);
        if (it != table_.end()) return *it;
        nodes_.push_back(std::move(probe));
        const TermNode* node = &nodes_.back();
        table_.insert(node);
        return node;
    }

    static TermTable& instance() {
        static TermTable table;
        return table;
    }

private:
    std::mutex mutex_;
    std::deque<TermNode> nodes_;
    std::unordered_set<const TermNode*, NodeHash, NodeEq> table_;
};

const std::string& empty_string() {
    static const std::string s;
    return s;
}

} // namespace

Term Term::integer(std::int64_t value) {
    TermNode n{TermKind::Integer, true, 0, mix(1, std::hash<std::int64_t>{}(value)), value, {}, {}};
    return Term(TermTable::instance().intern(std::move(n)));
}

Term Term::constant(std::string_view name) {
    std::string s(name);
    std::size_t h = mix(2, std::hash<std::string>{}(s));
    TermNode n{TermKind::Constant, true, 0, h, 0, std::move(s), {}};
    return Term(TermTable::instance().intern(std::move(n)));
}

Term Term::variable(std::string_view name) {
    std::string s(name);
    std::size_t h = mix(4, std::hash<std::string>{}(s));
    TermNode n{TermKind::Variable, false, 0, h, 0, std::move(s), {}};
    return Term(TermTable::instance().intern(std::move(n)));
}

Term Term::function(std::string_view functor, std::vector<Term> args) {
    if (args.empty()) return constant(functor);
    std::string s(functor);
    std::size_t h = mix(3, std::hash<std::string>{}(s));
    bool ground = true;
    std::uint32_t depth = 0;
    for (Term a : args) {
        h = mix(h, a.hash());
        ground = ground && a.is_ground();
        depth = std::max(depth, a.depth());
    }
    TermNode n{TermKind::Function, ground, depth + 1, h, 0, std::move(s), std::move(args)};
    return Term(TermTable::instance().intern(std::move(n)));
}

TermKind Term::kind() const noexcept { return node_->kind; }
std::int64_t Term::value() const noexcept { return node_->value; }
const std::string& Term::name() const noexcept { return node_ ? node_->name : empty_string(); }
std::span<const Term> Term::args() const noexcept {
    if (!node_) return {};
    return {node_->args.data(), node_->args.size()};
}
bool Term::is_ground() const noexcept { return node_->ground; }
std::uint32_t Term::depth() const noexcept { return node_->depth; }
std::size_t Term::hash() const noexcept { return node_ ? node_->hash : 0; }

namespace {
int kind_rank(TermKind k) {
    switch (k) {
    case TermKind::Integer: return 0;
    case TermKind::Constant:
    case TermKind::Function: return 1;
    case TermKind::Variable: return 2;
    }
    return 3;
}
} // namespace

int compare(Term a, Term b) noexcept {
    if (a == b) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    if (a.is_integer()) return a.value() < b.value() ? -1 : 1;
    if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
    if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
    auto aa = a.args(), ba = b.args();
    for (std::size_t i = 0; i < aa.size(); ++i) {
        if (int c = compare(aa[i], ba[i]); c != 0) return c;
    }
    return 0;
}

namespace {
void print(std::string& out, Term t) {
    switch (t.kind()) {
    case TermKind::Integer: out += std::to_string(t.value()); return;
    case TermKind::Constant:
    case TermKind::Variable: out += t.name(); return;
    case TermKind::Function:
        out += t.name();
        out += '(';
        for (std::size_t i = 0; i < t.arity(); ++i) {
            if (i) out += ',';
            print(out, t.args()[i]);
        }
        out += ')';
        return;
    }
}
} // namespace

std::string to_string(Term t) {
    std::string s;
    print(s, t);
    return s;
}

std::ostream& operator<<(std::ostream& os, Term t) { return os << to_string(t); }

void collect_variables(Term t, std::vector<Term>& out) {
    if (t.is_ground()) return;
    if (t.is_variable()) {
        for (Term v : out)
            if (v == t) return;
        out.push_back(t);
        return;
    }
    for (Term a : t.args()) collect_variables(a, out);
}

} // namespace loas
