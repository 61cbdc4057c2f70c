// SPDX-License-Identifier: MIT
#include "loas/parser.hpp"

#include <cctype>

#include "loas/errors.hpp"
#include "syntax.hpp"

namespace loas::syntax {

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        auto punct = [&](Tok k, std::size_t n) {
            t.kind = k;
            t.text = std::string(text.substr(i, n));
            advance(n);
        };
        char d = i + 1 < text.size() ? text[i + 1] : '\0';
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            t.kind = Tok::Int;
            t.text = std::string(text.substr(i, j - i));
            try {
                t.value = std::stoll(t.text);
            } catch (const std::out_of_range&) {
                throw SyntaxError(line, col, "integer out of range: " + t.text);
            }
            advance(j - i);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '#') {
            std::size_t j = i + 1;
            while (j < text.size() && ident_char(text[j])) ++j;
            t.text = std::string(text.substr(i, j - i));
            if (c == '#') {
                if (t.text.size() == 1) throw SyntaxError(line, col, "expected directive name after '#'");
                t.kind = Tok::Directive;
            } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = Tok::Var;
            } else {
                t.kind = Tok::Ident;
            }
            advance(j - i);
        } else if (c == ':' && d == '-') {
            punct(Tok::If, 2);
        } else if (c == ':' && d == '~') {
            punct(Tok::WeakIf, 2);
        } else if (c == '!' && d == '=') {
            punct(Tok::Ne, 2);
        } else if (c == '<' && d == '=') {
            punct(Tok::Le, 2);
        } else if (c == '>' && d == '=') {
            punct(Tok::Ge, 2);
        } else {
            switch (c) {
            case '.': punct(Tok::Dot, 1); break;
            case ',': punct(Tok::Comma, 1); break;
            case ';': punct(Tok::Semi, 1); break;
            case '(': punct(Tok::LParen, 1); break;
            case ')': punct(Tok::RParen, 1); break;
            case '{': punct(Tok::LBrace, 1); break;
            case '}': punct(Tok::RBrace, 1); break;
            case '[': punct(Tok::LBrack, 1); break;
            case ']': punct(Tok::RBrack, 1); break;
            case '@': punct(Tok::At, 1); break;
            case '-': punct(Tok::Minus, 1); break;
            case '=': punct(Tok::Eq, 1); break;
            case '<': punct(Tok::Lt, 1); break;
            case '>': punct(Tok::Gt, 1); break;
            default:
                throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
            }
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

bool is_comparison(Tok k) {
    return k == Tok::Lt || k == Tok::Le || k == Tok::Gt || k == Tok::Ge || k == Tok::Eq ||
           k == Tok::Ne;
}

Parser::Parser(std::string_view text, ParseOptions options)
    : tokens_(tokenize(text)), options_(options) {}

const Token& Parser::peek(std::size_t ahead) const {
    std::size_t p = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[p];
}

const Token& Parser::next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
}

bool Parser::accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
}

const Token& Parser::expect(Tok k, std::string_view what) {
    if (!at(k)) {
        const Token& t = peek();
        fail(t, "expected " + std::string(what) + (t.kind == Tok::End ? " before end of input"
                                                                      : ", found '" + t.text + "'"));
    }
    return next();
}

void Parser::fail(const Token& at, const std::string& message) const {
    throw SyntaxError(at.line, at.column, message);
}

Term Parser::term() {
    const Token& t = peek();
    if (t.kind == Tok::Minus) {
        next();
        const Token& n = expect(Tok::Int, "integer after '-'");
        return Term::integer(-n.value);
    }
    if (t.kind == Tok::Int) return Term::integer(next().value);
    if (t.kind == Tok::Var) return Term::variable(next().text);
    if (t.kind == Tok::Ident) {
        std::string name = next().text;
        if (!accept(Tok::LParen)) return Term::constant(name);
        std::vector<Term> args;
        do {
            args.push_back(term());
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
        return Term::function(name, std::move(args));
    }
    fail(t, "expected a term" + (t.kind == Tok::End ? std::string() : ", found '" + t.text + "'"));
}

Atom Parser::atom() {
    const Token& t = peek();
    if (t.kind != Tok::Ident)
        fail(t, "expected an atom" + (t.kind == Tok::End ? std::string() : ", found '" + t.text + "'"));
    return term();
}

CmpOp Parser::comparison_op(const Token& t) {
    switch (t.kind) {
    case Tok::Lt: return CmpOp::Lt;
    case Tok::Le: return CmpOp::Le;
    case Tok::Gt: return CmpOp::Gt;
    case Tok::Ge: return CmpOp::Ge;
    case Tok::Eq: return CmpOp::Eq;
    case Tok::Ne: return CmpOp::Ne;
    default: fail(t, "expected a comparison operator");
    }
}

std::vector<Atom> Parser::brace_atoms() {
    expect(Tok::LBrace, "'{'");
    std::vector<Atom> atoms;
    if (!at(Tok::RBrace)) {
        do {
            atoms.push_back(atom());
        } while (accept(Tok::Semi) || accept(Tok::Comma));
    }
    expect(Tok::RBrace, "'}'");
    return atoms;
}

BodyElement Parser::body_element() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "not" &&
        (peek(1).kind == Tok::Ident)) {
        next();
        return Literal{atom(), true};
    }
    if (t.kind == Tok::Directive) {
        if (t.text != "#sum") fail(t, "unsupported aggregate '" + t.text + "'");
        next();
        expect(Tok::LBrace, "'{' after #sum");
        SumAggregate s;
        if (!at(Tok::RBrace)) {
            do {
                SumElement e;
                e.atom = atom();
                expect(Tok::Eq, "'=' in #sum element");
                if (accept(Tok::Minus)) {
                    if (at(Tok::Int)) {
                        e.weight = Term::integer(-next().value);
                    } else {
                        e.negate = true;
                        e.weight = term();
                    }
                } else {
                    e.weight = term();
                }
                s.elements.push_back(e);
            } while (accept(Tok::Comma) || accept(Tok::Semi));
        }
        expect(Tok::RBrace, "'}'");
        if (!is_comparison(peek().kind)) fail(peek(), "expected comparison after #sum{...}");
        s.op = comparison_op(next());
        s.bound = term();
        return s;
    }
    if ((t.kind == Tok::Int && peek(1).kind == Tok::LBrace) || t.kind == Tok::LBrace) {
        CountAggregate a;
        if (t.kind == Tok::Int) a.lower = next().value;
        a.atoms = brace_atoms();
        if (at(Tok::Int)) a.upper = next().value;
        return a;
    }
    Term lhs = term();
    if (is_comparison(peek().kind)) {
        CmpOp op = comparison_op(next());
        return Comparison{lhs, op, term()};
    }
    if (!lhs.is_symbolic()) fail(t, "expected an atom or comparison");
    return Literal{lhs, false};
}

std::vector<BodyElement> Parser::body() {
    std::vector<BodyElement> out;
    if (at(Tok::Dot)) return out;
    do {
        out.push_back(body_element());
    } while (accept(Tok::Comma));
    return out;
}

namespace {
bool is_bottom(Atom a) { return a.arity() == 0 && a.name() == kBottom; }
} // namespace

void Parser::check_reserved(const Rule& r, const Token& start) const {
    if (options_.allow_reserved) return;
    auto bad = [&](Atom a) {
        if (is_bottom(a)) fail(start, "'bot' is reserved and may not be used as an atom");
    };
    for (Atom h : r.head) bad(h);
    for (const auto& b : r.body) {
        if (auto* l = std::get_if<Literal>(&b)) bad(l->atom);
        if (auto* c = std::get_if<CountAggregate>(&b))
            for (Atom a : c->atoms) bad(a);
        if (auto* s = std::get_if<SumAggregate>(&b))
            for (const auto& e : s->elements) bad(e.atom);
    }
}

Rule Parser::rule() {
    const Token start = peek();
    Rule r;
    if (accept(Tok::If)) {
        r = Rule::constraint(body());
        expect(Tok::Dot, "'.'");
    } else if (accept(Tok::WeakIf)) {
        auto b = body();
        expect(Tok::Dot, "'.'");
        expect(Tok::LBrack, "'[' after weak constraint");
        Term w = term();
        Term l = Term::integer(0);
        if (accept(Tok::At)) l = term();
        std::vector<Term> terms;
        while (accept(Tok::Comma)) terms.push_back(term());
        expect(Tok::RBrack, "']'");
        r = Rule::weak(std::move(b), w, l, std::move(terms));
    } else if (at(Tok::Int) || at(Tok::LBrace)) {
        std::optional<std::int64_t> lower, upper;
        if (at(Tok::Int)) lower = next().value;
        const Token& brace = peek();
        auto head = brace_atoms();
        if (at(Tok::Int)) upper = next().value;
        auto n = static_cast<std::int64_t>(head.size());
        std::int64_t lo = lower.value_or(0), hi = upper.value_or(n);
        if (lo < 0 || lo > hi || hi > n)
            fail(brace, "choice bounds must satisfy 0 <= lower <= upper <= number of head atoms");
        std::vector<BodyElement> b;
        if (accept(Tok::If)) b = body();
        expect(Tok::Dot, "'.'");
        r = Rule::choice(lo, hi, std::move(head), std::move(b));
    } else {
        Atom h = atom();
        std::vector<BodyElement> b;
        if (accept(Tok::If)) b = body();
        expect(Tok::Dot, "'.'");
        r = Rule::normal(h, std::move(b));
    }
    check_reserved(r, start);
    return r;
}

} // namespace loas::syntax

namespace loas {

Program parse_program(std::string_view text, const ParseOptions& options) {
    syntax::Parser p(text, options);
    Program prog;
    while (!p.at(syntax::Tok::End)) {
        const syntax::Token& t = p.peek();
        if (t.kind == syntax::Tok::Directive) p.fail(t, "unexpected directive '" + t.text + "'");
        Rule r = p.rule();
        if (options.check_safety) check_safety(r, prog.size());
        prog.add(std::move(r));
    }
    return prog;
}

Rule parse_rule(std::string_view text, const ParseOptions& options) {
    Program p = parse_program(text, options);
    if (p.size() != 1) throw SyntaxError(1, 1, "expected exactly one rule");
    return p.rules.front();
}

Term parse_term(std::string_view text) {
    syntax::Parser p(text, {});
    Term t = p.term();
    p.expect(syntax::Tok::End, "end of input");
    return t;
}

Atom parse_atom(std::string_view text) {
    syntax::Parser p(text, {});
    Atom a = p.atom();
    p.expect(syntax::Tok::End, "end of input");
    return a;
}

} // namespace loas
