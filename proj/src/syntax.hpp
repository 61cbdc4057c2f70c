// SPDX-License-Identifier: MIT
// Lexer and recursive-descent parser shared by program and task-file readers.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "loas/parser.hpp"
#include "loas/program.hpp"

namespace loas::syntax {

enum class Tok : std::uint8_t {
    End, Ident, Var, Int, Directive, If, WeakIf, Dot, Comma, Semi, LParen, RParen,
    LBrace, RBrace, LBrack, RBrack, At, Minus, Eq, Ne, Lt, Le, Gt, Ge
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t value = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

std::vector<Token> tokenize(std::string_view text);

class Parser {
public:
    Parser(std::string_view text, ParseOptions options);

    const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    bool at(Tok k) const { return peek().kind == k; }
    bool accept(Tok k);
    const Token& expect(Tok k, std::string_view what);
    [[noreturn]] void fail(const Token& at, const std::string& message) const;

    Term term();
    Atom atom();
    /// One statement (rule or weak constraint), including its terminator.
    Rule rule();
    std::vector<BodyElement> body();
    /// `{a; b}` or `{a, b}`.
    std::vector<Atom> brace_atoms();
    const ParseOptions& options() const { return options_; }

private:
    BodyElement body_element();
    CmpOp comparison_op(const Token& t);
    void check_reserved(const Rule& r, const Token& start) const;

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    ParseOptions options_;
};

bool is_comparison(Tok k);

} // namespace loas::syntax
