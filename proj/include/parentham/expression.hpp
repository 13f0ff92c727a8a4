#pragma once

// Text expressions for pseudo-Boolean polynomials.
//
//   expr   := term (('+'|'-') term)*
//   term   := coeff ('*' factor)* | factor ('*' factor)*
//   factor := 'x' INDEX | '~x' INDEX | '(' expr ')'
//   coeff  := integer or p/q, e.g. 3, -1/2
//
// '~x3' is the complemented literal 1 - x3 and is expanded immediately. A
// leading or unary minus is accepted anywhere a term or factor may start.
// '#' starts a comment that runs to the end of the line. The arity is the
// largest variable index mentioned (or `min_arity`, if larger).

#include "parentham/pbf.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace parentham {

namespace detail {

enum class TokenKind { Number, Slash, Plus, Minus, Star, LParen, RParen, Var, NegVar, End };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t index = 0;  // variables: 1-based index
    std::size_t line = 1;
    std::size_t column = 1;
};

inline std::vector<Token> tokenize_expression(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t k = 1) {
        for (std::size_t j = 0; j < k; ++j) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto read_digits = [&]() {
        std::string d;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
            d += src[i];
            advance();
        }
        return d;
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') {
                advance();
            }
            continue;
        }
        Token t{TokenKind::End, {}, 0, line, col};
        if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = TokenKind::Number;
            t.text = read_digits();
            out.push_back(t);
            continue;
        }
        if (c == 'x' || c == '~') {
            const bool negated = c == '~';
            advance();
            if (negated) {
                if (i >= src.size() || src[i] != 'x') {
                    throw SyntaxError(t.line, t.column, "expected 'x' after '~'");
                }
                advance();
            }
            const std::size_t dl = line;
            const std::size_t dc = col;
            std::string digits = read_digits();
            if (digits.empty()) {
                throw SyntaxError(dl, dc, "expected a positive variable index");
            }
            if (digits.size() > 3 || std::stoul(digits) == 0 || std::stoul(digits) > kMaxVariables) {
                throw SyntaxError(dl, dc, "variable index must lie in 1..64, got " + digits);
            }
            t.kind = negated ? TokenKind::NegVar : TokenKind::Var;
            t.index = std::stoul(digits);
            t.text = (negated ? "~x" : "x") + digits;
            out.push_back(t);
            continue;
        }
        switch (c) {
            case '/': t.kind = TokenKind::Slash; break;
            case '+': t.kind = TokenKind::Plus; break;
            case '-': t.kind = TokenKind::Minus; break;
            case '*': t.kind = TokenKind::Star; break;
            case '(': t.kind = TokenKind::LParen; break;
            case ')': t.kind = TokenKind::RParen; break;
            default:
                throw SyntaxError(line, col, std::string("unknown token '") + c + "'");
        }
        t.text = std::string(1, c);
        out.push_back(t);
        advance();
    }
    out.push_back(Token{TokenKind::End, "", 0, line, col});
    return out;
}

class ExpressionParser {
public:
    ExpressionParser(std::vector<Token> tokens, std::size_t arity) : tokens_(std::move(tokens)), arity_(arity) {}

    PseudoBoolean parse() {
        PseudoBoolean f = expr();
        if (peek().kind != TokenKind::End) {
            fail("unexpected '" + peek().text + "'");
        }
        return f;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        throw SyntaxError(t.line, t.column, t.kind == TokenKind::End ? what + " at end of input" : what);
    }

    PseudoBoolean expr() {
        PseudoBoolean f = term();
        while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
            const bool minus = take().kind == TokenKind::Minus;
            PseudoBoolean g = term();
            f = minus ? f - g : f + g;
        }
        return f;
    }

    PseudoBoolean term() {
        PseudoBoolean f = factor();
        while (peek().kind == TokenKind::Star) {
            take();
            f = multiply(f, factor());
        }
        return f;
    }

    PseudoBoolean factor() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Plus:
                take();
                return factor();
            case TokenKind::Minus:
                take();
                return -factor();
            case TokenKind::Number: {
                std::string lit = take().text;
                if (peek().kind == TokenKind::Slash) {
                    take();
                    if (peek().kind != TokenKind::Number) {
                        fail("expected a denominator");
                    }
                    lit += "/" + take().text;
                }
                Rational q = parse_rational(lit);
                return PseudoBoolean::constant(arity_, q);
            }
            case TokenKind::Var:
                return PseudoBoolean::literal(arity_, take().index - 1, true);
            case TokenKind::NegVar:
                return PseudoBoolean::literal(arity_, take().index - 1, false);
            case TokenKind::LParen: {
                take();
                PseudoBoolean f = expr();
                if (peek().kind != TokenKind::RParen) {
                    fail("expected ')'");
                }
                take();
                return f;
            }
            default:
                fail(t.kind == TokenKind::End ? "expected a term" : "unexpected '" + t.text + "'");
        }
    }

    std::vector<Token> tokens_;
    std::size_t arity_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline PseudoBoolean parse_expression(std::string_view text, std::size_t min_arity = 0) {
    auto tokens = detail::tokenize_expression(text);
    std::size_t arity = min_arity;
    for (const auto& t : tokens) {
        arity = std::max(arity, t.index);
    }
    return detail::ExpressionParser(std::move(tokens), arity).parse();
}

}  // namespace parentham
