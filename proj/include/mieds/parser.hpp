#pragma once

// Plain-text vector field format: one component per line, infix syntax over
// x0..x{n-1}, numeric literals, + - * / ^ (non-negative integer exponent),
// parentheses and sin, cos, tan, tanh. Blank lines and lines starting with
// '#' are skipped.
//
//   x1
//   -x1 - 9.81*sin(x0)

#include "mieds/error.hpp"
#include "mieds/expr.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

namespace mieds {

namespace detail {

class ExprParser {
public:
    ExprParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    Expr parse() {
        Expr e = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

    /// Var nodes seen, with the column of each, for dimension checks.
    const std::vector<std::pair<std::size_t, std::size_t>>& variables() const { return vars_; }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, pos_ + 1, msg); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const { throw ParseError(line_, pos + 1, msg); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expression() {
        Expr e = term();
        for (;;) {
            if (accept('+')) e = e + term();
            else if (accept('-')) e = e - term();
            else return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (accept('*')) e = e * unary();
            else if (accept('/')) e = e / unary();
            else return e;
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent must be a non-negative integer literal");
        int exponent = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
        if (ec != std::errc() || exponent > 64) fail_at(start, "exponent out of range");
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
            fail("exponent must be a non-negative integer literal");
        return pow(base, exponent);
    }

    Expr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr number() {
        const std::size_t start = pos_;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc()) fail("malformed number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
            fail_at(start, "malformed number");
        return constant(value);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name.size() > 1 && name[0] == 'x' && name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
            std::size_t index = 0;
            auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (ec != std::errc()) fail_at(start, "variable index out of range");
            vars_.emplace_back(index, start + 1);
            return var(index);
        }
        Expr::Kind kind;
        if (name == "sin") kind = Expr::Kind::Sin;
        else if (name == "cos") kind = Expr::Kind::Cos;
        else if (name == "tan") kind = Expr::Kind::Tan;
        else if (name == "tanh") kind = Expr::Kind::Tanh;
        else fail_at(start, "unknown identifier '" + std::string(name) + "'");
        if (!accept('(')) fail("expected '(' after " + std::string(name));
        Expr arg = expression();
        if (!accept(')')) fail("expected ')'");
        return Expr::unary(kind, arg);
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
    std::vector<std::pair<std::size_t, std::size_t>> vars_;
};

} // namespace detail

/// Parses a single infix expression (line number is used in error messages).
inline Expr parse_expression(std::string_view text, std::size_t line = 1) {
    detail::ExprParser p(text, line);
    return p.parse();
}

inline VectorField parse_field(std::string_view text) {
    struct Parsed {
        Expr expr;
        std::size_t line;
        std::vector<std::pair<std::size_t, std::size_t>> vars;
    };
    std::vector<Parsed> parsed;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(begin, end - begin);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string_view::npos && line[first] != '#') {
            detail::ExprParser p(line, line_no);
            Expr e = p.parse();
            parsed.push_back({e, line_no, p.variables()});
        }
        begin = end + 1;
    }
    if (parsed.empty()) throw ParseError(line_no, 1, "field description has no components");
    for (const auto& p : parsed)
        for (const auto& [index, column] : p.vars)
            if (index >= parsed.size())
                throw ParseError(p.line, column,
                                 "x" + std::to_string(index) + " exceeds field dimension " + std::to_string(parsed.size()));
    std::vector<Expr> comps;
    for (auto& p : parsed) comps.push_back(std::move(p.expr));
    return VectorField(std::move(comps));
}

} // namespace mieds
