#pragma once

// Real-valued expressions for base components, e.g. "(1+sqrt(13))/2".
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := number | 'phi' | 'sqrt' '(' expr ')' | '(' expr ')' | '-' factor

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "altbase/errors.hpp"

namespace altbase {

struct BaseExpression {
    std::string source;
    double value = 0.0;
};

namespace detail {

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    double parse() {
        const double v = expr();
        skip_space();
        if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
        if (!std::isfinite(v)) throw ParseError("expression does not evaluate to a finite real", 0);
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

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

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool accept_word(std::string_view word) {
        skip_space();
        if (text_.substr(pos_, word.size()) != word) return false;
        const std::size_t end = pos_ + word.size();
        if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) return false;
        pos_ = end;
        return true;
    }

    double expr() {
        double v = term();
        while (true) {
            if (accept('+')) v += term();
            else if (accept('-')) v -= term();
            else return v;
        }
    }

    double term() {
        double v = factor();
        while (true) {
            if (accept('*')) {
                v *= factor();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                const double den = factor();
                if (den == 0.0) throw ParseError("division by zero", at);
                v /= den;
            } else {
                return v;
            }
        }
    }

    double factor() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (accept('-')) return -factor();
        if (accept('(')) {
            const double v = expr();
            expect(')');
            return v;
        }
        if (accept_word("phi")) return (1.0 + std::sqrt(5.0)) / 2.0;
        if (accept_word("sqrt")) {
            expect('(');
            const std::size_t at = pos_;
            const double v = expr();
            expect(')');
            if (v < 0.0) throw ParseError("sqrt of a negative number", at);
            return std::sqrt(v);
        }
        return number();
    }

    double number() {
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        if (!(std::isdigit(static_cast<unsigned char>(*first)) || *first == '.')) fail("expected a number");
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::fixed);
        if (ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline BaseExpression parse_expression(std::string_view text) {
    return {std::string(text), detail::ExpressionParser(text).parse()};
}

// Splits "e0, e1, ..." on top-level commas and evaluates each component.
// Error positions refer to the full input.
inline std::vector<BaseExpression> parse_expression_list(std::string_view text) {
    std::vector<BaseExpression> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t k = 0; k <= text.size(); ++k) {
        const char c = k < text.size() ? text[k] : ',';
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (k == text.size() || (c == ',' && depth <= 0)) {
            try {
                out.push_back(parse_expression(text.substr(start, k - start)));
            } catch (const ParseError& e) {
                std::string what = e.what();
                what = what.substr(0, what.rfind(" at position "));
                throw ParseError(what, start + e.position());
            }
            start = k + 1;
        }
    }
    return out;
}

inline std::vector<double> parse_base(std::string_view text) {
    std::vector<double> betas;
    for (const auto& e : parse_expression_list(text)) betas.push_back(e.value);
    return betas;
}

}  // namespace altbase
