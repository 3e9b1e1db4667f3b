#pragma once

// Reader for the line-oriented system file format:
//
//   # comment
//   vars: x y
//   init: x in [-2,2]; y in [-2,2]
//   eq: x^2 + y^2 - 2
//   eq: x - y = 0
//
// Expressions use + - * ^ and parentheses. Multiplication is explicit and
// exponents are non-negative integer literals.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsroot/errors.hpp"
#include "hsroot/interval.hpp"
#include "hsroot/poly.hpp"

namespace hsroot {

namespace detail {

class LineParser {
public:
    LineParser(std::string_view text, std::size_t line, std::size_t column_offset,
               const std::map<std::string, std::size_t, std::less<>>* vars)
        : text_(text), line_(line), offset_(column_offset), vars_(vars) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError(what, line_, offset_ + pos_ + 1);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::optional<std::string> identifier() {
        skip_ws();
        if (pos_ >= text_.size()) return std::nullopt;
        const char c = text_[pos_];
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return std::nullopt;
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    /// Unsigned decimal literal (sign handled by callers).
    std::optional<double> number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) {
            pos_ = start;
            return std::nullopt;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
                pos_ = p;
            }
        }
        double v = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{}) {
            pos_ = start;
            fail("number out of range");
        }
        return v;
    }

    double signed_number() {
        skip_ws();
        bool negative = false;
        if (accept('-')) negative = true;
        else accept('+');
        if (auto id = identifier()) {
            if (*id == "inf") fail("initial interval must be bounded");
            fail("expected a number");
        }
        auto v = number();
        if (!v) fail("expected a number");
        return negative ? -*v : *v;
    }

    Polynomial expression() {
        Polynomial acc = term();
        for (;;) {
            if (accept('+')) acc = acc + term();
            else if (accept('-')) acc = acc - term();
            else return acc;
        }
    }

private:
    std::size_t dim() const { return vars_->size(); }

    Polynomial term() {
        Polynomial acc = factor();
        while (accept('*')) acc = acc * factor();
        return acc;
    }

    Polynomial factor() {
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        Polynomial base = primary();
        if (accept('^')) {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == start) fail("exponent must be a non-negative integer literal");
            unsigned k = 0;
            auto res = std::from_chars(text_.data() + start, text_.data() + pos_, k);
            if (res.ec != std::errc{} || k > 1024) {
                pos_ = start;
                fail("exponent too large");
            }
            base = power(base, k);
        }
        return base;
    }

    Polynomial primary() {
        skip_ws();
        const std::size_t start = pos_;
        if (accept('(')) {
            Polynomial inner = expression();
            expect(')');
            return inner;
        }
        if (auto v = number()) return Polynomial::constant(dim(), *v);
        if (auto id = identifier()) {
            auto it = vars_->find(*id);
            if (it == vars_->end()) {
                throw UnknownVariable(std::to_string(line_) + ":" +
                                      std::to_string(offset_ + start + 1) +
                                      ": undeclared variable '" + *id + "'");
            }
            return Polynomial::variable(dim(), it->second);
        }
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        fail(std::string("unexpected character '") + text_[pos_] + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t offset_;
    const std::map<std::string, std::size_t, std::less<>>* vars_;
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/**
 * Parses a system file. Throws SyntaxError (with line and column),
 * UnknownVariable or DimensionMismatch.
 */
inline PolySystem parse_system(std::string_view text, std::string name = {}) {
    PolySystem sys;
    sys.name = std::move(name);
    std::map<std::string, std::size_t, std::less<>> index;
    std::vector<std::optional<Interval>> init;
    bool have_vars = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (detail::trim(raw).empty()) continue;

        const std::size_t colon = raw.find(':');
        if (colon == std::string_view::npos) {
            throw SyntaxError("expected 'vars:', 'init:' or 'eq:'", line_no, 1);
        }
        const std::string_view key = detail::trim(raw.substr(0, colon));
        const std::string_view body = raw.substr(colon + 1);
        detail::LineParser lp(body, line_no, colon + 1, &index);

        if (key == "vars") {
            if (have_vars) throw SyntaxError("duplicate 'vars:' line", line_no, 1);
            have_vars = true;
            while (!lp.at_end()) {
                auto id = lp.identifier();
                if (!id) lp.fail("expected a variable name");
                if (*id == "in") lp.fail("'in' is reserved");
                if (index.count(*id)) lp.fail("variable '" + *id + "' declared twice");
                index.emplace(*id, sys.variables.size());
                sys.variables.push_back(*id);
                lp.accept(',');
            }
            if (sys.variables.empty()) lp.fail("'vars:' lists no variables");
            init.assign(sys.variables.size(), std::nullopt);
        } else if (key == "init") {
            if (!have_vars) throw SyntaxError("'init:' before 'vars:' header", line_no, 1);
            while (!lp.at_end()) {
                auto id = lp.identifier();
                if (!id) lp.fail("expected a variable name");
                auto it = index.find(*id);
                if (it == index.end()) {
                    throw UnknownVariable(std::to_string(line_no) + ": undeclared variable '" + *id + "'");
                }
                auto kw = lp.identifier();
                if (!kw || *kw != "in") lp.fail("expected 'in'");
                lp.expect('[');
                const double lo = lp.signed_number();
                lp.expect(',');
                const double hi = lp.signed_number();
                lp.expect(']');
                if (lo > hi) lp.fail("initial interval has lower bound above upper bound");
                if (init[it->second]) lp.fail("variable '" + *id + "' initialised twice");
                init[it->second] = Interval::make(lo, hi);
                lp.accept(';');
            }
        } else if (key == "eq") {
            if (!have_vars) throw SyntaxError("'eq:' before 'vars:' header", line_no, 1);
            Polynomial p = lp.expression();
            if (lp.accept('=')) p = p - lp.expression();
            if (!lp.at_end()) lp.fail("unexpected trailing input");
            sys.equations.push_back(std::move(p));
        } else {
            throw SyntaxError("unknown header '" + std::string(key) + "'", line_no, 1);
        }
    }

    if (!have_vars) throw SyntaxError("missing 'vars:' header", 1, 1);
    for (std::size_t i = 0; i < init.size(); ++i) {
        if (!init[i]) {
            throw SyntaxError("no initial interval for variable '" + sys.variables[i] + "'", line_no, 1);
        }
    }
    std::vector<Interval> b;
    for (const auto& iv : init) b.push_back(*iv);
    sys.initial_box = Box(std::move(b));
    if (sys.equations.size() != sys.variables.size()) {
        throw DimensionMismatch("system has " + std::to_string(sys.equations.size()) +
                                " equations for " + std::to_string(sys.variables.size()) +
                                " variables");
    }
    sys.validate();
    return sys;
}

}  // namespace hsroot
