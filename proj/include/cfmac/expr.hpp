#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "errors.hpp"

// Arithmetic for command-line values: numbers, + - * /, parentheses, unary
// sign and sqrt(). Lets scripts pass exact gains like 1/sqrt(2).

namespace cfmac {

namespace detail {
struct ExprParser {
    const char* s;
    const char* end;

    void skip_ws() {
        while (s < end && std::isspace(static_cast<unsigned char>(*s))) ++s;
    }

    bool eat(char c) {
        skip_ws();
        if (s < end && *s == c) {
            ++s;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw domain_error("expression: " + what);
    }

    double parse_expr() {
        double v = parse_term();
        for (;;) {
            if (eat('+')) v += parse_term();
            else if (eat('-')) v -= parse_term();
            else return v;
        }
    }

    double parse_term() {
        double v = parse_factor();
        for (;;) {
            if (eat('*')) v *= parse_factor();
            else if (eat('/')) {
                const double d = parse_factor();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else return v;
        }
    }

    double parse_factor() {
        if (eat('-')) return -parse_factor();
        if (eat('+')) return parse_factor();
        return parse_primary();
    }

    double parse_primary() {
        skip_ws();
        if (s >= end) fail("unexpected end of input");
        if (*s == '(') {
            ++s;
            const double v = parse_expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(*s))) {
            const char* name_start = s;
            while (s < end && std::isalpha(static_cast<unsigned char>(*s))) ++s;
            const std::string name(name_start, s);
            if (name != "sqrt") fail("unknown function '" + name + "'");
            if (!eat('(')) fail("sqrt needs parentheses");
            const double v = parse_expr();
            if (!eat(')')) fail("missing ')'");
            if (v < 0.0) fail("sqrt of a negative value");
            return std::sqrt(v);
        }
        char* num_end = nullptr;
        const double v = std::strtod(s, &num_end);
        if (num_end == s) fail(std::string("unexpected character '") + *s + "'");
        s = num_end;
        return v;
    }
};
} // namespace detail

inline double parse_expression(const std::string& text) {
    detail::ExprParser p{text.data(), text.data() + text.size()};
    const double v = p.parse_expr();
    p.skip_ws();
    if (p.s != p.end)
        p.fail(std::string("trailing input at '") + *p.s + "'");
    if (!std::isfinite(v))
        throw domain_error("expression: result is not finite");
    return v;
}

// Comma-separated expressions.
inline std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string piece = text.substr(start, comma - start);
        if (piece.find_first_not_of(" \t") == std::string::npos)
            throw domain_error("list: empty element");
        out.push_back(parse_expression(piece));
        start = comma + 1;
        if (comma == text.size()) break;
    }
    if (out.empty())
        throw domain_error("list: no elements");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& text) {
    const std::vector<double> reals = parse_real_list(text);
    std::vector<int> out;
    out.reserve(reals.size());
    for (double v : reals) {
        const double r = std::nearbyint(v);
        if (std::fabs(v - r) > 1e-9 || std::fabs(r) > 1e6)
            throw domain_error("list: expected integer entries");
        out.push_back(static_cast<int>(r));
    }
    return out;
}

// lo:step:hi inclusive sweep, matching the CLI flag syntax.
inline std::vector<double> parse_sweep(const std::string& text) {
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw domain_error("sweep: expected lo:step:hi");
    const double lo = parse_expression(text.substr(0, c1));
    const double step = parse_expression(text.substr(c1 + 1, c2 - c1 - 1));
    const double hi = parse_expression(text.substr(c2 + 1));
    if (!(step > 0.0) || hi < lo)
        throw domain_error("sweep: need step > 0 and hi >= lo");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * step;
        if (v > hi + 1e-12 * std::max(1.0, std::fabs(hi))) break;
        out.push_back(v);
        if (i > 1000000)
            throw domain_error("sweep: too many points");
    }
    return out;
}

} // namespace cfmac
