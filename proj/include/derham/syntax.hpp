#pragma once

#include "derham/error.hpp"
#include "derham/poly.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace derham {

/// Comma-separated identifiers: ASCII letter first, then letters, digits or '_'.
inline std::vector<std::string> parse_variables(const std::string &src) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::string cur;
    auto flush = [&](std::size_t pos) {
        std::size_t a = cur.find_first_not_of(" \t");
        std::size_t b = cur.find_last_not_of(" \t");
        std::string id = a == std::string::npos ? "" : cur.substr(a, b - a + 1);
        if (id.empty() || !std::isalpha(static_cast<unsigned char>(id[0])))
            throw ParseError(ErrorCode::SyntaxError, "bad variable name '" + id + "'", pos);
        for (char ch : id)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
                throw ParseError(ErrorCode::SyntaxError, "bad variable name '" + id + "'", pos);
        if (!seen.insert(id).second)
            throw ParseError(ErrorCode::SyntaxError, "duplicate variable '" + id + "'", pos);
        out.push_back(id);
        cur.clear();
    };
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (src[i] == ',')
            flush(i);
        else
            cur += src[i];
    }
    flush(src.size());
    return out;
}

namespace detail {

class PolynomialParser {
  public:
    PolynomialParser(const std::string &src, const std::vector<std::string> &vars) : src_(src), vars_(vars) {}

    Polynomial parse() {
        Polynomial p = expr();
        skip();
        if (pos_ != src_.size())
            fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return p;
    }

  private:
    static constexpr unsigned max_exponent = 1000;

    [[noreturn]] void fail(const std::string &what) const { throw ParseError(ErrorCode::SyntaxError, what, pos_); }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        Polynomial p = term();
        for (;;) {
            if (eat('+'))
                p += term();
            else if (eat('-'))
                p -= term();
            else
                return p;
        }
    }

    Polynomial term() {
        Polynomial p = factor();
        while (eat('*'))
            p = p * factor();
        return p;
    }

    Polynomial factor() {
        if (eat('-'))
            return -factor();
        Polynomial b = base();
        if (eat('^')) {
            skip();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                fail("expected a non-negative integer exponent");
            Integer e = digits();
            if (e > max_exponent)
                fail("exponent too large");
            b = b.pow(static_cast<unsigned>(e.get_ui()));
        }
        return b;
    }

    Integer digits() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        return Integer(src_.substr(start, pos_ - start));
    }

    Polynomial base() {
        skip();
        const std::size_t n = vars_.size();
        if (pos_ >= src_.size())
            fail("unexpected end of input");
        char ch = src_[pos_];
        if (ch == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!eat(')'))
                fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            Rational q(digits());
            skip();
            if (pos_ < src_.size() && src_[pos_] == '/') {
                ++pos_;
                skip();
                if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    fail("expected a positive integer denominator");
                Integer den = digits();
                if (den == 0)
                    fail("zero denominator");
                q /= Rational(den);
            }
            return Polynomial::constant(n, q);
        }
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string id = src_.substr(start, pos_ - start);
            for (std::size_t v = 0; v < n; ++v)
                if (vars_[v] == id)
                    return Polynomial::variable(n, v);
            throw ParseError(ErrorCode::UnknownVariable, "unknown variable '" + id + "'", start);
        }
        fail("unexpected '" + std::string(1, ch) + "'");
    }

    const std::string &src_;
    const std::vector<std::string> &vars_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
/// factor := '-' factor | base ('^' int)?; base := literal | identifier | '(' expr ')'.
/// Literals are integers or integer/positive-integer. No implicit multiplication.
inline Polynomial parse_polynomial(const std::string &src, const std::vector<std::string> &vars) {
    return detail::PolynomialParser(src, vars).parse();
}

/// Canonical text: terms by decreasing degrevlex, coefficients as p/q.
inline std::string format_polynomial(const Polynomial &p, const std::vector<std::string> &vars) {
    if (vars.size() != p.ambient())
        throw Error(ErrorCode::AmbientMismatch, "variable list does not match the ring");
    if (p.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto &[m, c] = *it;
        bool negative = sgn(c) < 0;
        Rational a = abs(c);
        if (first)
            os << (negative ? "-" : "");
        else
            os << (negative ? " - " : " + ");
        first = false;
        std::string mono;
        for (std::size_t v = 0; v < vars.size(); ++v) {
            if (m[v] == 0)
                continue;
            if (!mono.empty())
                mono += '*';
            mono += vars[v];
            if (m[v] > 1)
                mono += "^" + std::to_string(m[v]);
        }
        if (mono.empty())
            os << a.get_str();
        else if (a == 1)
            os << mono;
        else
            os << a.get_str() << '*' << mono;
    }
    return os.str();
}

inline std::vector<std::string> default_variables(std::size_t n) {
    static const char *names[] = {"x", "y", "z", "w"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(n <= 4 ? names[i] : "x" + std::to_string(i + 1));
    return out;
}

} // namespace derham
