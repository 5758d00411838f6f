#pragma once
// Textual polynomial syntax:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' natural)?
//   base   := rational | identifier | '(' expr ')' | '-' base
// Identifiers: [A-Za-z_][A-Za-z0-9_]*.  Rationals: digits with optional
// '/denominator'.  Whitespace is ignored.  Multiplication is explicit.
//
// print() emits the canonical form (graded-lex order); parse(print(p)) == p.

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>

#include "acilab/poly.hpp"

namespace acilab {

class PolyParser {
  public:
    PolyParser(VarPool& pool, std::string_view text) : pool_(pool), s_(text) {}

    Poly parse() {
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return p;
    }

  private:
    Poly expr() {
        skip_ws();
        bool neg = false;
        while (peek() == '+' || peek() == '-') {
            if (get() == '-') neg = !neg;
            skip_ws();
        }
        Poly p = term();
        if (neg) p = -p;
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            get();
            Poly t = term();
            if (c == '+')
                p += t;
            else
                p -= t;
        }
        return p;
    }

    Poly term() {
        Poly p = factor();
        for (;;) {
            skip_ws();
            if (peek() != '*') break;
            get();
            p = p * factor();
        }
        return p;
    }

    Poly factor() {
        Poly b = base();
        skip_ws();
        if (peek() == '^') {
            get();
            skip_ws();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("exponent expected");
            std::uint32_t k = 0;
            while (std::isdigit(static_cast<unsigned char>(peek())))
                k = k * 10 + static_cast<std::uint32_t>(get() - '0');
            return b.pow(k);
        }
        return b;
    }

    Poly base() {
        skip_ws();
        char c = peek();
        if (c == '-') {
            get();
            return -base();
        }
        if (c == '(') {
            get();
            Poly p = expr();
            skip_ws();
            if (get() != ')') fail("')' expected");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (std::isdigit(static_cast<unsigned char>(peek()))) num.push_back(get());
            std::string lit = num;
            skip_ws();
            if (peek() == '/') {
                std::size_t save = pos_;
                get();
                skip_ws();
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    std::string den;
                    while (std::isdigit(static_cast<unsigned char>(peek()))) den.push_back(get());
                    lit += "/" + den;
                } else {
                    pos_ = save;  // '/' wasn't a rational separator
                }
            }
            auto q = parse_rational(lit);
            if (!q) fail("bad rational '" + lit + "'");
            return Poly::constant(&pool_, *q);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
                name.push_back(get());
            return Poly::variable(&pool_, pool_.intern(name));
        }
        fail("unexpected character");
        return Poly();  // unreachable
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("polynomial syntax error at offset " + std::to_string(pos_) +
                                    ": " + msg + " in \"" + std::string(s_) + "\"");
    }

    VarPool& pool_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

inline Poly parse_poly(VarPool& pool, std::string_view text) {
    return PolyParser(pool, text).parse();
}

inline std::string print_poly(const Poly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : p.terms()) {
        Q a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool coef_shown = (a != 1) || m.e.empty();
        if (coef_shown) os << q_str(a);
        bool lead = !coef_shown;
        for (auto& [v, k] : m.e) {
            if (!lead) os << "*";
            lead = false;
            os << p.pool()->name(v);
            if (k >= 2) os << "^" << k;
        }
    }
    return os.str();
}

inline std::string Poly::str() const { return print_poly(*this); }

}  // namespace acilab
