// Small recursive-descent parser shared by the Scalar grammar and the
// algebra-element grammar.  Identifiers are single letters, so "ab" is the
// product a*b and "q^-1" is a power of q.  Juxtaposition multiplies.
//
//   expr   := [+|-] tterm {(+|-) tterm}
//   tterm  := term {@ term}            (only for semantics with a tensor())
//   term   := power {[*|/] power}
//   power  := atom [^ int]
//   atom   := digits | letter | ( expr )
#pragma once

#include "qgeom/scalar.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace qgeom::detail {

template <class Sem>
class ExprParser {
  public:
    using Value = typename Sem::Value;

    ExprParser(std::string_view text, Sem &sem) : s_(text), sem_(sem) {}

    Value parse_all() {
        Value v = expr();
        skip();
        if (pos_ < s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

  private:
    std::string_view s_;
    Sem &sem_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string &msg) const {
        throw ParseError(msg + " in \"" + std::string(s_) + "\"", 0, int(pos_) + 1);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char ch) {
        skip();
        return pos_ < s_.size() && s_[pos_] == ch;
    }
    bool eat(char ch) {
        if (peek(ch)) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool starts_atom() {
        skip();
        if (pos_ >= s_.size()) return false;
        char ch = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(ch)) || std::isalpha(static_cast<unsigned char>(ch)) ||
               ch == '(';
    }

    Value expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        Value v = tterm();
        if (neg) v = sem_.neg(v);
        for (;;) {
            if (eat('+'))
                v = sem_.add(v, tterm());
            else if (eat('-'))
                v = sem_.sub(v, tterm());
            else
                return v;
        }
    }

    Value tterm() {
        Value v = term();
        if constexpr (requires(Sem &s, Value &x) { s.tensor(x, x); }) {
            while (eat('@')) v = sem_.tensor(v, term());
        }
        return v;
    }

    Value term() {
        Value v = power();
        for (;;) {
            if (eat('*'))
                v = sem_.mul(v, power());
            else if (eat('/'))
                v = sem_.div(v, power());
            else if (starts_atom())
                v = sem_.mul(v, power());
            else
                return v;
        }
    }

    long integer_exponent() {
        bool paren = eat('(');
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        skip();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        long e = std::stol(std::string(s_.substr(start, pos_ - start)));
        if (paren && !eat(')')) fail("expected ')'");
        return neg ? -e : e;
    }

    Value power() {
        Value v = atom();
        if (eat('^')) v = sem_.pow(v, integer_exponent());
        return v;
    }

    Value atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char ch = s_[pos_];
        if (ch == '(') {
            ++pos_;
            Value v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return sem_.number(std::string(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            ++pos_;
            if (!sem_.known_letter(ch)) {
                --pos_;
                fail(std::string("undeclared symbol '") + ch + "'");
            }
            return sem_.letter(ch);
        }
        fail(std::string("unexpected character '") + ch + "'");
    }
};

} // namespace qgeom::detail
