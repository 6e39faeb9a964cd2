#include "gmf/ring.hpp"

#include <cctype>

namespace gmf {

namespace {

struct Parser {
    const RingPtr& ring;
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    BigInt digits() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected digits");
        return BigInt(s.substr(start, pos - start));
    }

    RingElem rational() {
        BigInt num = digits();
        if (eat('/')) {
            size_t at = pos;
            BigInt den = digits();
            if (den == 0) throw ParseError("zero denominator", at);
            return RingElem::constant(ring, Rational(num, den));
        }
        return RingElem::constant(ring, Rational(num));
    }

    RingElem identifier() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        std::string name = s.substr(start, pos - start);
        int i = ring->var_index(name);
        if (i < 0) throw ParseError("unknown variable '" + name + "'", start);
        return RingElem(ring, ring->variable(i));
    }

    RingElem primary() {
        char c = peek();
        if (c == '(') {
            ++pos;
            RingElem e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return rational();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("expected a number, variable or '('");
    }

    RingElem factor() {
        RingElem base = primary();
        if (eat('^')) {
            skip_ws();
            size_t at = pos;
            BigInt e = digits();
            if (e < 0 || e > 1000) throw ParseError("exponent out of range", at);
            RingElem out = RingElem::constant(ring, 1);
            for (BigInt k = 0; k < e; ++k) out = out * base;
            return out;
        }
        return base;
    }

    RingElem term() {
        RingElem out = factor();
        while (eat('*')) out = out * factor();
        return out;
    }

    RingElem sum() {
        bool neg = false;
        if (peek() == '-') {
            ++pos;
            neg = true;
        } else if (peek() == '+') {
            ++pos;
        }
        RingElem out = term();
        if (neg) out = -out;
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos;
                out = out + term();
            } else if (c == '-') {
                ++pos;
                out = out - term();
            } else {
                break;
            }
        }
        return out;
    }
};

}  // namespace

RingElem parse_expr(const RingPtr& ring, const std::string& text) {
    Parser p{ring, text};
    RingElem e = p.sum();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("unexpected trailing input");
    return e;
}

}  // namespace gmf
