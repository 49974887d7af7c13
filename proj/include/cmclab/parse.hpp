#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "cmclab/errors.hpp"
#include "cmclab/rational_map.hpp"

namespace cmclab {

// Rational-function expressions in the variable z over Q(i).
// Grammar: + - * / ^(integer exponent, may be negative), parentheses,
// numbers as decimals ("1.25") or fractions ("3/4"), the imaginary unit i
// (also as a suffix: "1/2i" means (1/2)i), and implicit multiplication in
// the forms "2z", "2(...)", "z(...)", ")(" .
namespace detail {

class ExprParser {
  public:
    explicit ExprParser(std::string text) : s_(std::move(text)) {}

    RationalMap parse() {
        RationalMap r = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return r;
    }

  private:
    std::string s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) {
        throw ParseError(why + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RationalMap expr() {
        RationalMap r = eat('-') ? -term() : (eat('+'), term());
        while (true) {
            if (eat('+'))
                r = r + term();
            else if (eat('-'))
                r = r - term();
            else
                return r;
        }
    }

    bool starts_factor(char c) const {
        return c == 'z' || c == 'i' || c == '(' ;
    }

    RationalMap term() {
        RationalMap r = factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                r = r * factor();
            } else if (c == '/') {
                ++pos_;
                RationalMap d = factor();
                if (d.is_zero()) fail("division by zero");
                r = r / d;
            } else if (starts_factor(c)) {
                r = r * factor();  // implicit multiplication
            } else {
                return r;
            }
        }
    }

    RationalMap factor() {
        RationalMap base = eat('-') ? -atom() : (eat('+'), atom());
        if (peek() == '^') {
            ++pos_;
            long e = integer();
            if (base.is_zero() && e <= 0) fail("zero raised to nonpositive power");
            if (e > 64 || e < -64) fail("exponent out of range");
            return pow(base, static_cast<int>(e));
        }
        return base;
    }

    long integer() {
        skip_ws();
        bool neg = eat('-');
        if (!neg) eat('+');
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected integer");
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > 1000000) fail("integer too large");
            ++pos_;
        }
        return neg ? -v : v;
    }

    RationalMap atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            RationalMap r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (c == 'z') {
            ++pos_;
            return RationalMap::variable();
        }
        if (c == 'i') {
            ++pos_;
            return RationalMap::constant(imaginary_unit());
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        fail("expected a number, 'z', 'i' or '('");
    }

    Rational digits_as_rational() {
        std::string ds;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ds += s_[pos_++];
        if (ds.empty()) fail("expected digits");
        return Rational(BigInt(ds));
    }

    RationalMap number() {
        Rational v = digits_as_rational();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            size_t start = pos_;
            Rational frac = digits_as_rational();
            size_t ndig = pos_ - start;
            Rational scale = 1;
            for (size_t k = 0; k < ndig; ++k) scale *= 10;
            v += frac / scale;
        }
        // "p/q" with q directly adjacent and numeric stays one literal,
        // so that 1/2i reads as (1/2)*i while 1/(z-1) is a division
        if (pos_ < s_.size() && s_[pos_] == '/' && pos_ + 1 < s_.size() &&
            std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
            ++pos_;
            Rational q = digits_as_rational();
            if (q == 0) fail("zero denominator");
            v /= q;
        }
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            return RationalMap::constant(ComplexRational(Rational(0), v));
        }
        return RationalMap::constant(ComplexRational(v));
    }
};

}  // namespace detail

inline RationalMap parse_rational_map(const std::string& text) {
    return detail::ExprParser(text).parse();
}

inline ComplexRational parse_complex_rational(const std::string& text) {
    RationalMap m = detail::ExprParser(text).parse();
    if (!m.is_constant()) throw ParseError("expected a constant, got \"" + text + "\"");
    if (m.num.is_zero()) return ComplexRational(0);
    return m.num.coeff(0);
}

// --- printing ---------------------------------------------------------------

inline std::string coeff_to_string(const ComplexRational& a, bool leading) {
    std::string body = to_string(a);
    bool composite = (a.re != 0 && a.im != 0);
    bool negative = !composite && (a.re < 0 || a.im < 0);
    if (composite) return (leading ? "(" : "+ (") + body + ")";
    if (leading) return body;
    if (negative) {
        ComplexRational p = -a;
        return "- " + to_string(p);
    }
    return "+ " + body;
}

inline std::string to_string(const QPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool leading = true;
    for (int k = p.degree(); k >= 0; --k) {
        ComplexRational a = p.coeff(k);
        if (a.is_zero()) continue;
        std::string term;
        bool unit = (a == ComplexRational(1)) && k > 0;
        bool munit = (a == ComplexRational(-1)) && k > 0;
        if (unit)
            term = leading ? "" : "+ ";
        else if (munit)
            term = leading ? "-" : "- ";
        else {
            term = coeff_to_string(a, leading);
            if (k > 0) term += "*";
        }
        if (k >= 1) term += "z";
        if (k >= 2) term += "^" + std::to_string(k);
        out += (leading ? "" : " ") + term;
        leading = false;
    }
    return out;
}

inline std::string to_string(const RationalMap& r) {
    if (r.den == QPoly::one()) return to_string(r.num);
    return "(" + to_string(r.num) + ")/(" + to_string(r.den) + ")";
}

// --- potential files ----------------------------------------------------------
//
//   # comment
//   f = 1/(z - 1/4)^2
//   E = 1
//   domain = plane        (or: disk)

struct PotentialFile {
    RationalMap f;
    RationalMap hopf;  // E
    bool unit_disk = false;
};

inline PotentialFile parse_potential_text(const std::string& text) {
    PotentialFile out;
    bool saw_f = false, saw_e = false;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(val);
        if (key == "f") {
            out.f = parse_rational_map(val);
            saw_f = true;
        } else if (key == "E") {
            out.hopf = parse_rational_map(val);
            saw_e = true;
        } else if (key == "domain") {
            if (val == "disk")
                out.unit_disk = true;
            else if (val == "plane")
                out.unit_disk = false;
            else
                throw ParseError("line " + std::to_string(lineno) + ": domain must be plane or disk");
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!saw_f || !saw_e) throw ParseError("potential file needs both f = ... and E = ...");
    return out;
}

inline PotentialFile load_potential_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_potential_text(ss.str());
}

}  // namespace cmclab
