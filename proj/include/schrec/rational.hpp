//==============================================================================
//  rational.hpp
//
//  Exact rational arithmetic for Lebesgue exponents.  All exponent relations
//  (conjugates, Strichartz pairs, admissibility clamps) are evaluated without
//  rounding; +infinity is a first-class value (den == 0) because sup-norm
//  exponents appear throughout.
//==============================================================================
#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace schrec {

struct Rational {
    // Normalized: den > 0 and gcd(|num|, den) == 1, or den == 0, num == 1 (+inf).
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    static Rational infinity() {
        Rational r;
        r.num = 1;
        r.den = 0;
        return r;
    }

    bool is_infinite() const { return den == 0; }

    void normalize() {
        if (den == 0) {
            if (num <= 0) throw std::invalid_argument("rational: division by zero");
            num = 1;
            return;
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    double value() const {
        if (is_infinite()) return std::numeric_limits<double>::infinity();
        return static_cast<double>(num) / static_cast<double>(den);
    }

    std::string str() const {
        if (is_infinite()) return "inf";
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    friend Rational operator+(Rational a, Rational b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rational operator-(Rational a, Rational b) {
        if (a.is_infinite() && !b.is_infinite()) return infinity();
        if (a.is_infinite() || b.is_infinite())
            throw std::invalid_argument("rational: inf - inf");
        return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Rational operator*(Rational a, Rational b) {
        if (a.is_infinite() || b.is_infinite()) {
            if (a.num == 0 || b.num == 0)
                throw std::invalid_argument("rational: 0 * inf");
            return infinity();
        }
        return Rational(a.num * b.num, a.den * b.den);
    }
    friend Rational operator/(Rational a, Rational b) {
        if (b.is_infinite()) return Rational(0);
        if (a.is_infinite()) {
            if (b.num == 0) throw std::invalid_argument("rational: inf / 0");
            return infinity();
        }
        if (b.num == 0) throw std::invalid_argument("rational: division by zero");
        return Rational(a.num * b.den, a.den * b.num);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
};

// Hölder conjugate p' with 1/p + 1/p' = 1.  p = 1 maps to inf and back.
inline Rational conjugate_exponent(const Rational& p) {
    if (p.is_infinite()) return Rational(1);
    if (p == Rational(1)) return Rational::infinity();
    if (p < Rational(1)) throw std::invalid_argument("conjugate_exponent: p < 1");
    return p / (p - Rational(1));
}

// Parses "3/2", "1.5", "6", or "inf".  Decimal strings convert exactly
// (digits over a power of ten), so CLI inputs stay in exact arithmetic.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    if (s == "inf" || s == "Inf" || s == "INF") return Rational::infinity();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        long long n = std::stoll(s.substr(0, slash));
        long long d = std::stoll(s.substr(slash + 1));
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (frac_len > 15) throw std::invalid_argument("parse_rational: too many decimals");
    long long den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(std::stoll(digits), den);
}

}  // namespace schrec
