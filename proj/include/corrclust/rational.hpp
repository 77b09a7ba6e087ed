#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace corrclust {

// Exact rational arithmetic on 64-bit integers.  All thresholds in the
// cleaning predicates are rationals compared by cross-multiplication, so the
// library never touches floating point on a decision path.  Values stay tiny
// (fractions of small counts), far from overflow.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;

    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        normalize();
    }

    // NOLINTNEXTLINE(google-explicit-constructor): integers embed naturally
    Rational(long long n) : num(n), den(1) {}

    void normalize() {
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

    // Parses "p" or "p/q".  Used for the CLI --delta flag.
    static Rational parse(const std::string& text) {
        try {
            auto slash = text.find('/');
            std::size_t used = 0;
            if (slash == std::string::npos) {
                long long n = std::stoll(text, &used);
                if (used != text.size()) throw std::invalid_argument("trailing characters");
                return Rational(n);
            }
            long long n = std::stoll(text.substr(0, slash), &used);
            if (used != slash) throw std::invalid_argument("trailing characters");
            std::string denom = text.substr(slash + 1);
            long long d = std::stoll(denom, &used);
            if (used != denom.size()) throw std::invalid_argument("trailing characters");
            return Rational(n, d);
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse rational '" + text + "' (expected p or p/q)");
        }
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num * b.num, a.den * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw std::invalid_argument("rational division by zero");
        return Rational(a.num * b.den, a.den * b.num);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;  // both normalized
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return a.num * b.den <=> b.num * a.den;  // denominators positive
    }
};

}  // namespace corrclust
