#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace icheb {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
    if (sgn(den) == 0) throw std::invalid_argument("make_rat: zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat make_rat(long num, long den = 1) { return make_rat(Int(num), Int(den)); }

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int rat_floor(const Rat& q) { return floor_div(q.get_num(), q.get_den()); }

inline Int rat_ceil(const Rat& q) { return ceil_div(q.get_num(), q.get_den()); }

/// Nearest integer; exact half-integers round toward zero.
inline Int round_ties_to_zero(const Rat& q) {
    Rat twice = 2 * q;
    if (twice.get_den() == 1 && mpz_odd_p(twice.get_num().get_mpz_t())) {
        // q = k + 1/2 exactly; truncate toward zero
        Int t;
        mpz_tdiv_q(t.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        return t;
    }
    return rat_floor(q + make_rat(1, 2));
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
    Rat r;
    mpz_pow_ui(r.get_num().get_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den().get_mpz_t(), base.get_den().get_mpz_t(), e);
    return r;  // base canonical => base^e canonical
}

/// Largest integer s with s^2 <= a (a >= 0).
inline Int isqrt(const Int& a) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

inline Rat abs_rat(const Rat& q) { return q < 0 ? Rat(-q) : q; }

/// Parses "num", "num/den" or a plain decimal like "0.42591455" into an exact rational.
inline Rat parse_rat(std::string_view s) {
    auto fail = [&] { throw std::invalid_argument("parse_rat: bad rational '" + std::string(s) + "'"); };
    if (s.empty()) fail();
    std::string str(s);
    auto slash = str.find('/');
    if (slash != std::string::npos) {
        Int num, den;
        if (num.set_str(str.substr(0, slash), 10) != 0) fail();
        if (den.set_str(str.substr(slash + 1), 10) != 0) fail();
        return make_rat(num, den);
    }
    auto dot = str.find('.');
    if (dot == std::string::npos) {
        Int num;
        if (num.set_str(str, 10) != 0) fail();
        return Rat(num);
    }
    std::string digits = str.substr(0, dot) + str.substr(dot + 1);
    std::size_t frac_len = str.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") fail();
    Int num;
    if (num.set_str(digits, 10) != 0) fail();
    return make_rat(num, pow_int(10, frac_len));
}

inline std::string rat_to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Fixed-point decimal with `digits` places, rounded to nearest (ties away from zero).
inline std::string rat_to_decimal(const Rat& q, unsigned digits) {
    Int scale = pow_int(10, digits);
    Rat scaled = q * Rat(scale);
    Int n;
    if (scaled >= 0)
        n = rat_floor(scaled + make_rat(1, 2));
    else
        n = rat_ceil(scaled - make_rat(1, 2));
    bool neg = n < 0;
    Int a = abs(n);
    std::string s = a.get_str();
    if (digits > 0) {
        if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
        s.insert(s.size() - digits, ".");
    }
    if (neg) s.insert(0, "-");
    return s;
}

}  // namespace icheb
