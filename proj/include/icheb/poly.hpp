#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "icheb/rational.hpp"

namespace icheb {

/// Dense integer-coefficient polynomial. coeffs[k] holds the coefficient of
/// x^k; the highest stored coefficient is nonzero. The zero polynomial is the
/// empty sequence.
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { normalize(); }
    IntPoly(std::initializer_list<long> coeffs) {
        c_.reserve(coeffs.size());
        for (long v : coeffs) c_.emplace_back(v);
        normalize();
    }

    static IntPoly constant(Int v) {
        IntPoly p;
        if (sgn(v) != 0) p.c_.push_back(std::move(v));
        return p;
    }
    static IntPoly one() { return constant(1); }
    /// a*x - b
    static IntPoly linear(const Int& a, const Int& b) { return IntPoly(std::vector<Int>{-b, a}); }

    bool is_zero() const { return c_.empty(); }
    /// Degree of the zero polynomial is -1 by convention.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& operator[](std::size_t k) const { return c_[k]; }
    const Int& leading() const {
        if (c_.empty()) throw std::logic_error("leading(): zero polynomial");
        return c_.back();
    }

    bool operator==(const IntPoly& o) const { return c_ == o.c_; }
    bool operator!=(const IntPoly& o) const { return c_ != o.c_; }

    IntPoly operator-() const {
        IntPoly r(*this);
        for (Int& v : r.c_) v = -v;
        return r;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<Int> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i < a.c_.size()) r[i] += a.c_[i];
            if (i < b.c_.size()) r[i] += b.c_[i];
        }
        return IntPoly(std::move(r));
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

    /// Schoolbook product; exact, adequate for the degrees this library sees.
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return IntPoly();
        std::vector<Int> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (sgn(a.c_[i]) == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (sgn(b.c_[j]) == 0) continue;
                r[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return IntPoly(std::move(r));
    }

    friend IntPoly operator*(const Int& s, const IntPoly& p) {
        if (sgn(s) == 0) return IntPoly();
        IntPoly r(p);
        for (Int& v : r.c_) v *= s;
        return r;
    }

    IntPoly pow(unsigned long e) const {
        IntPoly result = one();
        IntPoly base(*this);
        while (e > 0) {
            if (e & 1) result = result * base;
            base = base * base;
            e >>= 1;
        }
        return result;
    }

    /// Exact value p(x) for rational x.
    Rat eval(const Rat& x) const {
        Rat acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Rat(*it);
        return acc;
    }

    Int eval_int(const Int& x) const {
        Int acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    /// Exact p(num/den) via integer Horner; den >= 1.
    Rat eval_fraction(const Int& num, const Int& den) const {
        if (c_.empty()) return Rat(0);
        Int acc = c_.back();
        Int dpow(1);
        for (std::size_t k = c_.size() - 1; k-- > 0;) {
            dpow *= den;
            acc = acc * num + c_[k] * dpow;
        }
        return make_rat(acc, dpow);
    }

    IntPoly derivative() const {
        if (c_.size() <= 1) return IntPoly();
        std::vector<Int> r(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) r[k - 1] = Int(k) * c_[k];
        return IntPoly(std::move(r));
    }

    /// p(q(x)) by Horner over polynomial arithmetic.
    IntPoly compose(const IntPoly& q) const {
        IntPoly acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + constant(*it);
        return acc;
    }

    /// Exact quotient if divisor divides this over Z, otherwise nothing.
    std::optional<IntPoly> div_exact(const IntPoly& d) const {
        if (d.is_zero()) throw std::invalid_argument("div_exact: zero divisor");
        if (is_zero()) return IntPoly();
        if (degree() < d.degree()) return std::nullopt;
        std::vector<Int> rem = c_;
        std::vector<Int> quot(c_.size() - d.c_.size() + 1);
        for (std::size_t k = quot.size(); k-- > 0;) {
            Int& top = rem[k + d.c_.size() - 1];
            if (sgn(top) == 0) continue;
            Int q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), top.get_mpz_t(), d.leading().get_mpz_t());
            if (sgn(r) != 0) return std::nullopt;
            quot[k] = q;
            for (std::size_t j = 0; j < d.c_.size(); ++j) rem[k + j] -= q * d.c_[j];
        }
        for (const Int& v : rem)
            if (sgn(v) != 0) return std::nullopt;
        return IntPoly(std::move(quot));
    }

    /// p(1-x).
    IntPoly reflect() const { return compose(IntPoly{1, -1}); }

    /// Largest absolute coefficient sum; crude magnitude gauge.
    Int l1_norm() const {
        Int s;
        for (const Int& v : c_) s += abs(v);
        return s;
    }

    std::string to_string(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (sgn(c_[k]) == 0) continue;
            Int a = abs(c_[k]);
            if (out.empty())
                out += (sgn(c_[k]) < 0 ? "-" : "");
            else
                out += (sgn(c_[k]) < 0 ? " - " : " + ");
            bool unit = (a == 1) && k > 0;
            if (!unit) out += a.get_str();
            if (k > 0) {
                if (!unit) out += "*";
                out += var;
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntPoly& p) { return os << p.to_string(); }

  private:
    void normalize() {
        while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
    }
    std::vector<Int> c_;
};

/// a^g * G(b/a): the resultant of G and a*x - b up to sign. Requires a >= 1.
inline Int resultant_linear(const IntPoly& g_poly, const Int& a, const Int& b) {
    if (a < 1) throw std::invalid_argument("resultant_linear: a must be >= 1");
    if (g_poly.is_zero()) return Int(0);
    const auto& c = g_poly.coeffs();
    Int acc = c.back();
    Int apow(1);
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        apow *= a;
        acc = acc * b + c[k] * apow;
    }
    return acc;
}

/// q(x(1-x)), or (2x-1)*q(x(1-x)) when odd is set. Lifts a polynomial on
/// [0,1/4] to the symmetric polynomial on [0,1].
inline IntPoly symmetrize(const IntPoly& q, bool odd) {
    static const IntPoly kMap{0, 1, -1};  // x - x^2
    IntPoly s = q.compose(kMap);
    if (odd) s = s * IntPoly{-1, 2};
    return s;
}

/// True iff p(x) == p(1-x) or p(x) == -p(1-x).
inline bool is_symmetric(const IntPoly& p) {
    IntPoly r = p.reflect();
    return r == p || r == -p;
}

/// Inverse of the even symmetrization: given s with s(x) = q(x(1-x)),
/// recovers q. Throws if s is not a polynomial in x(1-x).
inline IntPoly desymmetrize(const IntPoly& s) {
    static const IntPoly kMap{0, 1, -1};
    IntPoly rem = s;
    std::vector<Int> q;
    while (!rem.is_zero()) {
        int d = rem.degree();
        if (d % 2 != 0) throw std::invalid_argument("desymmetrize: odd degree");
        std::size_t k = static_cast<std::size_t>(d) / 2;
        if (q.size() < k + 1) q.resize(k + 1);
        // leading coefficient of (x-x^2)^k is (-1)^k
        Int coef = (k % 2 == 0) ? rem.leading() : Int(-rem.leading());
        q[k] = coef;
        rem = rem - coef * kMap.pow(k);
        if (!rem.is_zero() && rem.degree() >= d) throw std::logic_error("desymmetrize: no progress");
    }
    IntPoly result{std::vector<Int>(q.begin(), q.end())};
    if (symmetrize(result, false) != s) throw std::invalid_argument("desymmetrize: input not symmetric");
    return result;
}

/// Scales a rational coefficient vector to an integer polynomial and the
/// common denominator: poly/den == sum a_k x^k.
inline std::pair<IntPoly, Int> scale_to_int(const std::vector<Rat>& a) {
    Int den(1);
    for (const Rat& q : a) den = lcm(den, q.get_den());
    std::vector<Int> c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k].get_num() * (den / a[k].get_den());
    return {IntPoly(std::move(c)), den};
}

}  // namespace icheb
