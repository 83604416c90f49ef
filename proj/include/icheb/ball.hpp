#pragma once

// keep mpfr's function-like macros out of the way of the RAII wrapper
#ifndef MPFR_USE_NO_MACRO
#define MPFR_USE_NO_MACRO 1
#endif
#include <mpfr.h>

#include <stdexcept>

#include "icheb/rational.hpp"

namespace icheb {

/// RAII wrapper for a single mpfr value.
class Mpfr {
  public:
    Mpfr() { mpfr_init2(v_, 64); }
    explicit Mpfr(mpfr_prec_t p) { mpfr_init2(v_, p); }
    Mpfr(const Mpfr& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Mpfr(Mpfr&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Mpfr& operator=(Mpfr&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    operator mpfr_ptr() { return v_; }
    operator mpfr_srcptr() const { return v_; }

  private:
    mpfr_t v_;
};

/// Closed interval [lo, hi] with outward-rounded endpoint arithmetic.
struct FI {
    Mpfr lo, hi;
    FI() = default;
    explicit FI(mpfr_prec_t p) : lo(p), hi(p) {}
};

/// Scratch space so interval products never allocate in hot loops.
struct FiScratch {
    Mpfr t1, t2, t3, t4;
    explicit FiScratch(mpfr_prec_t p) : t1(p), t2(p), t3(p), t4(p) {}
};

inline void fi_set_z(FI& d, const Int& z) {
    mpfr_set_z(d.lo, z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(d.hi, z.get_mpz_t(), MPFR_RNDU);
}

inline void fi_set_q(FI& d, const Rat& q) {
    mpfr_set_q(d.lo, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(d.hi, q.get_mpq_t(), MPFR_RNDU);
}

inline void fi_set_point(FI& d, const Mpfr& x) {
    mpfr_set(d.lo, x, MPFR_RNDD);
    mpfr_set(d.hi, x, MPFR_RNDU);
}

inline void fi_set_zero(FI& d) {
    mpfr_set_zero(d.lo, 1);
    mpfr_set_zero(d.hi, 1);
}

inline void fi_add(FI& d, const FI& a, const FI& b) {
    mpfr_add(d.lo, a.lo, b.lo, MPFR_RNDD);
    mpfr_add(d.hi, a.hi, b.hi, MPFR_RNDU);
}

inline void fi_add_z(FI& d, const FI& a, const Int& z) {
    mpfr_add_z(d.lo, a.lo, z.get_mpz_t(), MPFR_RNDD);
    mpfr_add_z(d.hi, a.hi, z.get_mpz_t(), MPFR_RNDU);
}

inline void fi_sub(FI& d, const FI& a, const FI& b) {
    mpfr_sub(d.lo, a.lo, b.hi, MPFR_RNDD);
    mpfr_sub(d.hi, a.hi, b.lo, MPFR_RNDU);
}

inline void fi_neg(FI& d, const FI& a) {
    if (&d == &a) {
        mpfr_swap(d.lo, d.hi);
        mpfr_neg(d.lo, d.lo, MPFR_RNDD);
        mpfr_neg(d.hi, d.hi, MPFR_RNDU);
    } else {
        mpfr_neg(d.lo, a.hi, MPFR_RNDD);
        mpfr_neg(d.hi, a.lo, MPFR_RNDU);
    }
}

/// d = a * b. Sign-dispatched; safe under aliasing.
inline void fi_mul(FI& d, const FI& a, const FI& b, FiScratch& s) {
    const int alo = mpfr_sgn(a.lo), ahi = mpfr_sgn(a.hi);
    const int blo = mpfr_sgn(b.lo), bhi = mpfr_sgn(b.hi);
    mpfr_ptr rl = s.t1.get(), rh = s.t2.get();
    if (alo >= 0) {
        if (blo >= 0) {
            mpfr_mul(rl, a.lo, b.lo, MPFR_RNDD);
            mpfr_mul(rh, a.hi, b.hi, MPFR_RNDU);
        } else if (bhi <= 0) {
            mpfr_mul(rl, a.hi, b.lo, MPFR_RNDD);
            mpfr_mul(rh, a.lo, b.hi, MPFR_RNDU);
        } else {
            mpfr_mul(rl, a.hi, b.lo, MPFR_RNDD);
            mpfr_mul(rh, a.hi, b.hi, MPFR_RNDU);
        }
    } else if (ahi <= 0) {
        if (blo >= 0) {
            mpfr_mul(rl, a.lo, b.hi, MPFR_RNDD);
            mpfr_mul(rh, a.hi, b.lo, MPFR_RNDU);
        } else if (bhi <= 0) {
            mpfr_mul(rl, a.hi, b.hi, MPFR_RNDD);
            mpfr_mul(rh, a.lo, b.lo, MPFR_RNDU);
        } else {
            mpfr_mul(rl, a.lo, b.hi, MPFR_RNDD);
            mpfr_mul(rh, a.lo, b.lo, MPFR_RNDU);
        }
    } else {
        if (blo >= 0) {
            mpfr_mul(rl, a.lo, b.hi, MPFR_RNDD);
            mpfr_mul(rh, a.hi, b.hi, MPFR_RNDU);
        } else if (bhi <= 0) {
            mpfr_mul(rl, a.hi, b.lo, MPFR_RNDD);
            mpfr_mul(rh, a.lo, b.lo, MPFR_RNDU);
        } else {
            mpfr_mul(rl, a.lo, b.hi, MPFR_RNDD);
            mpfr_mul(s.t3, a.hi, b.lo, MPFR_RNDD);
            if (mpfr_cmp(s.t3, rl) < 0) mpfr_swap(s.t3.get(), rl);
            mpfr_mul(rh, a.lo, b.lo, MPFR_RNDU);
            mpfr_mul(s.t4, a.hi, b.hi, MPFR_RNDU);
            if (mpfr_cmp(s.t4, rh) > 0) mpfr_swap(s.t4.get(), rh);
        }
    }
    mpfr_swap(d.lo, rl);
    mpfr_swap(d.hi, rh);
}

/// d = a * x for an exact scalar x.
inline void fi_mul_scalar(FI& d, const FI& a, const Mpfr& x, FiScratch& s) {
    if (mpfr_sgn(x.get()) >= 0) {
        mpfr_mul(s.t1, a.lo, x, MPFR_RNDD);
        mpfr_mul(s.t2, a.hi, x, MPFR_RNDU);
    } else {
        mpfr_mul(s.t1, a.hi, x, MPFR_RNDD);
        mpfr_mul(s.t2, a.lo, x, MPFR_RNDU);
    }
    mpfr_swap(d.lo, s.t1.get());
    mpfr_swap(d.hi, s.t2.get());
}

inline void fi_abs(FI& d, const FI& a) {
    if (mpfr_sgn(a.lo) >= 0) {
        if (&d != &a) {
            mpfr_set(d.lo, a.lo, MPFR_RNDD);
            mpfr_set(d.hi, a.hi, MPFR_RNDU);
        }
    } else if (mpfr_sgn(a.hi) <= 0) {
        fi_neg(d, a);
    } else {
        mpfr_neg(d.lo, a.lo, MPFR_RNDU);  // = |a.lo|
        if (mpfr_cmp(d.lo, a.hi) < 0) mpfr_set(d.lo, a.hi, MPFR_RNDU);
        mpfr_swap(d.lo, d.hi);
        mpfr_set_zero(d.lo, 1);
    }
}

inline bool fi_contains_zero(const FI& a) { return mpfr_sgn(a.lo) <= 0 && mpfr_sgn(a.hi) >= 0; }

/// Exact rational value of a finite mpfr number.
inline Rat mpfr_to_rat(const Mpfr& m) {
    if (!mpfr_number_p(m.get())) throw std::overflow_error("mpfr_to_rat: non-finite value");
    Rat q;
    mpfr_get_q(q.get_mpq_t(), m.get());
    q.canonicalize();
    return q;
}

/// Certified sign of the interval: -1, +1, or 0 when the sign is ambiguous.
inline int fi_sign(const FI& a) {
    if (mpfr_sgn(a.lo) > 0) return 1;
    if (mpfr_sgn(a.hi) < 0) return -1;
    return 0;
}

}  // namespace icheb
