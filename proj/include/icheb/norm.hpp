#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "icheb/ball.hpp"
#include "icheb/poly.hpp"
#include "icheb/rational.hpp"

namespace icheb {

/// Closed rational interval, lo <= hi.
struct Interval {
    Rat lo, hi;
};

inline Interval make_interval(Rat lo, Rat hi) {
    if (lo > hi) throw std::invalid_argument("make_interval: lo > hi");
    return Interval{std::move(lo), std::move(hi)};
}

inline Interval unit_interval() { return Interval{Rat(0), Rat(1)}; }

/// Certified enclosure of a supremum norm: the exact norm lies in [lo, hi].
/// The witnesses are frontier subintervals covering every point where |p|
/// comes within the requested tolerance of the maximum.
struct NormEnclosure {
    Rat lo, hi;
    std::vector<Interval> witnesses;
};

struct RatInterval {
    Rat lo, hi;
};

/// One factor of a product p = prod f_i^{e_i}.
struct FactorRef {
    const IntPoly* poly;
    unsigned long exp;
};

/// Subinterval around a critical point of p'. `isolated` is set when the
/// bracket provably contains exactly one root of p'.
struct Bracket {
    Interval iv;
    bool isolated;
};

inline const Rat& default_rel_tol() {
    static const Rat tol = make_rat(Int(1), pow_int(10, 12));
    return tol;
}

namespace detail {

struct RatLess {
    bool operator()(const Rat& a, const Rat& b) const { return cmp(a, b) < 0; }
};

/// [lo,hi]^e for an interval with lo >= 0.
inline void fi_pow_nonneg(FI& d, const FI& a, unsigned long e) {
    mpfr_pow_ui(d.lo, a.lo, e, MPFR_RNDD);
    mpfr_pow_ui(d.hi, a.hi, e, MPFR_RNDU);
}

/// Certified evaluation of one integer polynomial.
///
/// Range bounds intersect plain interval Horner with a mean-value form
/// p(mid) + [l-mid, r-mid] * p'([l,r]); the latter tracks the quadratic
/// landscape near maxima, the former wins on wide segments. Once the search
/// installs a Taylor expansion re-centered inside a small subinterval,
/// evaluation switches to the shifted series, which keeps bounds honest when
/// coefficients are hundreds of bits larger than the values they cancel down
/// to.
class Evaluator {
  public:
    Evaluator(const IntPoly& p, mpfr_prec_t prec)
        : p_(&p), dp_(p.derivative()), prec_(prec), s_(prec), acc_(prec), x_(prec), t_(prec), tmp_(prec), v1_(prec), v2_(prec) {}

    const IntPoly& poly() const { return *p_; }

    void point(const Rat& x, FI& out) {
        const Expansion* e = covering(x, x);
        if (e) {
            set_q_point(t_, x - e->center);
            horner(e->c, t_, out);
        } else {
            set_q_point(x_, x);
            horner_z(p_->coeffs(), x_, out);
        }
    }

    void range(const Rat& l, const Rat& r, FI& out) {
        if (l == r) {
            point(l, out);
            return;
        }
        Rat mid = (l + r) / 2;
        const Expansion* e = covering(l, r);
        if (e) {
            set_q_pair(t_, l - e->center, r - e->center);
            horner(e->c, t_, out);
            set_q_point(x_, mid - e->center);
            horner(e->c, x_, v1_);
            horner(e->dc, t_, v2_);
        } else {
            set_q_pair(x_, l, r);
            horner_z(p_->coeffs(), x_, out);
            set_q_point(t_, mid);
            horner_z(p_->coeffs(), t_, v1_);
            horner_z(dp_.coeffs(), x_, v2_);
        }
        set_q_pair(t_, l - mid, r - mid);
        fi_mul(v2_, v2_, t_, s_);
        fi_add(v1_, v1_, v2_);
        intersect(out, v1_);
    }

    bool has_covering(const Rat& l, const Rat& r) { return covering(l, r) != nullptr; }

    void add_expansion(const Rat& center, const Rat& radius) {
        Expansion e;
        e.center = center;
        e.radius = radius;
        const auto& cz = p_->coeffs();
        e.c.reserve(cz.size());
        for (const Int& z : cz) {
            FI b(prec_);
            fi_set_z(b, z);
            e.c.push_back(std::move(b));
        }
        FI cfi(prec_);
        fi_set_q(cfi, center);
        const int n = static_cast<int>(e.c.size());
        for (int i = 0; i + 1 < n; ++i) {
            for (int j = n - 2; j >= i; --j) {
                auto ju = static_cast<std::size_t>(j);
                fi_mul(tmp_, e.c[ju + 1], cfi, s_);
                fi_add(e.c[ju], e.c[ju], tmp_);
            }
        }
        e.dc.reserve(cz.size() > 0 ? cz.size() - 1 : 0);
        for (std::size_t j = 1; j < e.c.size(); ++j) {
            FI b(prec_);
            mpfr_mul_ui(b.lo, e.c[j].lo, static_cast<unsigned long>(j), MPFR_RNDD);
            mpfr_mul_ui(b.hi, e.c[j].hi, static_cast<unsigned long>(j), MPFR_RNDU);
            e.dc.push_back(std::move(b));
        }
        expansions_.insert_or_assign(center, std::move(e));
    }

  private:
    struct Expansion {
        Rat center, radius;
        std::vector<FI> c, dc;
    };

    static void set_q_pair(FI& d, const Rat& l, const Rat& r) {
        mpfr_set_q(d.lo, l.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(d.hi, r.get_mpq_t(), MPFR_RNDU);
    }

    static void set_q_point(FI& d, const Rat& x) {
        mpfr_set_q(d.lo, x.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(d.hi, x.get_mpq_t(), MPFR_RNDU);
    }

    /// a <- a intersect b (both enclose the true range, so nonempty up to
    /// rounding; clamped if rounding crosses the endpoints)
    static void intersect(FI& a, const FI& b) {
        if (mpfr_cmp(a.lo, b.lo) < 0) mpfr_set(a.lo, b.lo, MPFR_RNDD);
        if (mpfr_cmp(a.hi, b.hi) > 0) mpfr_set(a.hi, b.hi, MPFR_RNDU);
        if (mpfr_cmp(a.lo, a.hi) > 0) mpfr_set(a.lo, a.hi, MPFR_RNDD);
    }

    void horner_z(const std::vector<Int>& c, const FI& x, FI& out) {
        if (c.empty()) {
            fi_set_zero(out);
            return;
        }
        fi_set_z(acc_, c.back());
        for (std::size_t k = c.size() - 1; k-- > 0;) {
            fi_mul(acc_, acc_, x, s_);
            fi_add_z(acc_, acc_, c[k]);
        }
        mpfr_set(out.lo, acc_.lo, MPFR_RNDD);
        mpfr_set(out.hi, acc_.hi, MPFR_RNDU);
    }

    void horner(const std::vector<FI>& c, const FI& x, FI& out) {
        if (c.empty()) {
            fi_set_zero(out);
            return;
        }
        mpfr_set(acc_.lo, c.back().lo, MPFR_RNDD);
        mpfr_set(acc_.hi, c.back().hi, MPFR_RNDU);
        for (std::size_t k = c.size() - 1; k-- > 0;) {
            fi_mul(acc_, acc_, x, s_);
            fi_add(acc_, acc_, c[k]);
        }
        mpfr_set(out.lo, acc_.lo, MPFR_RNDD);
        mpfr_set(out.hi, acc_.hi, MPFR_RNDU);
    }

    const Expansion* covering(const Rat& l, const Rat& r) {
        if (expansions_.empty()) return nullptr;
        auto it = expansions_.upper_bound(l);
        for (int back = 0; back < 3 && it != expansions_.begin(); ++back) --it;
        for (int step = 0; step < 6 && it != expansions_.end(); ++step, ++it) {
            const Expansion& e = it->second;
            if (e.center - e.radius <= l && r <= e.center + e.radius) return &e;
        }
        return nullptr;
    }

    const IntPoly* p_;
    IntPoly dp_;
    mpfr_prec_t prec_;
    FiScratch s_;
    FI acc_, x_, t_, tmp_, v1_, v2_;
    std::map<Rat, Expansion, RatLess> expansions_;
};

inline std::size_t l1_bits(std::span<const FactorRef> factors) {
    std::size_t bits = 0;
    for (const auto& f : factors) {
        Int l1 = f.poly->l1_norm();
        bits += f.exp * mpz_sizeinbase(l1.get_mpz_t(), 2);
    }
    return bits;
}

/// -floor(log2(q)) for q in (0,1]; 0 for q >= 1.
inline long neg_log2_floor(const Rat& q) {
    if (sgn(q) <= 0) throw std::logic_error("neg_log2_floor: nonpositive");
    if (q >= 1) return 0;
    long nb = static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2));
    long db = static_cast<long>(mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
    return db - nb + 1;
}

/// Bundle of per-factor evaluators for |prod f^e| over subintervals.
///
/// Upper bounds intersect the plain product of factor ranges with a
/// product-rule mean-value form p(mid) + [l-mid, r-mid] * p'([l,r]): each
/// factor varies linearly where the product is flat, so the plain product
/// alone would force exponential refinement around every maximum.
class ProductEval {
  public:
    ProductEval(std::span<const FactorRef> factors, mpfr_prec_t prec)
        : factors_(factors.begin(), factors.end()),
          prec_(prec),
          s_(prec),
          acc_(prec),
          fv_(prec),
          av_(prec),
          pv_(prec),
          dsum_(prec),
          term_(prec),
          wfi_(prec) {
        for (const auto& f : factors_) {
            evals_.push_back(std::make_unique<Evaluator>(*f.poly, prec));
            devals_.push_back(std::make_unique<Evaluator>(f.poly->derivative(), prec));
            ranges_.emplace_back(prec);
            dranges_.emplace_back(prec);
            powers_.emplace_back(prec);
        }
    }

    /// Upper bound of |p| over [l,r].
    Rat range_upper(const Rat& l, const Rat& r) {
        // plain: product of per-factor magnitude ranges
        mpfr_set_ui(acc_.lo, 1, MPFR_RNDD);
        mpfr_set_ui(acc_.hi, 1, MPFR_RNDU);
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            evals_[i]->range(l, r, ranges_[i]);
            fi_abs(av_, ranges_[i]);
            fi_pow_nonneg(powers_[i], av_, factors_[i].exp);
            fi_mul(acc_, acc_, powers_[i], s_);
        }
        Rat plain = mpfr_to_rat(acc_.hi);
        if (l == r) return plain;

        // mean value: |p(m) + [l-m, r-m] * p'([l,r])| via the product rule
        Rat mid = (l + r) / 2;
        point_value(mid, fv_);
        fi_set_zero(dsum_);
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            devals_[i]->range(l, r, dranges_[i]);
            // e_i * f_i' * f_i^(e_i - 1) * prod_{j != i} f_j^{e_j}
            fi_mul_z(term_, dranges_[i], Int(factors_[i].exp));
            fi_pow_signed(pv_, ranges_[i], factors_[i].exp - 1);
            fi_mul(term_, term_, pv_, s_);
            for (std::size_t j = 0; j < factors_.size(); ++j) {
                if (j == i) continue;
                fi_mul(term_, term_, powers_[j], s_);
            }
            fi_add(dsum_, dsum_, term_);
        }
        Rat half = (r - l) / 2;
        mpfr_set_q(wfi_.hi, half.get_mpq_t(), MPFR_RNDU);
        mpfr_neg(wfi_.lo, wfi_.hi, MPFR_RNDD);
        fi_mul(dsum_, dsum_, wfi_, s_);
        fi_add(fv_, fv_, dsum_);
        fi_abs(av_, fv_);
        Rat mv = mpfr_to_rat(av_.hi);
        return mv < plain ? mv : plain;
    }

    /// Certified lower bound of |p(x)|.
    Rat point_lower(const Rat& x) {
        point_value(x, fv_);
        fi_abs(av_, fv_);
        Rat v = mpfr_to_rat(av_.lo);
        return sgn(v) < 0 ? Rat(0) : v;
    }

    /// Installs expansions for every factor that benefits, when the
    /// subinterval is small enough for the shifted series to converge.
    void maybe_expand(const Rat& l, const Rat& r, const Rat& span) {
        Rat w = r - l;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            int deg = factors_[i].poly->degree();
            if (deg < 6) continue;
            Rat w0 = span / Rat(std::max(8, 2 * deg));
            if (w <= w0) {
                Rat mid = (l + r) / 2;
                if (!evals_[i]->has_covering(l, r)) evals_[i]->add_expansion(mid, 2 * w);
                if (!devals_[i]->has_covering(l, r)) devals_[i]->add_expansion(mid, 2 * w);
            }
        }
    }

  private:
    /// signed interval power: odd powers are monotone, even powers go
    /// through the magnitude
    void fi_pow_signed(FI& d, const FI& a, unsigned long e) {
        if (e == 0) {
            mpfr_set_ui(d.lo, 1, MPFR_RNDD);
            mpfr_set_ui(d.hi, 1, MPFR_RNDU);
            return;
        }
        if (e % 2 == 1) {
            mpfr_pow_ui(d.lo, a.lo, e, MPFR_RNDD);
            mpfr_pow_ui(d.hi, a.hi, e, MPFR_RNDU);
        } else {
            fi_abs(d, a);
            mpfr_pow_ui(d.lo, d.lo, e, MPFR_RNDD);
            mpfr_pow_ui(d.hi, d.hi, e, MPFR_RNDU);
        }
    }

    void fi_mul_z(FI& d, const FI& a, const Int& z) {
        if (sgn(z) >= 0) {
            mpfr_mul_z(d.lo, a.lo, z.get_mpz_t(), MPFR_RNDD);
            mpfr_mul_z(d.hi, a.hi, z.get_mpz_t(), MPFR_RNDU);
        } else {
            mpfr_mul_z(s_.t1, a.hi, z.get_mpz_t(), MPFR_RNDD);
            mpfr_mul_z(s_.t2, a.lo, z.get_mpz_t(), MPFR_RNDU);
            mpfr_swap(d.lo.get(), s_.t1.get());
            mpfr_swap(d.hi.get(), s_.t2.get());
        }
    }

    /// signed ball of p(x)
    void point_value(const Rat& x, FI& out) {
        mpfr_set_ui(acc_.lo, 1, MPFR_RNDD);
        mpfr_set_ui(acc_.hi, 1, MPFR_RNDU);
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            evals_[i]->point(x, pv_);
            fi_pow_signed(av_, pv_, factors_[i].exp);
            fi_mul(acc_, acc_, av_, s_);
        }
        mpfr_set(out.lo, acc_.lo, MPFR_RNDD);
        mpfr_set(out.hi, acc_.hi, MPFR_RNDU);
    }

    std::vector<FactorRef> factors_;
    mpfr_prec_t prec_;
    FiScratch s_;
    FI acc_, fv_, av_, pv_, dsum_, term_, wfi_;
    std::vector<std::unique_ptr<Evaluator>> evals_;
    std::vector<std::unique_ptr<Evaluator>> devals_;
    std::vector<FI> ranges_, dranges_, powers_;
};

}  // namespace detail

/// Exact |prod f^e| at a rational point.
inline Rat product_abs_at(std::span<const FactorRef> factors, const Rat& x) {
    Rat v(1);
    for (const auto& f : factors) {
        Rat fv = f.poly->eval_fraction(x.get_num(), x.get_den());
        v *= pow_rat(fv, f.exp);
    }
    return abs_rat(v);
}

/// Certified enclosure of sup |prod f_i^{e_i}| over I with relative width at
/// most rel_tol. Adaptive dyadic subdivision: exact rational seeding of the
/// lower bound, outward-rounded interval evaluation for upper bounds, retried
/// at doubled precision if the tolerance is unreachable.
inline NormEnclosure sup_norm(std::span<const FactorRef> factors, const Interval& I, const Rat& rel_tol = default_rel_tol()) {
    if (sgn(rel_tol) <= 0) throw std::invalid_argument("sup_norm: rel_tol must be positive");
    if (factors.empty()) throw std::invalid_argument("sup_norm: empty product");
    long total_degree = 0;
    for (const auto& f : factors) {
        if (f.poly == nullptr || f.poly->is_zero()) throw std::invalid_argument("sup_norm: zero polynomial");
        if (f.exp == 0) throw std::invalid_argument("sup_norm: zero exponent");
        total_degree += static_cast<long>(f.exp) * f.poly->degree();
    }

    if (total_degree == 0 || I.lo == I.hi) {
        Rat v = product_abs_at(factors, I.lo);
        return NormEnclosure{v, v, {Interval{I.lo, I.hi}}};
    }

    // Symmetry reduction: when the interval endpoints sum to an integer and
    // every factor satisfies f(lo+hi-x) = +-f(x), |p| is mirror-symmetric and
    // half the interval carries all the information.
    Interval work = I;
    bool mirrored = false;
    {
        Rat s = I.lo + I.hi;
        if (is_integer(s)) {
            bool all_sym = true;
            for (const auto& f : factors) {
                IntPoly refl = f.poly->compose(IntPoly(std::vector<Int>{Int(s.get_num()), Int(-1)}));
                if (refl != *f.poly && refl != -*f.poly) {
                    all_sym = false;
                    break;
                }
            }
            if (all_sym) {
                work = Interval{I.lo, (I.lo + I.hi) / 2};
                mirrored = true;
            }
        }
    }

    const Rat span = work.hi - work.lo;
    auto x_left = [&](const Int& k, unsigned d) { return Rat(work.lo + span * make_rat(k, pow_int(2, d))); };

    unsigned d0 = 4;
    while ((1L << d0) < std::min<long>(2 * total_degree, 1024)) ++d0;
    Rat best_lo(0);
    {
        long grid = 1L << d0;
        for (long k = 0; k <= grid; ++k) {
            Rat v = product_abs_at(factors, x_left(Int(k), d0));
            if (v > best_lo) best_lo = v;
        }
    }

    const std::size_t coeff_bits = detail::l1_bits(factors);
    long prec = static_cast<long>(coeff_bits) + 96;
    prec += 2 * static_cast<long>(mpz_sizeinbase(Int(total_degree + 2).get_mpz_t(), 2));
    if (sgn(best_lo) > 0) prec += detail::neg_log2_floor(best_lo);
    prec += detail::neg_log2_floor(rel_tol);

    struct Seg {
        Int k;
        unsigned d;
        Rat ub;
    };
    auto seg_less = [](const Seg& a, const Seg& b) { return cmp(a.ub, b.ub) < 0; };

    for (int attempt = 0; attempt < 8; ++attempt, prec *= 2) {
        detail::ProductEval pe(factors, static_cast<mpfr_prec_t>(prec));
        const unsigned depth_limit = static_cast<unsigned>(std::max<long>(48, prec - static_cast<long>(coeff_bits) - 48));

        std::vector<Seg> heap;
        auto push_child = [&](Int k, unsigned d, const Rat& parent_ub) {
            Rat l = x_left(k, d), r = x_left(k + 1, d);
            pe.maybe_expand(l, r, span);
            Rat ub = pe.range_upper(l, r);
            if (ub > parent_ub) ub = parent_ub;  // child range is a subset
            heap.push_back(Seg{std::move(k), d, std::move(ub)});
            std::push_heap(heap.begin(), heap.end(), seg_less);
        };

        for (long k = 0, grid = 1L << d0; k < grid; ++k) {
            Rat ub = pe.range_upper(x_left(Int(k), d0), x_left(Int(k + 1), d0));
            heap.push_back(Seg{Int(k), d0, std::move(ub)});
        }
        std::make_heap(heap.begin(), heap.end(), seg_less);

        bool need_retry = false;
        const long max_pops = 300000;
        for (long pops = 0; pops < max_pops; ++pops) {
            std::pop_heap(heap.begin(), heap.end(), seg_less);
            Seg top = std::move(heap.back());
            heap.pop_back();

            if (top.ub <= best_lo * (1 + rel_tol)) {
                // Done: every frontier segment is bounded by top.ub.
                NormEnclosure out;
                out.lo = best_lo;
                out.hi = top.ub;
                if (out.hi < out.lo) out.hi = out.lo;  // exact-value corner
                heap.push_back(std::move(top));

                // Witness selection: keep frontier segments that may touch
                // the near-max set, refining any that cannot demonstrate a
                // near-max point so the brackets stay tight.
                const Rat cut = best_lo * (1 - rel_tol);
                const Rat demo = best_lo * (1 - 3 * rel_tol);
                std::vector<Interval> wit;
                std::deque<Seg> cands;
                for (Seg& s : heap)
                    if (s.ub >= cut) cands.push_back(std::move(s));
                long budget = 4000;
                while (!cands.empty()) {
                    Seg s = std::move(cands.front());
                    cands.pop_front();
                    if (s.ub < cut) continue;
                    Rat l = x_left(s.k, s.d), r = x_left(s.k + 1, s.d);
                    Rat mid = (l + r) / 2;
                    bool demonstrated = pe.point_lower(mid) >= demo || pe.point_lower(l) >= demo || pe.point_lower(r) >= demo;
                    if (demonstrated || s.d >= depth_limit || --budget < 0) {
                        wit.push_back(Interval{std::move(l), std::move(r)});
                        continue;
                    }
                    Int k2 = 2 * s.k;
                    for (int c = 0; c < 2; ++c) {
                        Int kc = k2 + c;
                        Rat cl = x_left(kc, s.d + 1), cr = x_left(kc + 1, s.d + 1);
                        Rat ub = pe.range_upper(cl, cr);
                        if (ub > s.ub) ub = s.ub;
                        cands.push_back(Seg{std::move(kc), s.d + 1, std::move(ub)});
                    }
                }
                if (mirrored) {
                    Rat sum = I.lo + I.hi;
                    std::size_t m = wit.size();
                    for (std::size_t i = 0; i < m; ++i) wit.push_back(Interval{sum - wit[i].hi, sum - wit[i].lo});
                }
                std::sort(wit.begin(), wit.end(), [](const Interval& a, const Interval& b) { return cmp(a.lo, b.lo) < 0; });
                std::vector<Interval> merged;
                for (auto& w : wit) {
                    if (!merged.empty() && w.lo <= merged.back().hi) {
                        if (w.hi > merged.back().hi) merged.back().hi = std::move(w.hi);
                    } else {
                        merged.push_back(std::move(w));
                    }
                }
                out.witnesses = std::move(merged);
                return out;
            }

            if (top.d >= depth_limit) {
                need_retry = true;
                break;
            }

            Int k2 = 2 * top.k;
            Rat xm = x_left(k2 + 1, top.d + 1);
            Rat v = pe.point_lower(xm);
            if (v > best_lo) best_lo = v;
            push_child(k2, top.d + 1, top.ub);
            push_child(k2 + 1, top.d + 1, top.ub);
        }
        (void)need_retry;  // either path: retry at doubled precision
    }
    throw std::runtime_error("sup_norm: failed to certify enclosure at maximum precision");
}

inline NormEnclosure sup_norm(const IntPoly& p, const Interval& I, const Rat& rel_tol = default_rel_tol()) {
    FactorRef f{&p, 1};
    return sup_norm(std::span<const FactorRef>(&f, 1), I, rel_tol);
}

/// ||p||_I^(1/deg p) with outward rounding.
inline RatInterval normalized_t(const NormEnclosure& e, long n, const Rat& rel_tol = default_rel_tol()) {
    if (n <= 0) throw std::invalid_argument("normalized_t: degree must be positive");
    long prec = 64 + detail::neg_log2_floor(rel_tol);
    Mpfr lo(prec), hi(prec), tmp(prec);
    mpfr_set_q(tmp, e.lo.get_mpq_t(), MPFR_RNDD);
    mpfr_rootn_ui(lo, tmp, static_cast<unsigned long>(n), MPFR_RNDD);
    mpfr_set_q(tmp, e.hi.get_mpq_t(), MPFR_RNDU);
    mpfr_rootn_ui(hi, tmp, static_cast<unsigned long>(n), MPFR_RNDU);
    return RatInterval{mpfr_to_rat(lo), mpfr_to_rat(hi)};
}

inline RatInterval normalized_t(const IntPoly& p, const Interval& I, const Rat& rel_tol = default_rel_tol()) {
    if (p.degree() < 1) throw std::invalid_argument("normalized_t: degree must be positive");
    return normalized_t(sup_norm(p, I, rel_tol), p.degree(), rel_tol);
}

/// Bracketing subintervals for the interior roots of p' at which |p| exceeds
/// `threshold`. Every interior local maximizer of |p| above the threshold is
/// covered by some returned bracket; brackets flagged `isolated` contain
/// exactly one root of p'. Conservative: near-threshold or degenerate
/// critical points may be reported with isolated = false.
inline std::vector<Bracket> critical_points_above(const IntPoly& p, const Interval& I, const Rat& threshold) {
    if (p.is_zero()) throw std::invalid_argument("critical_points_above: zero polynomial");
    if (sgn(threshold) < 0) throw std::invalid_argument("critical_points_above: negative threshold");
    IntPoly dp = p.derivative();
    if (dp.is_zero() || I.lo == I.hi) return {};
    IntPoly ddp = dp.derivative();

    FactorRef fp{&p, 1};
    std::size_t coeff_bits = detail::l1_bits(std::span<const FactorRef>(&fp, 1));
    long prec = static_cast<long>(coeff_bits) + 160;

    const Rat span = I.hi - I.lo;
    auto x_left = [&](const Int& k, unsigned d) { return Rat(I.lo + span * make_rat(k, pow_int(2, d))); };

    struct Item {
        Int k;
        unsigned d;
    };

    for (int attempt = 0; attempt < 8; ++attempt, prec *= 2) {
        auto p_eval = detail::Evaluator(p, static_cast<mpfr_prec_t>(prec));
        auto dp_eval = detail::Evaluator(dp, static_cast<mpfr_prec_t>(prec));
        auto ddp_eval = detail::Evaluator(ddp, static_cast<mpfr_prec_t>(prec));
        FI v(prec), av(prec), dv(prec), ddv(prec), sl(prec), sr(prec);
        const unsigned depth_limit = static_cast<unsigned>(std::max<long>(48, prec - static_cast<long>(coeff_bits) - 48));

        std::deque<Item> queue;
        unsigned d0 = 2;
        while ((1L << d0) < std::min(2 * p.degree(), 512)) ++d0;
        for (long k = 0; k < (1L << d0); ++k) queue.push_back(Item{Int(k), d0});

        std::vector<Bracket> found;
        bool retry = false;
        long steps = 0;
        const long max_steps = 400000;
        while (!queue.empty()) {
            if (++steps > max_steps) {
                retry = true;
                break;
            }
            Item it = std::move(queue.front());
            queue.pop_front();
            Rat l = x_left(it.k, it.d), r = x_left(it.k + 1, it.d);

            p_eval.range(l, r, v);
            fi_abs(av, v);
            if (mpfr_cmp_q(av.hi, threshold.get_mpq_t()) <= 0) continue;
            dp_eval.range(l, r, dv);
            if (!fi_contains_zero(dv)) continue;

            dp_eval.point(l, sl);
            dp_eval.point(r, sr);
            int sgn_l = fi_sign(sl), sgn_r = fi_sign(sr);
            if (sgn_l != 0 && sgn_r != 0 && sgn_l != sgn_r) {
                ddp_eval.range(l, r, ddv);
                bool one_root = !fi_contains_zero(ddv);
                bool value_above = mpfr_cmp_q(av.lo, threshold.get_mpq_t()) > 0;
                if (one_root && value_above) {
                    found.push_back(Bracket{Interval{l, r}, true});
                    continue;
                }
                if (it.d >= depth_limit) {
                    found.push_back(Bracket{Interval{l, r}, one_root});
                    continue;
                }
            } else if (it.d >= depth_limit) {
                // cannot resolve: keep it, biased toward coverage
                found.push_back(Bracket{Interval{l, r}, false});
                continue;
            }
            Int k2 = 2 * it.k;
            queue.push_back(Item{k2, it.d + 1});
            queue.push_back(Item{k2 + 1, it.d + 1});
        }
        if (retry) continue;

        std::sort(found.begin(), found.end(), [](const Bracket& a, const Bracket& b) { return cmp(a.iv.lo, b.iv.lo) < 0; });
        // merge touching unresolved fragments of the same cluster
        std::vector<Bracket> merged;
        for (auto& b : found) {
            if (!merged.empty() && !merged.back().isolated && !b.isolated && b.iv.lo <= merged.back().iv.hi)
                merged.back().iv.hi = std::max(merged.back().iv.hi, b.iv.hi, [](const Rat& a, const Rat& c) { return cmp(a, c) < 0; });
            else
                merged.push_back(std::move(b));
        }
        return merged;
    }
    throw std::runtime_error("critical_points_above: failed to certify at maximum precision");
}

}  // namespace icheb
