#include <catch2/catch_amalgamated.hpp>

#include "icheb/norm.hpp"
#include "icheb/poly.hpp"

using namespace icheb;

namespace {

struct TinyRng {
    std::uint64_t s = 0x2545f4914f6cdd1dULL;
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    Rat rat_in(const Interval& I, long max_den = 97) {
        long den = range(2, max_den);
        long num = range(0, den);
        return I.lo + (I.hi - I.lo) * make_rat(num, den);
    }
    IntPoly poly(int max_deg, long max_coeff) {
        int deg = static_cast<int>(range(0, max_deg));
        std::vector<Int> c(static_cast<std::size_t>(deg) + 1);
        for (auto& v : c) v = range(-max_coeff, max_coeff);
        return IntPoly(std::move(c));
    }
};

const IntPoly h1{0, 1, -1};
const IntPoly h2{-1, 2};

bool contains(const NormEnclosure& e, const Rat& v) { return e.lo <= v && v <= e.hi; }

}  // namespace

TEST_CASE("sup norm of simple polynomials") {
    NormEnclosure e = sup_norm(h1, unit_interval());
    CHECK(contains(e, make_rat(1, 4)));
    CHECK(e.hi - e.lo <= default_rel_tol() * e.hi);

    NormEnclosure e2 = sup_norm(h2, unit_interval());
    CHECK(contains(e2, Rat(1)));

    // attained at both endpoints: witnesses must cover 0 and 1
    REQUIRE_FALSE(e2.witnesses.empty());
    CHECK(e2.witnesses.front().lo == Rat(0));
    CHECK(e2.witnesses.back().hi == Rat(1));

    NormEnclosure e3 = sup_norm(IntPoly::constant(-7), unit_interval());
    CHECK(e3.lo == Rat(7));
    CHECK(e3.hi == Rat(7));

    CHECK_THROWS(sup_norm(IntPoly{}, unit_interval()));
}

TEST_CASE("sup norm on subintervals") {
    Interval quarter{Rat(0), make_rat(1, 4)};
    // x on [0,1/4] has norm 1/4 at the right endpoint
    NormEnclosure e = sup_norm(IntPoly{0, 1}, quarter);
    CHECK(contains(e, make_rat(1, 4)));

    // degenerate interval
    NormEnclosure pt = sup_norm(h1, Interval{make_rat(1, 3), make_rat(1, 3)});
    CHECK(pt.lo == make_rat(2, 9));
    CHECK(pt.hi == make_rat(2, 9));
}

TEST_CASE("factored products match expanded norms") {
    std::vector<FactorRef> refs{{&h1, 2}, {&h2, 1}};
    IntPoly expanded = h1.pow(2) * h2;
    NormEnclosure ef = sup_norm(refs, unit_interval());
    NormEnclosure ee = sup_norm(expanded, unit_interval());
    // both enclose the same exact value
    CHECK(ef.lo <= ee.hi);
    CHECK(ee.lo <= ef.hi);
}

TEST_CASE("soundness and tightness on random polynomials") {
    TinyRng rng;
    for (int trial = 0; trial < 25; ++trial) {
        IntPoly p = rng.poly(9, 40);
        if (p.is_zero()) continue;
        NormEnclosure e = sup_norm(p, unit_interval());
        for (int i = 0; i < 80; ++i) {
            Rat x = rng.rat_in(unit_interval());
            CHECK(abs_rat(p.eval(x)) <= e.hi);
        }
        // a witness bracket demonstrates a near-maximal point
        REQUIRE_FALSE(e.witnesses.empty());
        bool demonstrated = false;
        Rat slack_lo = e.lo * (1 - 4 * default_rel_tol());
        for (const auto& w : e.witnesses) {
            Rat probes[3] = {w.lo, (w.lo + w.hi) / 2, w.hi};
            for (const Rat& x : probes)
                if (abs_rat(p.eval(x)) >= slack_lo) demonstrated = true;
        }
        CHECK(demonstrated);
    }
}

TEST_CASE("monotonicity in the interval") {
    TinyRng rng;
    for (int trial = 0; trial < 10; ++trial) {
        IntPoly p = rng.poly(7, 25);
        if (p.is_zero()) continue;
        NormEnclosure small = sup_norm(p, Interval{make_rat(1, 8), make_rat(3, 8)});
        NormEnclosure big = sup_norm(p, unit_interval());
        CHECK(big.hi >= small.lo);
        CHECK(big.lo >= small.lo * (1 - 2 * default_rel_tol()));
    }
}

TEST_CASE("symmetrization transfers the norm between [0,1/4] and [0,1]") {
    TinyRng rng;
    Interval quarter{Rat(0), make_rat(1, 4)};
    for (int trial = 0; trial < 12; ++trial) {
        IntPoly q = rng.poly(10, 30);
        if (q.is_zero()) continue;
        NormEnclosure a = sup_norm(q, quarter);
        NormEnclosure b = sup_norm(symmetrize(q, false), unit_interval());
        CHECK(a.lo <= b.hi);
        CHECK(b.lo <= a.hi);
    }
}

TEST_CASE("normalized t") {
    RatInterval t = normalized_t(h1, unit_interval());
    CHECK(t.lo <= make_rat(1, 2));
    CHECK(make_rat(1, 2) <= t.hi);
    CHECK(t.hi - t.lo <= make_rat(1, 1000000000));
    CHECK_THROWS(normalized_t(IntPoly::constant(3), unit_interval()));
}

TEST_CASE("critical points above a threshold") {
    auto brackets = critical_points_above(h1, unit_interval(), make_rat(1, 8));
    REQUIRE(brackets.size() == 1);
    CHECK(brackets[0].isolated);
    CHECK(brackets[0].iv.lo < make_rat(1, 2));
    CHECK(brackets[0].iv.hi > make_rat(1, 2));

    CHECK(critical_points_above(h1, unit_interval(), make_rat(1, 2)).empty());

    // f = (x - x^2)(2x - 1); f' = 6x^2 - 6x + 1 has roots (3 +- sqrt(3))/6
    IntPoly f = h1 * h2;
    IntPoly df = f.derivative();
    auto br = critical_points_above(f, unit_interval(), Rat(0));
    REQUIRE(br.size() == 2);
    for (const auto& b : br) {
        CHECK(b.isolated);
        CHECK(b.iv.lo > Rat(0));
        CHECK(b.iv.hi < Rat(1));
        // opposite signs of f' certify the root inside (exact arithmetic)
        Rat dl = df.eval(b.iv.lo), dr = df.eval(b.iv.hi);
        CHECK(sgn(dl) * sgn(dr) < 0);
    }
    CHECK(br[0].iv.hi < br[1].iv.lo);
}
