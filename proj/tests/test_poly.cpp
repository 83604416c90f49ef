#include <catch2/catch_amalgamated.hpp>

#include "icheb/poly.hpp"
#include "icheb/rational.hpp"

using namespace icheb;

namespace {

// deterministic small-rational generator for property checks
struct TinyRng {
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    Rat rat(long max_den = 16) {
        long den = range(1, max_den);
        long num = range(0, den);
        return make_rat(num, den);
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
const IntPoly h3{1, -5, 5};

}  // namespace

TEST_CASE("rational helpers") {
    CHECK(parse_rat("3/4") == make_rat(3, 4));
    CHECK(parse_rat("-7") == Rat(-7));
    CHECK(parse_rat("0.42591455") == make_rat(42591455, 100000000));
    CHECK(parse_rat("1.5") == make_rat(3, 2));
    CHECK_THROWS(parse_rat("x"));
    CHECK(rat_to_string(make_rat(-4, 6)) == "-2/3");
    CHECK(rat_to_decimal(make_rat(1, 3), 4) == "0.3333");
    CHECK(rat_to_decimal(make_rat(1, 2), 0) == "1");
    CHECK(rat_to_decimal(make_rat(-1, 8), 2) == "-0.13");

    CHECK(round_ties_to_zero(make_rat(1, 2)) == 0);
    CHECK(round_ties_to_zero(make_rat(-1, 2)) == 0);
    CHECK(round_ties_to_zero(make_rat(3, 2)) == 1);
    CHECK(round_ties_to_zero(make_rat(-3, 2)) == -1);
    CHECK(round_ties_to_zero(make_rat(2, 5)) == 0);
    CHECK(round_ties_to_zero(make_rat(3, 5)) == 1);
    CHECK(round_ties_to_zero(make_rat(-3, 5)) == -1);
    CHECK(round_ties_to_zero(Rat(2)) == 2);
}

TEST_CASE("evaluation is exact") {
    CHECK(h3.eval(make_rat(1, 2)) == make_rat(-1, 4));
    CHECK(h1.eval(make_rat(1, 3)) == make_rat(2, 9));
    IntPoly p{7, -3, 11, 5};
    CHECK(p.eval(Rat(0)) == Rat(7));
    CHECK(p.eval_fraction(Int(2), Int(3)) == p.eval(make_rat(2, 3)));
    TinyRng rng;
    for (int i = 0; i < 50; ++i) {
        IntPoly q = rng.poly(7, 30);
        Rat x = rng.rat();
        CHECK(q.eval_fraction(x.get_num(), x.get_den()) == q.eval(x));
    }
}

TEST_CASE("arithmetic basics") {
    CHECK((h1 * h2) == IntPoly{0, -1, 3, -2});
    CHECK(h1.pow(2) == IntPoly{0, 0, 1, -2, 1});
    CHECK((h1 + h2) == IntPoly{-1, 3, -1});
    CHECK((h1 - h1).is_zero());
    CHECK(IntPoly{}.degree() == -1);
    CHECK(h1.degree() == 2);

    IntPoly prod = h1 * h3;
    auto q = prod.div_exact(h3);
    REQUIRE(q.has_value());
    CHECK(*q == h1);
    CHECK_FALSE((h1 * h2 + IntPoly::one()).div_exact(h2).has_value());
}

TEST_CASE("derivative") {
    CHECK(h1.derivative() == IntPoly{1, -2});
    CHECK(IntPoly::constant(5).derivative().is_zero());
    CHECK(h3.derivative() == IntPoly{-5, 10});
}

TEST_CASE("linear resultant") {
    CHECK(resultant_linear(h1, Int(2), Int(1)) == 1);  // 4 * G(1/2), G = x - x^2
    IntPoly g{4, -7, 0, 3};
    CHECK(resultant_linear(g, Int(1), Int(0)) == 4);
    CHECK(resultant_linear(h2, Int(2), Int(1)) == 0);  // shares the root 1/2
    CHECK_THROWS(resultant_linear(h1, Int(0), Int(1)));

    // a^g * G(b/a) is an integer for integer G, and matches the rational value
    TinyRng rng;
    for (int i = 0; i < 100; ++i) {
        IntPoly G = rng.poly(6, 20);
        if (G.is_zero()) continue;
        long a = rng.range(1, 9), b = rng.range(-9, 9);
        Rat expected = pow_rat(Rat(a), static_cast<unsigned long>(G.degree())) * G.eval(make_rat(b, a));
        CHECK(is_integer(expected));
        CHECK(Rat(resultant_linear(G, Int(a), Int(b))) == expected);
    }
}

TEST_CASE("symmetrization") {
    CHECK(symmetrize(IntPoly{0, 1}, false) == h1);
    CHECK(symmetrize(IntPoly::one(), true) == h2);
    CHECK(symmetrize(IntPoly{1, -5}, false) == h3);

    TinyRng rng;
    for (int i = 0; i < 40; ++i) {
        IntPoly q = rng.poly(6, 25);
        IntPoly even = symmetrize(q, false);
        IntPoly odd = symmetrize(q, true);
        if (q.is_zero()) {
            CHECK(even.is_zero());
            CHECK(odd.is_zero());
            continue;
        }
        CHECK(even.degree() == 2 * q.degree());
        CHECK(odd.degree() == 2 * q.degree() + 1);
        Rat x = rng.rat();
        CHECK(even.eval(x) == q.eval(x - x * x));
        CHECK(is_symmetric(even));
        CHECK(is_symmetric(odd));
        CHECK(desymmetrize(even) == q);
    }
    CHECK_THROWS(desymmetrize(IntPoly{0, 1}));  // x is not a polynomial in x - x^2
}

TEST_CASE("scale_to_int") {
    auto [p, den] = scale_to_int({make_rat(1, 2), make_rat(-2, 3), Rat(1)});
    CHECK(den == 6);
    CHECK(p == IntPoly{3, -4, 6});
}
