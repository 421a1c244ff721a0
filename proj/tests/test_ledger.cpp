#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chana/combinatorics.hpp"

using namespace chana;

TEST_CASE("factorials and binomials") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(5) == 120);
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(60, 30) == BigInt("118264581564861424"));
}

TEST_CASE("low coefficient exponent") {
    CHECK(bl_exponent(10, 4, 3) == Rational(2));
    CHECK(bl_exponent(8, 4, 3) >= Rational(1));
    // the (6,3,5) instance evaluates to 1; its claimed bound is 0
    CHECK(bl_exponent(6, 3, 5) == Rational(1));
    CHECK_THROWS_AS(bl_exponent(6, 4, 3), std::invalid_argument);

    for (int r : {3, 4, 5}) {
        auto rep = verify_bl(200, r);
        CHECK(rep.verified());
        CHECK(rep.instances > 0);
    }
}

TEST_CASE("high coefficient exponent") {
    CHECK(bh_exponent(12, 8, 3) == Rational(2));
    CHECK(bh_exponent(7, 4, 4) == Rational(2));
    CHECK_THROWS_AS(bh_exponent(8, 4, 3), std::invalid_argument);

    // The stated bound fails at exactly one low-order instance when r = 3:
    // (|alpha|,|beta|) = (3,2) evaluates to -1/2 against a claimed bound of 0.
    auto r3 = verify_bh(200, 3);
    REQUIRE(r3.violations.size() == 1);
    CHECK(r3.violations[0].total == 3);
    CHECK(r3.violations[0].sub == 2);
    CHECK(r3.violations[0].exponent == Rational(-1, 2));
    CHECK(r3.violations[0].bound == Rational(0));

    CHECK(verify_bh(200, 4).verified());
    CHECK(verify_bh(200, 5).verified());
}

TEST_CASE("curved exponent table mirrors the flat one") {
    auto r3 = verify_curved_exponents(200, 3);
    REQUIRE(r3.violations.size() == 1);
    CHECK(r3.violations[0].total == 3);
    CHECK(r3.violations[0].sub == 2);
    CHECK(verify_curved_exponents(200, 4).verified());
    CHECK(verify_curved_exponents(200, 5).verified());
}

TEST_CASE("a_l and a_h squared values and sups") {
    CHECK(al_squared(3, 1, 3) == Rational(2, 9));
    CHECK(al_squared(6, 3, 3) == Rational(27, 400));
    CHECK(ah_squared(3, 2, 3) == Rational(2187, 8192));

    for (int r : {3, 4, 5}) {
        auto s200 = sup_al_squared(200, r);
        auto s400 = sup_al_squared(400, r);
        CHECK(s200.sup == s400.sup);
        CHECK(s200.attained_at == s400.attained_at);

        auto h200 = sup_ah_squared(200, r);
        auto h400 = sup_ah_squared(400, r);
        CHECK(h200.sup == h400.sup);
        CHECK(h200.attained_at == h400.attained_at);
    }
    CHECK(sup_al_squared(200, 3).sup == Rational(2, 9));
    CHECK(sup_al_squared(200, 3).attained_at ==
          "(|alpha|,|beta|) = (3,1)");
    CHECK(sup_ah_squared(200, 3).sup == Rational(2187, 8192));

    // no growth trend: the tail half of the sweep stays under the sup
    const auto sup = sup_ah_squared(200, 3).sup;
    for (int n = 100; n <= 200; ++n)
        CHECK(ah_squared(n, n / 2 + 1, 3) <= sup);
}

TEST_CASE("epsilon exponent bound") {
    CHECK(verify_epsilon_bound({4, 4}, {1, 1}, {0, 2}, {0, 1}, 3));
    CHECK(epsilon_exponent({4, 0}, {2, 0}, {2, 0}, {1, 0}, 3) == Rational(0));
    CHECK_THROWS_AS(epsilon_exponent({2, 2}, {2, 2}, {0, 2}, {0, 1}, 3),
                    std::invalid_argument);

    auto rep = sweep_epsilon_bound(40, 3);
    CHECK(rep.verified());
    CHECK(rep.instances > 100000);
}

TEST_CASE("sub-multi-index identity") {
    CHECK(verify_komatsu_identity({2, 1}, 2));
    CHECK(verify_komatsu_identity({5, 0}, 0));
    auto rep = sweep_komatsu(10);
    CHECK(rep.verified());
}

TEST_CASE("binomial inequality") {
    CHECK(verify_binomial_inequality(1, 2, 3, 2));  // equality at the boundary
    CHECK(verify_binomial_inequality(0, 1, 4, 3));
    CHECK_THROWS_AS(verify_binomial_inequality(3, 0, 2, 0),
                    std::invalid_argument);
    CHECK(sweep_binomial(30).verified());
}

TEST_CASE("elementary quotient inequality") {
    CHECK(verify_elementary_inequality(5, 2));
    CHECK(verify_elementary_inequality(3, 2));
    CHECK_THROWS_AS(verify_elementary_inequality(2, 2),
                    std::invalid_argument);
    CHECK(sweep_elementary(1000).verified());
}

TEST_CASE("reports are deterministic") {
    auto a = verify_bh(100, 3), b = verify_bh(100, 3);
    CHECK(a.name == b.name);
    CHECK(a.range == b.range);
    CHECK(a.instances == b.instances);
    REQUIRE(a.violations.size() == b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
        CHECK(a.violations[i].total == b.violations[i].total);
        CHECK(a.violations[i].exponent == b.violations[i].exponent);
    }
}
