#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "chana/grid_field.hpp"

using namespace chana;
namespace {
constexpr double kPi = std::numbers::pi;

GridField random_field(int K, int P, unsigned seed, double decay = 0.5) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    GridField f(K, P);
    for (int k = -K; k <= K; ++k)
        for (int p = 0; p <= P; ++p)
            f.coeff(k, p) = Complex{U(rng), U(rng)} *
                            std::pow(decay, std::abs(k) + p);
    return f;
}
}  // namespace

TEST_CASE("transform round trip") {
    auto f = random_field(4, 12, 11);
    auto g = GridField::from_values(4, 12, f.values());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        num += std::norm(f.coeffs()[i] - g.coeffs()[i]);
        den += std::norm(f.coeffs()[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-12);
}

TEST_CASE("differentiation") {
    SUBCASE("constant") {
        GridField f(2, 4);
        f.coeff(0, 0) = 3.0;
        CHECK(l2_norm(diff(f, 1)) == doctest::Approx(0.0));
        CHECK(l2_norm(diff(f, 2)) == doctest::Approx(0.0));
    }
    SUBCASE("sin(2 pi x1) axis 1") {
        auto s = ModeField::term(1, VerticalBasis::one(), Complex{0.0, -0.5}) +
                 ModeField::term(-1, VerticalBasis::one(), Complex{0.0, 0.5});
        auto f = from_mode(s, 2, 4);
        auto df = diff(f, 1);
        double maxerr = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double x1 = i / 20.0;
            maxerr = std::max(maxerr, std::abs(df.eval(x1, 0.3) -
                                               2.0 * kPi * std::cos(2 * kPi * x1)));
        }
        CHECK(maxerr < 1e-10);
    }
    SUBCASE("x2^2 axis 2 twice") {
        auto f = from_mode(ModeField::term(0, VerticalBasis::x2(2), 1.0), 1, 4);
        auto d2 = diff(diff(f, 2), 2);
        double maxerr = 0.0;
        for (int j = 0; j <= 10; ++j)
            maxerr = std::max(maxerr, std::abs(d2.eval(0.1, j / 10.0) - 2.0));
        CHECK(maxerr < 1e-10);
    }
    SUBCASE("axis commutativity") {
        auto f = random_field(3, 10, 5, 0.4);
        auto a = diff(diff(f, 1), 2), b = diff(diff(f, 2), 1);
        CHECK(l2_norm(a - b) < 1e-10 * std::max(1.0, l2_norm(a)));
    }
}

TEST_CASE("dealiased product") {
    auto f = random_field(3, 8, 21);
    GridField one(3, 8), zero(3, 8);
    one.coeff(0, 0) = 1.0;
    CHECK(l2_norm(product(f, one) - f) < 1e-12 * l2_norm(f));
    CHECK(l2_norm(product(f, zero)) == doctest::Approx(0.0));

    // cross-check against exact mode algebra
    auto a = ModeField::term(1, VerticalBasis::cos(1), Complex{0.4, 0.2}) +
             ModeField::term(-1, VerticalBasis::cos(1), Complex{0.4, -0.2}) +
             ModeField::term(0, VerticalBasis::sin(2), 0.7);
    auto b = ModeField::term(2, VerticalBasis::sin(1), Complex{0.1, -0.3}) +
             ModeField::term(0, VerticalBasis::cos(2), 0.5);
    const int K = 8, P = 24;  // product frequencies fit
    auto ga = from_mode(a, K, P), gb = from_mode(b, K, P);
    auto gp = product(ga, gb);
    auto mp = from_mode(multiply(a, b), K, P);
    CHECK(l2_norm(gp - mp) < 1e-11 * std::max(1.0, l2_norm(mp)));
}

TEST_CASE("from_mode sampling and aliasing report") {
    CHECK(l2_norm(from_mode(ModeField::zero(), 3, 6)) == doctest::Approx(0.0));

    auto s = ModeField::term(0, VerticalBasis::sin(1), 1.0);
    auto g = from_mode(s, 2, 16);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double maxerr = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x1 = U(rng), x2 = U(rng);
        maxerr = std::max(maxerr, std::abs(g.eval(x1, x2) -
                                           std::sin(kPi * x2)));
    }
    CHECK(maxerr < 1e-12);

    AliasingReport rep;
    from_mode(ModeField::term(5, VerticalBasis::one(), 1.0), 4, 8, &rep);
    CHECK(rep.k_aliased);
    CHECK(rep.max_input_k == 5);
    CHECK(rep.sample_residual > 0.1);

    AliasingReport rep2;
    from_mode(ModeField::term(2, VerticalBasis::one(), 1.0), 4, 8, &rep2);
    CHECK_FALSE(rep2.k_aliased);
    CHECK(rep2.sample_residual < 1e-12);
}

TEST_CASE("norms: Gram vs quadrature, and mode agreement") {
    auto f = random_field(4, 10, 31);
    CHECK(l2_norm(f) ==
          doctest::Approx(l2_norm_quadrature(f)).epsilon(1e-11));

    auto s = ModeField::term(1, VerticalBasis::sin(2), Complex{0.5, 1.0});
    CHECK(l2_norm(from_mode(s, 3, 20)) ==
          doctest::Approx(l2_norm(s)).epsilon(1e-12));
}

TEST_CASE("conditioning model") {
    CHECK(conditioning_cap(16, 1e-3) >= 6);
    CHECK(conditioning_cap(32, 1e-3) >= 5);
    CHECK(conditioning_cap(32, 1e-3) <= 8);
    CHECK(diff_roundoff_estimate(16, 0) ==
          doctest::Approx(2.220446049250313e-16));

    // measured amplification stays under the model estimate
    auto s = ModeField::term(0, VerticalBasis::sin(1), 1.0);
    auto g = from_mode(s, 1, 16);
    for (int j = 1; j <= 6; ++j) g = diff(g, 2);
    const double want = std::pow(kPi, 6) / std::sqrt(2.0);  // norm of sin^{(6)}
    CHECK(std::abs(l2_norm(g) - want) / want < diff_roundoff_estimate(16, 6));
}

TEST_CASE("vector fields") {
    auto psi = ModeField::term(1, VerticalBasis::sin(1), Complex{0.2, 0.1}) +
               ModeField::term(-1, VerticalBasis::sin(1), Complex{0.2, -0.1});
    auto u = VectorModeField::from_stream_function(psi);
    VectorGridField v{from_mode(u.comp1, 4, 16), from_mode(u.comp2, 4, 16)};
    CHECK(l2_norm(v.divergence()) < 1e-10);
    CHECK(v.impermeability_defect() < 1e-12);
}

TEST_CASE("checkpoint round trip") {
    Checkpoint ck;
    ck.time = 0.125;
    ck.tau0 = 0.2;
    ck.M = 2.0;
    ck.T0 = 0.1;
    ck.v.comp1 = random_field(3, 8, 41);
    ck.v.comp2 = random_field(3, 8, 42);
    const std::string path = "ck_test.bin";
    save_checkpoint(path, ck);
    auto lk = load_checkpoint(path);
    std::remove(path.c_str());
    CHECK(lk.time == ck.time);
    CHECK(lk.tau0 == ck.tau0);
    CHECK(lk.M == ck.M);
    CHECK(lk.T0 == ck.T0);
    CHECK(l2_norm(lk.v.comp1 - ck.v.comp1) == 0.0);
    CHECK(l2_norm(lk.v.comp2 - ck.v.comp2) == 0.0);
}
