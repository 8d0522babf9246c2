#include <doctest.h>

#include <random>
#include <stdexcept>

#include "fracplanar/examples.hpp"
#include "fracplanar/system.hpp"
#include "fracplanar/types.hpp"

using namespace fracplanar;

TEST_CASE("FracOrders validates its range") {
    CHECK_THROWS_AS(FracOrders(0.0, 0.5), OrdersOutOfRange);
    CHECK_THROWS_AS(FracOrders(-0.1, 0.5), OrdersOutOfRange);
    CHECK_THROWS_AS(FracOrders(0.5, 1.1), OrdersOutOfRange);
    CHECK_THROWS_AS(FracOrders(0.6, 0.5), OrdersOutOfRange);
    CHECK_THROWS_AS(FracOrders(0.5, 0.5), EqualOrdersWithoutFlag);

    const FracOrders equal(0.5, 0.5, true);
    CHECK(equal.equal_orders());

    const FracOrders orders(1.0 / 3.0, 0.5);
    CHECK(orders.nu() == doctest::Approx(1.0 / 3.0));
    CHECK(orders.l() == doctest::Approx(5.0 / 6.0));
    CHECK_FALSE(orders.equal_orders());
}

TEST_CASE("Vec2 and Mat2 arithmetic") {
    const Vec2 u{1.0, -2.0};
    const Vec2 v{0.5, 3.0};
    CHECK((u + v).x1 == 1.5);
    CHECK((u - v).x2 == -5.0);
    CHECK((2.0 * u).x2 == -4.0);
    CHECK(u.norm_max() == 2.0);

    const Mat2 A{0.0, 0.25, -2.0, 1.0};
    CHECK(A.det() == doctest::Approx(0.5));
    const Vec2 w = A * Vec2{1.0, 2.0};
    CHECK(w.x1 == doctest::Approx(0.5));
    CHECK(w.x2 == doctest::Approx(0.0));
}

TEST_CASE("char_coeffs reads the matrix as (A11, A22, det A)") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double a = dist(rng), b = dist(rng);
        PlanarSystem sys{FracOrders(0.3, 0.4), Mat2{a, 0.0, 0.0, b}, Forcing::none(), {}};
        const CharTriple tr = char_coeffs(sys);
        CHECK(tr.a == a);
        CHECK(tr.b == b);
        CHECK(tr.c == doctest::Approx(a * b));
    }
    PlanarSystem ex1{FracOrders(1.0 / 3.0, 0.5), Mat2{0.0, 0.25, -2.0, 1.0}, Forcing::paper(), {}};
    const CharTriple tr = char_coeffs(ex1);
    CHECK(tr.a == 0.0);
    CHECK(tr.b == 1.0);
    CHECK(tr.c == doctest::Approx(0.5));
}

TEST_CASE("paper forcing: continuous, bounded by one, exact power tail") {
    CHECK(paper_forcing(1, 0.0) == 1.0);
    CHECK(paper_forcing(2, 0.5) == 1.0);
    CHECK(paper_forcing(1, 1.0) == 1.0);
    CHECK(paper_forcing(1, 1.0 - 1e-12) == 1.0);
    for (double t : {1.0, 2.5, 10.0, 1e3}) {
        CHECK(std::pow(t, 2.0) * paper_forcing(1, t) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::pow(t, 4.0) * paper_forcing(2, t) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (double t = 0.0; t < 20.0; t += 0.37) {
        CHECK(paper_forcing(1, t) <= 1.0);
        CHECK(paper_forcing(2, t) <= 1.0);
        CHECK(paper_forcing(2, t) >= 0.0);
    }
}

TEST_CASE("table forcing interpolates and clamps") {
    const Forcing f = Forcing::table({{0.0, 1.0, -1.0}, {2.0, 3.0, 1.0}});
    CHECK(f.present());
    CHECK(f(1.0).x1 == doctest::Approx(2.0));
    CHECK(f(1.0).x2 == doctest::Approx(0.0));
    CHECK(f(-5.0).x1 == doctest::Approx(1.0));  // clamped left
    CHECK(f(9.0).x2 == doctest::Approx(1.0));   // clamped right

    CHECK_THROWS_AS(Forcing::table({}), ValidationError);
    CHECK_THROWS_AS(Forcing::table({{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}), ValidationError);
}

TEST_CASE("polynomial nonlinearity: eval, jacobian, lipschitz bound") {
    // f1 = x1^2 x2^2, f2 = x1^2 + x2^2, the shape used by the even examples
    const Nonlinearity fnl({{1.0, 2, 2}}, {{1.0, 2, 0}, {1.0, 0, 2}});
    const Vec2 x{2.0, -1.0};
    const Vec2 y = fnl.eval(x);
    CHECK(y.x1 == doctest::Approx(4.0));
    CHECK(y.x2 == doctest::Approx(5.0));

    const Mat2 J = fnl.jacobian(x);
    CHECK(J.a11 == doctest::Approx(2.0 * 2.0 * 1.0));   // 2 x1 x2^2
    CHECK(J.a12 == doctest::Approx(2.0 * 4.0 * -1.0));  // 2 x1^2 x2
    CHECK(J.a21 == doctest::Approx(4.0));               // 2 x1
    CHECK(J.a22 == doctest::Approx(-2.0));              // 2 x2

    // l_f(r) = max(4 r^3, 4 r)
    CHECK(fnl.lipschitz_bound(0.5) == doctest::Approx(2.0));
    CHECK(fnl.lipschitz_bound(2.0) == doctest::Approx(32.0));
    CHECK(fnl.lipschitz_bound(0.0) == 0.0);
}

TEST_CASE("validate rejects ill-posed systems and normalizes terms") {
    const FracOrders orders(0.3, 0.4);
    const Mat2 A{-1.0, 0.0, 0.0, -1.0};

    // forcing and nonlinearity together are ambiguous
    PlanarSystem both{orders, A, Forcing::paper(), Nonlinearity({{1.0, 2, 0}}, {})};
    CHECK_THROWS_AS(validate(both), ValidationError);

    // constant or linear terms break the Lipschitz-at-zero requirement
    PlanarSystem linear_term{orders, A, Forcing::none(), Nonlinearity({{1.0, 1, 0}}, {})};
    CHECK_THROWS_AS(validate(linear_term), NonlinearityViolatesLipschitzAtZero);
    PlanarSystem const_term{orders, A, Forcing::none(), Nonlinearity({}, {{2.0, 0, 0}})};
    CHECK_THROWS_AS(validate(const_term), NonlinearityViolatesLipschitzAtZero);

    // duplicate power pairs merge, zero coefficients drop
    PlanarSystem dup{orders, A, Forcing::none(),
                     Nonlinearity({{1.0, 2, 0}, {2.0, 2, 0}, {0.0, 3, 3}}, {})};
    const PlanarSystem norm = validate(dup);
    CHECK(norm.fnl.component(1).size() == 1);
    CHECK(norm.fnl.eval({2.0, 0.0}).x1 == doctest::Approx(12.0));

    PlanarSystem bad_entry{orders, Mat2{1.0, std::nan(""), 0.0, 1.0}, Forcing::none(), {}};
    CHECK_THROWS_AS(validate(bad_entry), ValidationError);
}

TEST_CASE("trajectory time grid") {
    Trajectory traj;
    traj.t0 = 0.0;
    traj.h = 0.25;
    traj.samples = {{0, 0}, {1, 1}, {2, 2}};
    CHECK(traj.size() == 3);
    CHECK(traj.t(2) == doctest::Approx(0.5));
}

TEST_CASE("built-in examples construct and carry the documented initial data") {
    for (int n = 1; n <= 8; ++n) {
        const ExampleSpec ex = paper_example(n);
        CHECK_NOTHROW(validate(ex.system));
        CHECK(ex.nu == doctest::Approx(ex.system.orders.alpha1()));
        const bool linear = (n % 2 == 1);
        CHECK(ex.system.is_linear() == linear);
        if (linear) {
            CHECK(ex.system.forcing.present());
            CHECK(ex.x0.x1 == 1.0);
            CHECK(ex.x0.x2 == 2.0);
        } else {
            CHECK_FALSE(ex.system.forcing.present());
            CHECK(ex.x0.x1 == doctest::Approx(0.1));
            CHECK(ex.x0.x2 == doctest::Approx(-0.2));
        }
    }
    const ExampleSpec ex2 = paper_example(2);
    REQUIRE(ex2.x0_alt.has_value());
    CHECK(ex2.x0_alt->x1 == 1.0);
    CHECK(ex2.x0_alt->x2 == -1.0);
    CHECK_FALSE(paper_example(1).x0_alt.has_value());

    CHECK_THROWS_AS(paper_example(0), std::out_of_range);
    CHECK_THROWS_AS(paper_example(9), std::out_of_range);
}
