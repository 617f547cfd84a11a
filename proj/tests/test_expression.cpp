#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torus/expression.hpp"

using namespace torus;

TEST_CASE("basic expressions") {
    auto e1 = Expression::parse("xi1");
    CHECK(e1.eval({0.0}, {7.0}).real() == 7.0);
    CHECK(e1.depends_on_xi());
    CHECK(!e1.depends_on_x());

    auto e2 = Expression::parse("ang(xi)^2");
    CHECK(e2.eval({0.0}, {3.0}).real() == doctest::Approx(10.0));
    CHECK(e2.eval({0.0}, {3.0, 4.0}).real() == doctest::Approx(26.0));

    auto e3 = Expression::parse("exp(i*x1)*xi1");
    cplx v = e3.eval({0.5}, {2.0});
    CHECK(v.real() == doctest::Approx(2.0 * std::cos(0.5)));
    CHECK(v.imag() == doctest::Approx(2.0 * std::sin(0.5)));

    auto e4 = Expression::parse("1 + 2*cos(x1) - xi2/2");
    CHECK(e4.eval({pi, 0.0}, {0.0, 6.0}).real() == doctest::Approx(1.0 - 2.0 - 3.0));

    auto e5 = Expression::parse("2^3 + t");
    CHECK(e5.eval({}, {}, 1.5).real() == doctest::Approx(9.5));
    CHECK(e5.depends_on_t());
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(Expression::parse("xi1 + "), parse_error);
    CHECK_THROWS_AS(Expression::parse("foo(x1)"), parse_error);
    CHECK_THROWS_AS(Expression::parse("ang(x1)"), parse_error);
    CHECK_THROWS_AS(Expression::parse("x1 x2"), parse_error);
    try {
        Expression::parse("1 + $");
    } catch (const parse_error& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("tabulated expression symbol matches a hand-built table") {
    FrequencyBox box(1, 6, 1);
    int N = 32;
    auto e = Expression::parse("exp(i*x1)*xi1");
    auto tab = symbol_from_expression(e, box, N, {1, 1, 0});
    auto hand = SymbolTable::from_rule(box, N, {1, 1, 0},
                                       [](const std::vector<double>& x, const LatticePoint& xi) {
                                           return std::polar(1.0, x[0]) * double(xi[0]);
                                       });
    for (const auto& xi : box.points())
        for (std::size_t i = 0; i < tab.grid_total(); ++i)
            CHECK(std::abs(tab.value(xi, i) - hand.value(xi, i)) < 1e-15);
}

TEST_CASE("lattice and grid builders") {
    auto a1 = lattice_from_expression(Expression::parse("xi1^2"), 1, 10);
    CHECK(a1(LatticePoint(std::vector<long>{-3})).real() == 9.0);

    FrequencyBox box(1, 4, 0);
    auto u = grid_function_from_expression(Expression::parse("exp(i*3*x1)"), box, 16);
    CHECK(std::abs(u.coeff(LatticePoint(std::vector<long>{3})) - 1.0) < 1e-13);
}
