#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "torus/evolve.hpp"

using namespace torus;

namespace {

LatticePoint pt(std::initializer_list<long> e) { return LatticePoint(std::vector<long>(e)); }

GridFunction random_gridfn(std::mt19937& rng, const FrequencyBox& box, int N) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<cplx> coeffs(box.size());
    for (auto& c : coeffs) c = cplx(d(rng), d(rng));
    return GridFunction::from_coefficients(box, N, std::move(coeffs));
}

double max_coeff_dev(const GridFunction& a, const GridFunction& b) {
    double dev = 0;
    for (std::size_t i = 0; i < a.coefficients().size(); ++i)
        dev = std::max(dev, std::abs(a.coefficients()[i] - b.coefficients()[i]));
    return dev;
}

LatticeFunction coordinate_multiplier(long bound) {
    return LatticeFunction(1, bound, [](const LatticePoint& xi) {
        return cplx(double(xi[0]));
    });
}

}  // namespace

TEST_CASE("translation witness: a1 = xi propagates to u(t,x) = f(x+t)") {
    FrequencyBox box(1, 16);
    int N = box.default_grid();
    std::mt19937 rng(127);
    auto f = random_gridfn(rng, box, N);
    double t = 1.3;
    CauchyProblem P(coordinate_multiplier(60), std::nullopt, f, {0.0, t});
    auto sol = solve_reference(P);

    // coefficient form of the translation
    double dev = 0;
    for (const auto& xi : box.points())
        dev = std::max(dev, std::abs(sol.states[1].coeff(xi) -
                                     std::polar(1.0, t * double(xi[0])) * f.coeff(xi)));
    CHECK(dev < 1e-12);

    // sample form: u(t, x) = f(x + t) via direct synthesis
    for (std::size_t i = 0; i < sol.states[1].grid_total(); i += 17) {
        double x = sol.states[1].grid_point(i)[0];
        cplx expect = 0;
        for (const auto& xi : box.points())
            expect += f.coeff(xi) * std::polar(1.0, (x + t) * double(xi[0]));
        CHECK(std::abs(sol.states[1].samples()[i] - expect) < 1e-10);
    }
}

TEST_CASE("free Schroedinger flow is 2 pi periodic in time") {
    FrequencyBox box(1, 16);
    int N = box.default_grid();
    std::mt19937 rng(131);
    auto f = random_gridfn(rng, box, N);
    LatticeFunction a1(1, 60, [](const LatticePoint& xi) {
        return cplx(-double(xi[0] * xi[0]));
    });
    CauchyProblem P(a1, std::nullopt, f, {0.0, two_pi});
    auto sol = solve_reference(P);
    CHECK(max_coeff_dev(sol.states[1], f) / f.l2_norm() < 1e-10);
}

TEST_CASE("real principal symbol evolves unitarily") {
    FrequencyBox box(1, 12);
    int N = box.default_grid();
    std::mt19937 rng(137);
    auto f = random_gridfn(rng, box, N);
    LatticeFunction a1(1, 60, [](const LatticePoint& xi) {
        return cplx(xi.bracket() + 0.3 * double(xi[0]));
    });
    CauchyProblem P(a1, std::nullopt, f, {0.0, 0.7, 2.9, 11.0});
    auto sol = solve_reference(P);
    for (const auto& diag : sol.diagnostics)
        CHECK(std::abs(diag.norm - f.l2_norm()) < 1e-12);
}

TEST_CASE("complex a1 is rejected") {
    FrequencyBox box(1, 4);
    int N = 16;
    GridFunction f = GridFunction::basis(box, N, pt({1}));
    LatticeFunction bad(1, 30, [](const LatticePoint& xi) {
        return cplx(0.0, double(xi[0]));
    });
    CHECK_THROWS_AS(CauchyProblem(bad, std::nullopt, f, {0.0, 1.0}),
                    precondition_error);
}

TEST_CASE("reference solver with coupling: step control reproduces a closed form") {
    // a1 = 0, a0 = multiplication by 2 + cos x: u(t) = e^{i t (2 + cos x)} f
    FrequencyBox box(1, 12);
    int N = 64;
    auto f = GridFunction::basis(box, N, pt({0}));
    LatticeFunction zero(1, 60, [](const LatticePoint&) { return cplx(0.0); });
    auto a0 = SymbolTable::from_rule(box, N, {0, 1, 0},
                                     [](const std::vector<double>& x, const LatticePoint&) {
                                         return cplx(2.0 + std::cos(x[0]));
                                     });
    double t = 0.9;
    CauchyProblem P(zero, a0, f, {0.0, t});
    auto sol = solve_reference(P);
    const auto& got = sol.states[1].samples();
    double dev = 0;
    for (size_t i = 0; i < got.size(); ++i) {
        double x = sol.states[1].grid_point(i)[0];
        // the multiplier semigroup leaves the band eventually; compare only
        // against the band-limited projection
        cplx expect = std::polar(1.0, t * (2.0 + std::cos(x)));
        dev = std::max(dev, std::abs(got[i] - expect));
    }
    // e^{i t cos x} has super-exponentially decaying modes; K=12 suffices
    CHECK(dev < 1e-9);
}

TEST_CASE("solve_fso with a0 = 0 matches the reference exactly") {
    FrequencyBox box(1, 8);
    int N = 32;
    std::mt19937 rng(139);
    auto f = random_gridfn(rng, box, N);
    LatticeFunction a1(1, 40, [](const LatticePoint& xi) {
        return cplx(double(xi[0]));
    });
    CauchyProblem P(a1, std::nullopt, f, {0.0, 0.5, 1.0});
    auto ref = solve_reference(P);
    auto fso = solve_fso(P, 2);
    for (std::size_t k = 0; k < P.times.size(); ++k)
        CHECK(max_coeff_dev(ref.states[k], fso.states[k]) < 1e-12);
}

TEST_CASE("solve_fso at t=0 returns the datum exactly") {
    FrequencyBox box(1, 6);
    int N = 32;
    std::mt19937 rng(149);
    auto f = random_gridfn(rng, box, N);
    auto a0 = SymbolTable::from_rule(FrequencyBox(1, 32), N, {0, 1, 0},
                                     [](const std::vector<double>& x, const LatticePoint&) {
                                         return 0.1 * std::polar(1.0, x[0]);
                                     });
    LatticeFunction a1(1, 40, [](const LatticePoint& xi) {
        return cplx(double(xi[0]));
    });
    CauchyProblem P(a1, a0, f, {0.0, 0.25});
    auto sol = solve_fso(P, 2, {1e-9, 24.0, {1e-3, 0.35, 0.5}});
    CHECK(max_coeff_dev(sol.states[0], f) < 1e-14);
}

TEST_CASE("FSO error against the reference decreases in the truncation") {
    FrequencyBox box(1, 8);
    int N = 32;
    std::mt19937 rng(151);
    auto f0 = random_gridfn(rng, FrequencyBox(1, 5), N);
    GridFunction f(box, N);
    for (const auto& xi : f0.box().points()) f.set_coeff(xi, f0.coeff(xi));
    f *= 1.0 / f.l2_norm();

    LatticeFunction a1(1, 40, [](const LatticePoint& xi) {
        return cplx(double(xi[0]));
    });
    auto a0 = SymbolTable::from_rule(FrequencyBox(1, 34), N, {0, 1, 0},
                                     [](const std::vector<double>& x, const LatticePoint&) {
                                         return 0.1 * std::polar(1.0, x[0]);
                                     });
    CauchyProblem P(a1, a0, f, {0.0, 1.0});
    auto ref = solve_reference(P);
    double prev = 1e18;
    for (int M : {1, 2, 3}) {
        auto fso = solve_fso(P, M);
        GridFunction diff = fso.states[1];
        diff -= ref.states[1];
        double err = diff.l2_norm();
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 2e-2);
}

TEST_CASE("t -> 0 consistency: first-order Taylor matching with slope >= 1.9") {
    FrequencyBox box(1, 8);
    int N = 32;
    std::mt19937 rng(157);
    auto f0 = random_gridfn(rng, FrequencyBox(1, 5), N);
    GridFunction f(box, N);
    for (const auto& xi : f0.box().points()) f.set_coeff(xi, f0.coeff(xi));

    LatticeFunction a1(1, 40, [](const LatticePoint& xi) {
        return cplx(double(xi[0]));
    });
    auto a0 = SymbolTable::from_rule(box, N, {0, 1, 0},
                                     [](const std::vector<double>& x, const LatticePoint&) {
                                         return 0.2 * std::polar(1.0, x[0]);
                                     });
    std::vector<double> ts = {1e-2, 5e-3, 2.5e-3};
    CauchyProblem P(a1, a0, f, {0.0, ts[2], ts[1], ts[0]});
    auto sol = solve_reference(P);

    // u(t) ~ f + t i (a1 + a0)(X, D) f
    auto a1f = falling_derivative(f, MultiIndex({std::vector<int>{1}}), +1);
    auto a0f = apply_pdo(a0, f);
    std::vector<double> errs;
    for (double t : ts) {
        std::size_t idx = (t == ts[0]) ? 3 : (t == ts[1]) ? 2 : 1;
        GridFunction lin = f;
        GridFunction drift = a1f;
        drift += a0f;
        drift *= cplx(0, t);
        lin += drift;
        GridFunction diff = sol.states[idx];
        diff -= lin;
        errs.push_back(diff.l2_norm());
    }
    double slope = std::log(errs[0] / errs[2]) / std::log(ts[0] / ts[2]);
    CHECK(slope >= 1.9);
}

TEST_CASE("embedding pipeline: data and perturbation periodize consistently") {
    FrequencyBox box(1, 16);
    int N = 512;  // the wrapped bump needs resolution to look smooth
    auto f = EuclideanSampledFunction::gaussian({0.35}, 1.0, 8.9);
    LatticeFunction a1(1, 60, [](const LatticePoint& xi) {
        return cplx(double(xi[0]));
    });

    EuclideanPerturbation chi;
    chi.support = {{-2.0, 2.0}};
    chi.rule = [](const std::vector<double>& x, const LatticePoint&) {
        double t = x[0] / 2.0;
        if (std::abs(t) >= 1.0) return cplx(0.0);
        return cplx(std::exp(-1.0 / (1.0 - t * t)));
    };
    EmbedReport rep;
    auto P = embed_and_periodize(f, a1, chi, box, N, {0.0, 1.0}, &rep);
    CHECK(rep.smoothing_remainder_dropped);
    CHECK(rep.data_report.route_disagreement < 1e-9);

    // F_T(P f)(xi) = F_R f(xi) on the box
    for (long q = -16; q <= 16; ++q) {
        double expect = 0.35 / std::sqrt(two_pi) * std::exp(-0.5 * 0.35 * 0.35 * q * q);
        CHECK(std::abs(P.f.coeff(pt({q})) - expect) < 1e-9);
    }

    // (P a0)~ equals the shift-sum tabulation of chi
    REQUIRE(P.a0.has_value());
    for (std::size_t i = 0; i < P.a0->grid_total(); i += 5) {
        auto x = P.a0->grid_point(i);
        cplx oracle = 0;
        for (long k = -2; k <= 2; ++k) {
            std::vector<double> y = {x[0] + two_pi * double(k)};
            if (std::abs(y[0]) < 2.0) {
                double t = y[0] / 2.0;
                oracle += std::exp(-1.0 / (1.0 - t * t));
            }
        }
        CHECK(std::abs(P.a0->value(pt({3}), i) - oracle) < 1e-10);
    }

    // a0 = 0: periodization touches only the datum
    auto P0 = embed_and_periodize(f, a1, std::nullopt, box, N, {0.0, 1.0});
    CHECK(!P0.a0.has_value());
}

TEST_CASE("periodization commutes with the evolution (translation family)") {
    FrequencyBox box(1, 16);
    int N = 64;
    auto f = EuclideanSampledFunction::gaussian({0.4}, 1.0, 7.8);
    LatticeFunction a1(1, 60, [](const LatticePoint& xi) {
        return cplx(double(xi[0]));
    });
    double t = 0.8;
    auto P = embed_and_periodize(f, a1, std::nullopt, box, N, {0.0, t});
    auto evolved_torus = solve_reference(P).states[1];

    // euclidean evolution of the same problem translates: u(t, x) = f(x + t);
    // periodizing it restricts the shifted transform to the lattice
    GridFunction periodized_shift(box, N);
    for (long q = -16; q <= 16; ++q) {
        double gauss = 0.4 / std::sqrt(two_pi) * std::exp(-0.5 * 0.16 * double(q * q));
        periodized_shift.set_coeff(pt({q}), std::polar(1.0, t * double(q)) * gauss);
    }
    CHECK(max_coeff_dev(evolved_torus, periodized_shift) < 1e-9);
}
