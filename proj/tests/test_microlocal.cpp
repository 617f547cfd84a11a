#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "torus/microlocal.hpp"
#include "torus/quantize.hpp"

using namespace torus;

namespace {

LatticePoint pt(std::initializer_list<long> e) { return LatticePoint(std::vector<long>(e)); }

// eight 45-degree-spaced cones in the plane, half-angle 20 degrees
std::vector<DiscreteCone> compass_cones(double r0 = 2.0) {
    std::vector<DiscreteCone> cones;
    for (int k = 0; k < 8; ++k) {
        double ang = two_pi * double(k) / 8.0;
        cones.push_back({{std::cos(ang), std::sin(ang)}, 20.0 * pi / 180.0, r0});
    }
    return cones;
}

std::vector<Localizer> cell_localizers(const FrequencyBox& box, int N) {
    std::vector<Localizer> cells;
    for (double cx : {0.0, pi})
        for (double cy : {0.0, pi})
            cells.push_back(make_localizer(box, N, {cx, cy}));
    return cells;
}

// band-limited sawtooth profile in x_1: coefficients 1/(i xi_1), xi_2 = 0
GridFunction sawtooth_x1(const FrequencyBox& box, int N) {
    GridFunction u(box, N);
    for (long q = -box.K; q <= box.K; ++q)
        if (q != 0) u.set_coeff(pt({q, 0}), 1.0 / cplx(0.0, double(q)));
    return u;
}

}  // namespace

TEST_CASE("trig polynomial raises no flags") {
    FrequencyBox box(2, 16);
    int N = box.default_grid();
    auto u = GridFunction::from_rule(box, N, [](const std::vector<double>& x) {
        return cplx(std::cos(x[0]) + 0.5 * std::sin(2.0 * x[1]));
    });
    auto rep = wavefront_detect(u, cell_localizers(box, N), compass_cones());
    for (const auto& e : rep.entries) CHECK(!e.flagged);
}

TEST_CASE("delta-like data flags every cone at the origin cell") {
    FrequencyBox box(2, 16);
    int N = box.default_grid();
    GridFunction u(box, N);
    double w = std::pow(two_pi, -2.0);
    for (const auto& xi : box.points()) u.set_coeff(xi, w);
    auto cells = cell_localizers(box, N);
    auto rep = wavefront_detect(u, cells, compass_cones());
    // cell 0 is centered at the origin, where the delta sits
    for (std::size_t cone = 0; cone < 8; ++cone) CHECK(rep.is_flagged(0, cone));
}

TEST_CASE("sawtooth in x_1 flags exactly the cones meeting +-e_1") {
    FrequencyBox box(2, 16);
    int N = box.default_grid();
    auto u = sawtooth_x1(box, N);
    auto cones = compass_cones();
    auto rep = wavefront_detect(u, cell_localizers(box, N), cones);
    std::vector<bool> cone_flagged(cones.size(), false);
    for (const auto& e : rep.entries)
        if (e.flagged) cone_flagged[e.cone_index] = true;
    for (std::size_t ci = 0; ci < cones.size(); ++ci) {
        bool meets_e1 = cones[ci].contains_direction({1.0, 0.0}) ||
                        cones[ci].contains_direction({-1.0, 0.0});
        CHECK(cone_flagged[ci] == meets_e1);
    }
}

TEST_CASE("identity operator produces identical reports") {
    FrequencyBox box(2, 16);
    int N = box.default_grid();
    auto u = sawtooth_x1(box, N);
    auto ones = SymbolTable::from_rule(box, N, {0, 1, 0},
                                       [](const std::vector<double>&, const LatticePoint&) {
                                           return cplx(1.0);
                                       });
    auto rep = operator_wf_containment(ones, u, cell_localizers(box, N),
                                       compass_cones());
    CHECK(rep.new_flags.empty());
    REQUIRE(rep.input.entries.size() == rep.output.entries.size());
    for (std::size_t i = 0; i < rep.input.entries.size(); ++i)
        CHECK(rep.input.entries[i].flagged == rep.output.entries[i].flagged);
}

TEST_CASE("smoothing-like symbol removes flags, adds none") {
    FrequencyBox box(2, 16);
    int N = box.default_grid();
    auto u = sawtooth_x1(box, N);
    auto smoothing = SymbolTable::from_rule(box, N, {-8, 1, 0},
                                            [](const std::vector<double>&, const LatticePoint& xi) {
                                                return cplx(std::pow(xi.bracket(), -8.0));
                                            });
    auto rep = operator_wf_containment(smoothing, u, cell_localizers(box, N),
                                       compass_cones());
    CHECK(rep.new_flags.empty());
}

TEST_CASE("modulation by e^{i x_1} adds no flags on the sawtooth") {
    FrequencyBox box(2, 16);
    int N = box.default_grid();
    auto u = sawtooth_x1(box, N);
    auto wave = SymbolTable::from_rule(box, N, {0, 1, 0},
                                       [](const std::vector<double>& x, const LatticePoint&) {
                                           return std::polar(1.0, x[0]);
                                       });
    auto rep = operator_wf_containment(wave, u, cell_localizers(box, N),
                                       compass_cones());
    CHECK(rep.new_flags.empty());
}

TEST_CASE("containment over random order-zero symbols") {
    FrequencyBox box(2, 16);
    int N = box.default_grid();
    auto u = sawtooth_x1(box, N);
    auto cells = cell_localizers(box, N);
    auto cones = compass_cones();
    std::mt19937 rng(163);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int rep_i = 0; rep_i < 10; ++rep_i) {
        cplx c0(d(rng), d(rng)), c1(d(rng), d(rng)), c2(d(rng), d(rng));
        auto a = SymbolTable::from_rule(box, N, {0, 1, 0},
                                        [&](const std::vector<double>& x, const LatticePoint& xi) {
                                            cplx g = c0 + c1 * std::polar(1.0, x[0]) +
                                                     c2 * std::polar(1.0, -x[1]);
                                            return g * (1.0 + 0.2 / xi.bracket());
                                        });
        auto rep = operator_wf_containment(a, u, cells, cones);
        CHECK(rep.new_flags.empty());
    }
}

TEST_CASE("localization invariance under a nonvanishing multiplier") {
    FrequencyBox box(2, 16);
    int N = box.default_grid();
    auto u = sawtooth_x1(box, N);
    auto cells = cell_localizers(box, N);
    auto cones = compass_cones();
    auto base = wavefront_detect(u, cells, cones);

    auto phi = GridFunction::from_rule(box, N, [](const std::vector<double>& x) {
        return cplx(2.0 + std::cos(x[0]));
    });
    auto modulated = pointwise_product(phi, u);
    auto rep = wavefront_detect(modulated, cells, cones);
    REQUIRE(rep.entries.size() == base.entries.size());
    for (std::size_t i = 0; i < rep.entries.size(); ++i)
        CHECK(rep.entries[i].flagged == base.entries[i].flagged);
}

TEST_CASE("empty cone is rejected") {
    FrequencyBox box(2, 8);
    int N = box.default_grid();
    auto u = sawtooth_x1(box, N);
    DiscreteCone tiny{{1.0, 0.0}, 0.001, 1000.0};
    CHECK_THROWS_AS(wavefront_detect(u, cell_localizers(box, N), {tiny}),
                    config_error);
}
