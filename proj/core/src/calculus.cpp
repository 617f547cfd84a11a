#include "torus/calculus.hpp"

#include <cmath>
#include <limits>

namespace torus {

void AsymptoticSeries::push(double order, SymbolTable table) {
    if (!terms.empty()) {
        if (order >= terms.back().order)
            throw config_error("series term orders must strictly decrease");
        if (terms.back().table.box().K != table.box().K ||
            terms.back().table.grid_size() != table.grid_size())
            throw config_error("series terms must share box and grid");
    }
    terms.push_back({order, std::move(table)});
}

const SymbolTable* AsymptoticSeries::at_order(double order) const {
    for (const auto& t : terms)
        if (std::abs(t.order - order) < 1e-12) return &t.table;
    return nullptr;
}

SymbolTable AsymptoticSeries::sum() const {
    if (terms.empty()) throw config_error("empty series");
    int margin = terms[0].table.box().margin;
    for (const auto& t : terms) margin = std::min(margin, t.table.box().margin);
    auto box = terms[0].table.box().with_margin(margin);
    SymbolTable acc = terms[0].table.restricted(box);
    acc.order() = terms[0].table.order();
    for (std::size_t i = 1; i < terms.size(); ++i)
        acc += terms[i].table.restricted(box);
    return acc;
}

SymbolTable compose_symbols(const SymbolTable& sigma_a, const SymbolTable& sigma_b,
                            int truncation) {
    if (truncation < 1) throw config_error("truncation must be >= 1");
    if (sigma_a.dim() != sigma_b.dim() || sigma_a.box().K != sigma_b.box().K ||
        sigma_a.grid_size() != sigma_b.grid_size())
        throw config_error("composed symbols must share box and grid");
    if (sigma_a.box().margin < truncation - 1)
        throw box_error("left symbol margin too small for the truncation");
    int out_margin =
        std::min(sigma_a.box().margin - (truncation - 1), sigma_b.box().margin);
    auto out_box = sigma_a.box().with_margin(out_margin);
    SymbolOrder ord{sigma_a.order().m + sigma_b.order().m,
                    std::min(sigma_a.order().rho, sigma_b.order().rho),
                    std::max(sigma_a.order().delta, sigma_b.order().delta)};
    SymbolTable acc(out_box, sigma_a.grid_size(), ord);
    for (const auto& alpha : multi_indices_below(sigma_a.dim(), truncation)) {
        auto da = sigma_a.forward_xi_difference(alpha).restricted(out_box);
        auto db = sigma_b.falling_x_derivative(alpha).restricted(out_box);
        auto term = SymbolTable::product(da, db);
        term *= 1.0 / double(alpha.factorial());
        acc += term;
    }
    return acc;
}

SymbolTable adjoint_symbol(const SymbolTable& sigma_a, int truncation) {
    if (truncation < 1) throw config_error("truncation must be >= 1");
    if (sigma_a.box().margin < truncation - 1)
        throw box_error("symbol margin too small for the truncation");
    auto out_box = sigma_a.box().with_margin(sigma_a.box().margin - (truncation - 1));
    SymbolTable acc(out_box, sigma_a.grid_size(), sigma_a.order());
    auto conj = sigma_a.conjugated();
    for (const auto& alpha : multi_indices_below(sigma_a.dim(), truncation)) {
        auto term =
            conj.falling_x_derivative(alpha).forward_xi_difference(alpha).restricted(
                out_box);
        term *= 1.0 / double(alpha.factorial());
        acc += term;
    }
    return acc;
}

SymbolTable amplitude_to_symbol(const AmplitudeTable& a, int truncation) {
    if (truncation < 1) throw config_error("truncation must be >= 1");
    if (a.box().margin < truncation - 1)
        throw box_error("amplitude margin too small for the truncation");
    auto out_box = a.box().with_margin(a.box().margin - (truncation - 1));
    SymbolTable acc(out_box, a.grid_size(), a.order());
    for (const auto& alpha : multi_indices_below(a.dim(), truncation)) {
        auto term = a.falling_y_derivative(alpha)
                        .forward_xi_difference(alpha)
                        .diagonal(a.order())
                        .restricted(out_box);
        term *= 1.0 / double(alpha.factorial());
        acc += term;
    }
    return acc;
}

namespace {

double smooth_step(double t) {
    // 0 for t<=0, 1 for t>=1, C^inf in between
    auto half = [](double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; };
    double a = half(t), b = half(1.0 - t);
    return a / (a + b);
}

}  // namespace

AsymptoticSeries parametrix(const AsymptoticSeries& a_series, int num_terms,
                            const EllipticityWitness& witness) {
    if (a_series.terms.empty()) throw config_error("empty operator series");
    if (num_terms < 1) throw config_error("need at least one parametrix term");
    const SymbolTable& a0 = a_series.terms[0].table;
    const double m = a_series.terms[0].order;

    // ellipticity witness on the stored box
    for (const auto& xi : a0.box().points()) {
        if (xi.norm() < double(witness.N0)) continue;
        double floor = witness.C0 * std::pow(xi.bracket(), m) * (1.0 - 1e-12);
        const cplx* row = a0.row(xi);
        for (std::size_t i = 0; i < a0.grid_total(); ++i)
            if (std::abs(row[i]) < floor)
                throw ellipticity_error("ellipticity witness fails on the box",
                                        xi.entries(),
                                        unflatten_grid_point(a0.dim(), a0.grid_size(),
                                                             i)[0]);
    }

    // chi / sigma_{A0}: smooth cut, identically 1 from N0+2 outward
    auto cut_inverse = [&](const SymbolTable& src) {
        SymbolTable out(src.box(), src.grid_size(), SymbolOrder{-m, 1, 0});
        for (const auto& xi : src.box().points()) {
            double chi = 1.0;
            if (witness.N0 > 0)
                chi = smooth_step((xi.norm() - double(witness.N0)) / 2.0);
            const cplx* s = src.row(xi);
            cplx* d = out.row(xi);
            for (std::size_t i = 0; i < src.grid_total(); ++i)
                d[i] = (chi == 0.0) ? cplx(0) : chi / s[i];
        }
        return out;
    };

    AsymptoticSeries b;
    b.push(-m, cut_inverse(a0));
    for (int N = 1; N < num_terms; ++N) {
        int out_margin = a0.box().margin - N;
        if (out_margin < 0)
            throw box_error("operator series margin too small for the parametrix depth");
        auto out_box = a0.box().with_margin(out_margin);
        SymbolTable rhs(out_box, a0.grid_size(), SymbolOrder{-m - N, 1, 0});
        for (int k = 0; k < N; ++k) {
            const SymbolTable& bk = b.terms[std::size_t(k)].table;
            for (int j = 0; j <= N - k; ++j) {
                const SymbolTable* aj = a_series.at_order(m - double(j));
                if (!aj) continue;
                for (const auto& gamma :
                     multi_indices_of_order(a0.dim(), N - j - k)) {
                    auto da = aj->forward_xi_difference(gamma).restricted(out_box);
                    auto db = bk.falling_x_derivative(gamma).restricted(out_box);
                    auto term = SymbolTable::product(da, db);
                    term *= 1.0 / double(gamma.factorial());
                    rhs += term;
                }
            }
        }
        auto inv = cut_inverse(a0).restricted(out_box);
        auto bn = SymbolTable::product(inv, rhs);
        bn *= -1.0;
        bn.order() = SymbolOrder{-m - N, 1, 0};
        b.push(-m - N, std::move(bn));
    }
    return b;
}

ShellSpec default_shells(int K) {
    double base = std::floor(double(K) / 8.0);
    if (base < 1) throw config_error("box too small for shell fits");
    return ShellSpec{{base, 2 * base, 4 * base, 8 * base}};
}

DecayFit fit_shell_decay(const std::vector<double>& radii,
                         const std::vector<double>& values) {
    if (radii.size() < 4) throw config_error("need at least 4 shells");
    DecayFit fit;
    fit.shell_radii = radii;
    fit.shell_values = values;
    bool all_zero = true;
    for (double v : values)
        if (v > 0) all_zero = false;
    if (all_zero) throw precondition_error("shell data is identically zero");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] == 0.0) {  // content vanishes: super-algebraic decay
            fit.slope = -std::numeric_limits<double>::infinity();
            return fit;
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = radii.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(std::sqrt(1.0 + radii[i] * radii[i]));
        ys[i] = std::log(values[i]);
        sx += xs[i], sy += ys[i], sxx += xs[i] * xs[i], sxy += xs[i] * ys[i];
    }
    double denom = double(n) * sxx - sx * sx;
    fit.slope = (double(n) * sxy - sx * sy) / denom;
    double intercept = (sy - fit.slope * sx) / double(n);
    for (std::size_t i = 0; i < n; ++i)
        fit.residual = std::max(fit.residual,
                                std::abs(ys[i] - (fit.slope * xs[i] + intercept)));
    return fit;
}

namespace {

template <typename Magnitude>
DecayFit fit_over_box(const FrequencyBox& box, const ShellSpec& shells,
                      Magnitude&& mag) {
    const auto& radii = shells.radii;
    if (radii.size() < 4) throw config_error("need at least 4 shells");
    std::vector<double> values(radii.size(), 0.0);
    for (const auto& xi : box.points()) {
        double r = xi.norm();
        for (std::size_t s = 0; s < radii.size(); ++s) {
            double upper = (s + 1 < radii.size()) ? radii[s + 1]
                                                  : std::nextafter(
                                                        std::numeric_limits<double>::max(), 0.0);
            if (r >= radii[s] && r < upper) {
                values[s] = std::max(values[s], mag(xi));
                break;
            }
        }
    }
    return fit_shell_decay(radii, values);
}

}  // namespace

DecayFit fit_decay_order(const SymbolTable& s, const ShellSpec& shells) {
    return fit_over_box(s.box(), shells, [&](const LatticePoint& xi) {
        const cplx* row = s.row(xi);
        double m = 0;
        for (std::size_t i = 0; i < s.grid_total(); ++i)
            m = std::max(m, std::abs(row[i]));
        return m;
    });
}

DecayFit fit_decay_order(const GridFunction& u, const ShellSpec& shells) {
    return fit_over_box(u.box(), shells,
                        [&](const LatticePoint& xi) { return std::abs(u.coeff(xi)); });
}

DecayFit fit_decay_order(const LatticeFunction& s, const FrequencyBox& box,
                         const ShellSpec& shells) {
    return fit_over_box(box, shells,
                        [&](const LatticePoint& xi) { return std::abs(s(xi)); });
}

}  // namespace torus
