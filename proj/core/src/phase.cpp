#include "torus/phase.hpp"

#include <cmath>
#include <limits>

#include "torus/fft.hpp"

namespace torus {

PhaseTable::PhaseTable(FrequencyBox box, int grid_size)
    : box_(box), grid_size_(grid_size) {
    grid_total_ = 1;
    for (int j = 0; j < box_.n; ++j) grid_total_ *= std::size_t(grid_size_);
    slopes_.assign(box_.size(), std::vector<double>(std::size_t(box_.n), 0.0));
    per_.assign(box_.size() * grid_total_, 0.0);
}

PhaseTable PhaseTable::linear(FrequencyBox box, int grid_size) {
    PhaseTable t(box, grid_size);
    for (std::size_t i = 0; i < box.size(); ++i) {
        auto xi = box.point(i);
        for (int j = 0; j < box.n; ++j) t.slopes_[i][std::size_t(j)] = double(xi[j]);
    }
    t.build_gradients();
    return t;
}

PhaseTable PhaseTable::with_frequency_part(
    FrequencyBox box, int grid_size,
    const std::function<double(const LatticePoint&)>& tau) {
    PhaseTable t = linear(box, grid_size);
    for (std::size_t i = 0; i < box.size(); ++i) {
        double v = tau(box.point(i));
        for (std::size_t xf = 0; xf < t.grid_total_; ++xf)
            t.per_[i * t.grid_total_ + xf] = v;
    }
    t.build_gradients();
    return t;
}

PhaseTable PhaseTable::general(
    FrequencyBox box, int grid_size,
    const std::function<std::vector<double>(const LatticePoint&)>& lambda,
    const std::function<double(const std::vector<double>&, const LatticePoint&)>& per) {
    PhaseTable t(box, grid_size);
    for (std::size_t i = 0; i < box.size(); ++i) {
        auto xi = box.point(i);
        t.slopes_[i] = lambda(xi);
        if (t.slopes_[i].size() != std::size_t(box.n))
            throw config_error("phase slope dimension mismatch");
        for (std::size_t xf = 0; xf < t.grid_total_; ++xf)
            t.per_[i * t.grid_total_ + xf] =
                per(unflatten_grid_point(box.n, grid_size, xf), xi);
    }
    t.build_gradients();
    return t;
}

void PhaseTable::build_gradients() {
    grad_per_.assign(std::size_t(box_.n), std::vector<double>(per_.size(), 0.0));
    std::vector<cplx> row(grid_total_);
    for (std::size_t i = 0; i < box_.size(); ++i) {
        for (int axis = 0; axis < box_.n; ++axis) {
            for (std::size_t xf = 0; xf < grid_total_; ++xf)
                row[xf] = per_[i * grid_total_ + xf];
            apply_x_multiplier(row.data(), box_.n, grid_size_,
                               [axis](const LatticePoint& eta) {
                                   return cplx(0.0, double(eta[axis]));
                               });
            for (std::size_t xf = 0; xf < grid_total_; ++xf)
                grad_per_[std::size_t(axis)][i * grid_total_ + xf] = row[xf].real();
        }
    }
}

double PhaseTable::value(const LatticePoint& xi, std::size_t x_flat) const {
    std::size_t i = box_.index(xi);
    auto x = unflatten_grid_point(box_.n, grid_size_, x_flat);
    double v = per_[i * grid_total_ + x_flat];
    for (int j = 0; j < box_.n; ++j) v += x[std::size_t(j)] * slopes_[i][std::size_t(j)];
    return v;
}

cplx PhaseTable::factor(const LatticePoint& xi, std::size_t x_flat) const {
    return std::polar(1.0, value(xi, x_flat));
}

std::vector<double> PhaseTable::gradient(const LatticePoint& xi,
                                         std::size_t x_flat) const {
    std::size_t i = box_.index(xi);
    std::vector<double> g = slopes_[i];
    for (int j = 0; j < box_.n; ++j)
        g[std::size_t(j)] += grad_per_[std::size_t(j)][i * grid_total_ + x_flat];
    return g;
}

const std::vector<double>& PhaseTable::slope(const LatticePoint& xi) const {
    return slopes_[box_.index(xi)];
}

double PhaseTable::periodic_part(const LatticePoint& xi, std::size_t x_flat) const {
    return per_[box_.index(xi) * grid_total_ + x_flat];
}

double PhaseTable::periodicity_defect() const {
    // |e^{i 2 pi l} - 1| = 2 |sin(pi (l - round l))|: exactly zero on integers
    double defect = 0;
    for (const auto& s : slopes_)
        for (double l : s)
            defect = std::max(defect, 2.0 * std::abs(std::sin(pi * (l - std::round(l)))));
    return defect;
}

PhaseReport check_phase(const PhaseTable& phi, int alpha_max) {
    PhaseReport rep;
    rep.periodicity_defect = phi.periodicity_defect();

    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& xi : phi.box().points()) {
        for (std::size_t xf = 0; xf < phi.grid_total(); ++xf) {
            auto g = phi.gradient(xi, xf);
            double g2 = 0;
            for (double c : g) g2 += c * c;
            double ratio = std::sqrt(1.0 + g2) / xi.bracket();
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    rep.comparability_lower = lo;
    rep.comparability_upper = hi;

    // sup |d_x^alpha tri_xi^{e_j} phi|: the linear part contributes
    // x.(lambda(xi+e_j)-lambda(xi)) handled analytically, the periodic part
    // spectrally
    if (phi.box().margin < 1)
        throw box_error("phase box needs margin >= 1 for xi-differences");
    auto inner = phi.box().with_margin(phi.box().margin - 1);
    std::vector<cplx> row(phi.grid_total());
    for (int axis = 0; axis < phi.dim(); ++axis) {
        MultiIndex ej = MultiIndex::unit(phi.dim(), axis);
        for (const auto& alpha : multi_indices_below(phi.dim(), alpha_max + 1)) {
            double worst = 0;
            for (const auto& xi : inner.points()) {
                auto xi2 = xi.shifted(ej);
                std::vector<double> dl(std::size_t(phi.dim()));
                for (int j = 0; j < phi.dim(); ++j)
                    dl[std::size_t(j)] =
                        phi.slope(xi2)[std::size_t(j)] - phi.slope(xi)[std::size_t(j)];
                for (std::size_t xf = 0; xf < phi.grid_total(); ++xf)
                    row[xf] = phi.periodic_part(xi2, xf) - phi.periodic_part(xi, xf);
                if (alpha.order() > 0)
                    apply_x_multiplier(row.data(), phi.dim(), phi.grid_size(),
                                       [&alpha](const LatticePoint& eta) {
                                           cplx m = 1.0;
                                           for (int j = 0; j < eta.dim(); ++j)
                                               for (int k = 0; k < alpha[j]; ++k)
                                                   m *= cplx(0.0, double(eta[j]));
                                           return m;
                                       });
                for (std::size_t xf = 0; xf < phi.grid_total(); ++xf) {
                    double lin = 0;
                    auto x = unflatten_grid_point(phi.dim(), phi.grid_size(), xf);
                    if (alpha.order() == 0) {
                        for (int j = 0; j < phi.dim(); ++j)
                            lin += x[std::size_t(j)] * dl[std::size_t(j)];
                    } else if (alpha.order() == 1) {
                        for (int j = 0; j < phi.dim(); ++j)
                            if (alpha[j] == 1) lin = dl[std::size_t(j)];
                    }
                    worst = std::max(worst, std::abs(row[xf] + lin));
                }
            }
            rep.difference_bounds.push_back({alpha, axis, worst});
        }
    }
    return rep;
}

PsiCorrection::PsiCorrection(const PhaseTable& phi)
    : box_(phi.box()), grid_size_(phi.grid_size()), grid_total_(phi.grid_total()) {
    values_.assign(box_.size() * grid_total_ * grid_total_, 0.0);
    for (std::size_t i = 0; i < box_.size(); ++i) {
        auto xi = box_.point(i);
        for (std::size_t xf = 0; xf < grid_total_; ++xf) {
            double phx = phi.value(xi, xf);
            auto g = phi.gradient(xi, xf);
            auto x = unflatten_grid_point(box_.n, grid_size_, xf);
            for (std::size_t yf = 0; yf < grid_total_; ++yf) {
                double phy = phi.value(xi, yf);
                auto y = unflatten_grid_point(box_.n, grid_size_, yf);
                double corr = 0;
                for (int j = 0; j < box_.n; ++j)
                    corr += (x[std::size_t(j)] - y[std::size_t(j)]) * g[std::size_t(j)];
                values_[(i * grid_total_ + xf) * grid_total_ + yf] = phy - phx + corr;
            }
            // grad_y Psi |_{y=x} = grad phi(x) - grad phi(x)
            auto gy = phi.gradient(xi, xf);
            double dev = 0;
            for (int j = 0; j < box_.n; ++j)
                dev = std::max(dev, std::abs(gy[std::size_t(j)] - g[std::size_t(j)]));
            grad_defect_ = std::max(grad_defect_, dev);
        }
    }
}

double PsiCorrection::value(const LatticePoint& xi, std::size_t x_flat,
                            std::size_t y_flat) const {
    return values_[(box_.index(xi) * grid_total_ + x_flat) * grid_total_ + y_flat];
}

double PsiCorrection::diagonal_defect() const {
    double dev = 0;
    for (std::size_t i = 0; i < box_.size(); ++i)
        for (std::size_t xf = 0; xf < grid_total_; ++xf)
            dev = std::max(dev,
                           std::abs(values_[(i * grid_total_ + xf) * grid_total_ + xf]));
    return dev;
}

double PsiCorrection::gradient_diagonal_defect() const { return grad_defect_; }

}  // namespace torus
