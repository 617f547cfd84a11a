#include "torus/extension.hpp"

#include <cmath>

namespace torus {

EuclideanSymbol::EuclideanSymbol(
    int n, SymbolOrder order,
    std::function<cplx(const std::vector<double>&, const std::vector<double>&)> rule)
    : provenance_(Provenance::analytic), n_(n), order_(order), rule_(std::move(rule)) {}

cplx EuclideanSymbol::eval(const std::vector<double>& x,
                           const std::vector<double>& xi) const {
    if (provenance_ != Provenance::analytic)
        throw config_error("extended symbols evaluate on the source grid only");
    return rule_(x, xi);
}

cplx EuclideanSymbol::eval_grid(std::size_t x_flat, int grid_size,
                                const std::vector<double>& xi) const {
    if (static_cast<int>(xi.size()) != n_) throw config_error("dimension mismatch");
    if (provenance_ == Provenance::analytic)
        return rule_(unflatten_grid_point(n_, grid_size, x_flat), xi);

    if (grid_size != table_->grid_size())
        throw config_error("extended symbol evaluated on a foreign grid");
    const auto& box = table_->box();
    double H = kernel_->cutoff();
    std::vector<long> lo(n_), hi(n_);
    for (int j = 0; j < n_; ++j) {
        lo[j] = static_cast<long>(std::ceil(xi[j] - H));
        hi[j] = static_cast<long>(std::floor(xi[j] + H));
        if (lo[j] < -box.ext() || hi[j] > box.ext())
            throw box_error("extension evaluated too close to the box boundary");
    }
    std::vector<long> eta(lo);
    cplx acc = 0;
    while (true) {
        double w = 1.0;
        for (int j = 0; j < n_; ++j) w *= kernel_->f_hat_1d(xi[j] - double(eta[j]));
        if (w != 0.0)
            acc += w * table_->value(LatticePoint(eta), x_flat);
        int j = n_ - 1;
        while (j >= 0 && eta[j] == hi[j]) eta[j] = lo[j], --j;
        if (j < 0) break;
        ++eta[j];
    }
    return acc;
}

EuclideanSymbol extend_symbol(const SymbolTable& table,
                              std::shared_ptr<const ThetaKernel> kernel) {
    if (kernel->dim() != table.dim())
        throw config_error("kernel/table dimension mismatch");
    EuclideanSymbol s;
    s.provenance_ = EuclideanSymbol::Provenance::extended_from_toroidal;
    s.n_ = table.dim();
    s.order_ = table.order();
    s.table_ = std::make_shared<SymbolTable>(table);
    s.kernel_ = std::move(kernel);
    return s;
}

SymbolTable restrict_symbol(const EuclideanSymbol& b, const FrequencyBox& box,
                            int grid_size) {
    SymbolTable out(box, grid_size, b.order());
    std::vector<double> xi_real(box.n);
    for (const auto& xi : box.points()) {
        for (int j = 0; j < box.n; ++j) xi_real[j] = double(xi[j]);
        cplx* dst = out.row(xi);
        for (std::size_t xf = 0; xf < out.grid_total(); ++xf)
            dst[xf] = b.eval_grid(xf, grid_size, xi_real);
    }
    return out;
}

double ClassConstants::at(const MultiIndex& alpha, const MultiIndex& beta) const {
    for (const auto& e : entries)
        if (e.alpha == alpha && e.beta == beta) return e.constant;
    throw config_error("class constant not tabulated for this (alpha, beta)");
}

ClassConstants estimate_class_constants(const SymbolTable& a, int alpha_max,
                                        int beta_max) {
    if (a.box().margin < alpha_max)
        throw box_error("insufficient margin for the requested difference orders");
    ClassConstants out;
    const auto& ord = a.order();
    for (const auto& beta : multi_indices_below(a.dim(), beta_max + 1)) {
        SymbolTable db = a.x_partial(beta);
        for (const auto& alpha : multi_indices_below(a.dim(), alpha_max + 1)) {
            SymbolTable d = db.forward_xi_difference(alpha);
            double worst = 0;
            for (const auto& xi : d.box().core_points()) {
                double weight = std::pow(1.0 + xi.norm2(),
                                         0.5 * (-ord.m + ord.rho * alpha.order() -
                                                ord.delta * beta.order()));
                const cplx* r = d.row(xi);
                for (std::size_t i = 0; i < d.grid_total(); ++i)
                    worst = std::max(worst, std::abs(r[i]) * weight);
            }
            out.entries.push_back({alpha, beta, worst});
        }
    }
    return out;
}

}  // namespace torus
