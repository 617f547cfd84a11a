#pragma once

#include <memory>

#include "torus/symbol_table.hpp"
#include "torus/theta_kernel.hpp"

namespace torus {

// Symbol on T^n x R^n: either an analytic rule, or the theta-kernel
// extension of a tabulated toroidal symbol (unique modulo rapidly decaying
// parts). Extended symbols evaluate at x on the source grid only.
class EuclideanSymbol {
public:
    enum class Provenance { analytic, extended_from_toroidal };

    EuclideanSymbol(int n, SymbolOrder order,
                    std::function<cplx(const std::vector<double>&,
                                       const std::vector<double>&)> rule);

    Provenance provenance() const { return provenance_; }
    int dim() const { return n_; }
    const SymbolOrder& order() const { return order_; }

    // Evaluate at a real frequency with x given as a flat grid index. For
    // extended symbols grid_size must match the source table.
    cplx eval_grid(std::size_t x_flat, int grid_size,
                   const std::vector<double>& xi) const;
    // Analytic rule evaluation at arbitrary (x, xi).
    cplx eval(const std::vector<double>& x, const std::vector<double>& xi) const;

    friend EuclideanSymbol extend_symbol(const SymbolTable& table,
                                         std::shared_ptr<const ThetaKernel> kernel);

private:
    EuclideanSymbol() = default;

    Provenance provenance_ = Provenance::analytic;
    int n_ = 1;
    SymbolOrder order_;
    std::function<cplx(const std::vector<double>&, const std::vector<double>&)> rule_;
    std::shared_ptr<const SymbolTable> table_;
    std::shared_ptr<const ThetaKernel> kernel_;
};

// a(x, xi) = sum_eta (F theta)(xi - eta) a~(x, eta), terms outside the
// kernel cutoff dropped. Evaluation requires the window around xi to stay
// inside the table's stored box.
EuclideanSymbol extend_symbol(const SymbolTable& table,
                              std::shared_ptr<const ThetaKernel> kernel);

// Tabulate b on grid x lattice; inherits the (m, rho, delta) metadata.
SymbolTable restrict_symbol(const EuclideanSymbol& b, const FrequencyBox& box,
                            int grid_size);

// Measured symbol-class constants sup |tri^alpha d_x^beta a| <xi>^{-m+rho|a|-delta|b|}.
struct ClassConstants {
    struct Entry {
        MultiIndex alpha, beta;
        double constant;
    };
    std::vector<Entry> entries;
    double at(const MultiIndex& alpha, const MultiIndex& beta) const;
};

ClassConstants estimate_class_constants(const SymbolTable& a, int alpha_max,
                                        int beta_max);

}  // namespace torus
