#pragma once

#include "torus/symbol_table.hpp"

namespace torus {

// Real phase phi(x, xi) = x.lambda(xi) + phi_per(x, xi) with phi_per
// 2pi-periodic in x. Storing the linear slope lambda per xi makes the
// periodicity certificate exact for the linear part (lambda integer) and
// reduces the check to the tabulated periodic remainder.
class PhaseTable {
public:
    // phi = x.xi
    static PhaseTable linear(FrequencyBox box, int grid_size);
    // phi = x.xi + tau(xi) (frequency-only part; gradient stays xi)
    static PhaseTable with_frequency_part(FrequencyBox box, int grid_size,
                                          const std::function<double(const LatticePoint&)>& tau);
    // general: explicit slope lambda(xi) and periodic part per(x, xi)
    static PhaseTable general(
        FrequencyBox box, int grid_size,
        const std::function<std::vector<double>(const LatticePoint&)>& lambda,
        const std::function<double(const std::vector<double>&, const LatticePoint&)>& per);

    const FrequencyBox& box() const { return box_; }
    int dim() const { return box_.n; }
    int grid_size() const { return grid_size_; }
    std::size_t grid_total() const { return grid_total_; }

    double value(const LatticePoint& xi, std::size_t x_flat) const;
    cplx factor(const LatticePoint& xi, std::size_t x_flat) const;  // e^{i phi}
    // grad_x phi = lambda + grad phi_per (spectral on the periodic part)
    std::vector<double> gradient(const LatticePoint& xi, std::size_t x_flat) const;
    const std::vector<double>& slope(const LatticePoint& xi) const;
    double periodic_part(const LatticePoint& xi, std::size_t x_flat) const;

    // max_j |e^{i 2 pi lambda_j(xi)} - 1| over the box
    double periodicity_defect() const;

private:
    PhaseTable(FrequencyBox box, int grid_size);
    void build_gradients();

    FrequencyBox box_;
    int grid_size_;
    std::size_t grid_total_;
    std::vector<std::vector<double>> slopes_;    // per xi
    std::vector<double> per_;                    // per (xi, x)
    std::vector<std::vector<double>> grad_per_;  // per axis, per (xi, x)
};

struct PhaseReport {
    double periodicity_defect = 0;
    double comparability_lower = 0;  // min <grad phi> / <xi>
    double comparability_upper = 0;  // max <grad phi> / <xi>
    // sup_x,xi |d_x^alpha tri_xi^{e_j} phi| for |alpha| <= alpha_max, per j
    struct DifferenceBound {
        MultiIndex alpha;
        int axis;
        double bound;
    };
    std::vector<DifferenceBound> difference_bounds;
};

// Report-only certificate: periodicity defect, gradient comparability
// constants, and boundedness of d_x^alpha tri_xi phi for |beta| = 1.
PhaseReport check_phase(const PhaseTable& phi, int alpha_max = 3);

// Psi(x,y,xi) = phi(y,xi) - phi(x,xi) + (x-y).grad_x phi(x,xi), tabulated on
// grid x grid x box.
class PsiCorrection {
public:
    explicit PsiCorrection(const PhaseTable& phi);

    double value(const LatticePoint& xi, std::size_t x_flat, std::size_t y_flat) const;
    double diagonal_defect() const;           // max |Psi(x,x,xi)|
    double gradient_diagonal_defect() const;  // max |grad_y Psi|_{y=x}|

private:
    FrequencyBox box_;
    int grid_size_;
    std::size_t grid_total_;
    std::vector<double> values_;
    double grad_defect_ = 0;
};

}  // namespace torus
