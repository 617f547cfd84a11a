#pragma once

#include <optional>

#include "torus/extension.hpp"
#include "torus/phase.hpp"
#include "torus/quantize.hpp"

namespace torus {

// Fourier series operator: T u(x) = sum_xi e^{i phi(x,xi)} a(x,xi) u^(xi)
// (symbol form) or with the y-integral (amplitude form).
class FourierSeriesOp {
public:
    FourierSeriesOp(PhaseTable phase, SymbolTable symbol);
    FourierSeriesOp(PhaseTable phase, AmplitudeTable amplitude);

    const PhaseTable& phase() const { return phase_; }
    bool has_symbol_form() const { return symbol_.has_value(); }
    const SymbolTable& symbol() const;
    const AmplitudeTable& amplitude() const;

private:
    PhaseTable phase_;
    std::optional<SymbolTable> symbol_;
    std::optional<AmplitudeTable> amplitude_;
};

GridFunction apply_fso(const FourierSeriesOp& T, const GridFunction& u,
                       ApplyReport* report = nullptr);

// Composition T o p(X,D): amplitude
//   c(x,z,xi) = sum_{|alpha|<M} (1/alpha!) (-D_z)^((alpha)) [ a(x,z,xi) tri_xi^alpha p(z,xi) ]
// carried by the same phase.
FourierSeriesOp compose_fso_pdo(const FourierSeriesOp& T, const SymbolTable& p,
                                int truncation);

struct PtOptions {
    double comparability_floor = 0.05;  // required min <grad phi>/<xi>
    // central-difference steps per derivative order (Richardson-corrected);
    // higher orders need wider stencils to stay above the tabulation noise
    std::vector<double> fd_steps = {1e-3, 0.35, 0.5};
};

// Composition p(X,D) o T via the theta-kernel extension of p:
//   c(x,z,xi) = sum_{|alpha|<M} (i^{-|alpha|}/alpha!)
//                d_eta^alpha p(x,eta)|_{eta=grad_x phi}
//                d_y^alpha [ e^{i Psi} a(y,z,xi) ]|_{y=x}
FourierSeriesOp compose_pdo_fso(const SymbolTable& p, const FourierSeriesOp& T,
                                int truncation,
                                std::shared_ptr<const ThetaKernel> kernel,
                                PtOptions options = {});

// Difference-form variant (lattice-valued grad_x phi required):
//   c = sum (1/alpha!) [tri_omega^alpha p(x,omega)]_{omega=grad phi}
//         D_y^((alpha)) [e^{i Psi} a]|_{y=x}
FourierSeriesOp compose_pdo_fso_difference_form(const SymbolTable& p,
                                                const FourierSeriesOp& T,
                                                int truncation);

// Richardson-corrected central-difference derivative of a Euclidean symbol
// in its frequency slot; direct order-k stencils per axis, k <= 3.
cplx extension_derivative(const EuclideanSymbol& p, std::size_t x_flat,
                          int grid_size, std::vector<double> eta,
                          const MultiIndex& alpha,
                          const std::vector<double>& steps);

// sqrt( sup_omega sum_xi |(F a)(omega-xi,xi)| * sup_xi sum_omega |...| ) on
// the box; (F a)(eta, xi) is the eta-th x-Fourier coefficient of a(., xi).
double schur_l2_bound(const SymbolTable& a);

struct FsoL2Report {
    struct SupEntry {
        MultiIndex alpha;
        double amplitude_sup;  // sup |d_x^alpha a|
    };
    std::vector<SupEntry> amplitude_bounds;       // |alpha| <= 2n+1
    std::vector<PhaseReport::DifferenceBound> phase_bounds;  // |beta| = 1
    double graph_constant = 0;  // inf |grad phi(x,k)-grad phi(x,l)| / |k-l|
};

FsoL2Report fso_l2_check(const FourierSeriesOp& T);

// Largest singular value by power iteration on A*A over the assembled
// coefficient matrix; relative tolerance 1e-8, at most 500 iterations.
double operator_norm(const LinearOperatorHandle& A, double rel_tol = 1e-8,
                     int max_iter = 500);

}  // namespace torus
