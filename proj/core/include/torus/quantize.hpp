#pragma once

#include "torus/symbol_table.hpp"

namespace torus {

// Black-box continuous linear operator on a fixed box/grid. Linearity is
// spot-checked on random pairs at wrap time.
class LinearOperatorHandle {
public:
    using Apply = std::function<GridFunction(const GridFunction&)>;

    LinearOperatorHandle(FrequencyBox box, int grid_size, Apply apply,
                         bool check_linearity = true, unsigned seed = 0);

    const FrequencyBox& box() const { return box_; }
    int grid_size() const { return grid_size_; }
    GridFunction operator()(const GridFunction& u) const;

private:
    FrequencyBox box_;
    int grid_size_;
    Apply apply_;
};

struct ApplyReport {
    double discarded_mass = 0;  // l2 of spectral content beyond the box
};

// (a(X,D) u)(x) = sum_xi e^{i x.xi} a(x,xi) u^(xi); accumulation runs on the
// sample grid (alias-free when the grid resolves a's x-band plus K), then
// re-truncates to the box; the discarded spectral mass is observable.
GridFunction apply_pdo(const SymbolTable& a, const GridFunction& u,
                       ApplyReport* report = nullptr);

// sigma_A(x, xi) = e^{-i x.xi} (A e_xi)(x), tabulated over box x grid.
SymbolTable extract_symbol(const LinearOperatorHandle& A, const FrequencyBox& box,
                           int grid_size);

// Wrap a symbol as an operator handle on its own box/grid.
LinearOperatorHandle pdo_operator(const SymbolTable& a);

// Amplitude operator Op(a): x |-> sum_xi int e^{i(x-y).xi} a(x,y,xi) u(y) dbar y,
// the y-integral by exact grid quadrature.
GridFunction apply_amplitude(const AmplitudeTable& a, const GridFunction& u,
                             ApplyReport* report = nullptr);

// Schwartz kernel K_A(x,y) = k_A(x, x-y) with k_A(x,.) the inverse transform
// of xi |-> a(x,xi); both tabulated on grid x grid.
struct KernelTable {
    int n = 1;
    int grid_size = 0;
    std::vector<cplx> schwartz;     // K_A(x,y), x-major
    std::vector<cplx> convolution;  // k_A(x,v), x-major
    cplx schwartz_at(std::size_t x_flat, std::size_t y_flat) const;
    cplx convolution_at(std::size_t x_flat, std::size_t v_flat) const;
    double consistency_defect() const;  // max |K_A(x,y) - k_A(x,x-y)|
};

KernelTable kernel_of(const SymbolTable& a);

// Apply through the Schwartz kernel by grid quadrature (oracle path).
GridFunction apply_kernel(const KernelTable& k, const GridFunction& u,
                          const FrequencyBox& box);

// Worker threads for the opt-in parallel paths (matrix assembly); the
// default of 1 keeps every computation single-threaded.
void set_threads(int k);
int threads();

// Dense coefficient matrix of A over the basis {e_xi : xi in box}, column
// xi-major; used by norm estimation and the reference evolution stepper.
// Columns are independent, so the parallel assembly is bit-identical to the
// sequential one.
std::vector<cplx> assemble_matrix(const LinearOperatorHandle& A);

}  // namespace torus
