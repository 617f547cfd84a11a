#pragma once

#include <functional>

#include "torus/grid_function.hpp"
#include "torus/lattice.hpp"

namespace torus {

// Symbol class metadata (m, rho, delta).
struct SymbolOrder {
    double m = 0.0;
    double rho = 1.0;
    double delta = 0.0;
};

// Tabulated toroidal symbol a(x, xi) on (x-grid) x (extended frequency box).
// Rows are xi-major, contiguous in x; x-rows must look like samples of a
// smooth periodic function (spectral tail below `smoothness_tol` of the row
// norm, checked on construction from raw data).
class SymbolTable {
public:
    static constexpr double smoothness_tol = 1e-8;

    SymbolTable(FrequencyBox box, int grid_size, SymbolOrder order);  // zero

    static SymbolTable from_rule(
        FrequencyBox box, int grid_size, SymbolOrder order,
        const std::function<cplx(const std::vector<double>&, const LatticePoint&)>& rule,
        bool check_smoothness = true);
    static SymbolTable from_values(FrequencyBox box, int grid_size, SymbolOrder order,
                                   std::vector<cplx> values,
                                   bool check_smoothness = true);

    const FrequencyBox& box() const { return box_; }
    int dim() const { return box_.n; }
    int grid_size() const { return grid_size_; }
    std::size_t grid_total() const { return grid_total_; }
    const SymbolOrder& order() const { return order_; }
    SymbolOrder& order() { return order_; }

    cplx value(const LatticePoint& xi, std::size_t x_flat) const {
        return values_[box_.index(xi) * grid_total_ + x_flat];
    }
    const cplx* row(const LatticePoint& xi) const {
        return values_.data() + box_.index(xi) * grid_total_;
    }
    cplx* row(const LatticePoint& xi) {
        return values_.data() + box_.index(xi) * grid_total_;
    }
    const std::vector<cplx>& values() const { return values_; }
    std::vector<double> grid_point(std::size_t x_flat) const;

    // Falling-factorial derivative D_x^((alpha)) (sign=-1 gives (-D_x)^((alpha))),
    // realized spectrally on each x-row.
    SymbolTable falling_x_derivative(const MultiIndex& alpha, int sign = +1) const;
    // Plain partial derivative d_x^beta, spectral.
    SymbolTable x_partial(const MultiIndex& beta) const;
    // Forward xi-difference; consumes difference margin.
    SymbolTable forward_xi_difference(const MultiIndex& alpha) const;

    SymbolTable conjugated() const;
    SymbolTable restricted(const FrequencyBox& smaller) const;

    SymbolTable& operator+=(const SymbolTable& other);
    SymbolTable& operator-=(const SymbolTable& other);
    SymbolTable& operator*=(cplx scale);
    // Pointwise product; margins intersect.
    static SymbolTable product(const SymbolTable& a, const SymbolTable& b);

    double max_abs() const;
    double max_abs_core() const;  // over the core box only

    // eta-th x-Fourier coefficient of each row: out[xi][eta_flat].
    std::vector<std::vector<cplx>> x_coefficients() const;

private:
    void check_rows() const;

    FrequencyBox box_;
    int grid_size_;
    std::size_t grid_total_;
    SymbolOrder order_;
    std::vector<cplx> values_;
};

// Compound symbol a(x, y, xi); layout xi-major, then x, contiguous in y.
class AmplitudeTable {
public:
    AmplitudeTable(FrequencyBox box, int grid_size, SymbolOrder order);

    static AmplitudeTable from_rule(
        FrequencyBox box, int grid_size, SymbolOrder order,
        const std::function<cplx(const std::vector<double>&, const std::vector<double>&,
                                 const LatticePoint&)>& rule,
        bool check_smoothness = true);
    // Broadcast a symbol: slot = 0 reads a(x,xi) (y-independent), slot = 1
    // reads a(y,xi) (x-independent).
    static AmplitudeTable from_symbol(const SymbolTable& s, int slot);

    const FrequencyBox& box() const { return box_; }
    int dim() const { return box_.n; }
    int grid_size() const { return grid_size_; }
    std::size_t grid_total() const { return grid_total_; }
    const SymbolOrder& order() const { return order_; }

    cplx value(const LatticePoint& xi, std::size_t x_flat, std::size_t y_flat) const {
        return values_[(box_.index(xi) * grid_total_ + x_flat) * grid_total_ + y_flat];
    }
    const cplx* y_row(const LatticePoint& xi, std::size_t x_flat) const {
        return values_.data() + (box_.index(xi) * grid_total_ + x_flat) * grid_total_;
    }
    cplx* y_row(const LatticePoint& xi, std::size_t x_flat) {
        return values_.data() + (box_.index(xi) * grid_total_ + x_flat) * grid_total_;
    }

    // Falling-factorial derivative in the y slot, spectral per (xi, x).
    AmplitudeTable falling_y_derivative(const MultiIndex& alpha, int sign = +1) const;
    AmplitudeTable y_partial(const MultiIndex& beta) const;
    AmplitudeTable forward_xi_difference(const MultiIndex& alpha) const;
    // Multiply by a symbol evaluated in the y slot: a(x,y,xi) p(y,xi).
    AmplitudeTable times_symbol_in_y(const SymbolTable& p) const;

    // s(x, xi) = a(x, x, xi)
    SymbolTable diagonal(SymbolOrder order) const;

    AmplitudeTable& operator+=(const AmplitudeTable& other);
    AmplitudeTable& operator*=(cplx scale);

private:
    FrequencyBox box_;
    int grid_size_;
    std::size_t grid_total_;
    SymbolOrder order_;
    std::vector<cplx> values_;
};

// Spectral multiplier machinery shared by the tables: applies
// row <- IFFT( mult(eta) * FFT(row) ) on an N^n periodic row.
void apply_x_multiplier(cplx* row, int n, int N,
                        const std::function<cplx(const LatticePoint&)>& mult);

// Integer frequency of FFT bin k on an N-point grid (k in [0,N)).
long fft_bin_frequency(long k, int N);

}  // namespace torus
