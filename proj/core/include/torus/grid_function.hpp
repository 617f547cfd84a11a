#pragma once

#include <functional>

#include "torus/lattice.hpp"
#include "torus/types.hpp"

namespace torus {

// Finite lattice window {xi in Z^n : |xi_j| <= K}, plus a difference margin:
// tables carrying a margin store values out to |xi_j| <= K + margin so that
// xi-differences up to order `margin` stay evaluable on the core box.
struct FrequencyBox {
    int n = 1;
    int K = 1;
    int margin = 0;

    FrequencyBox() = default;
    FrequencyBox(int n_, int K_, int margin_ = 0);

    long ext() const { return K + margin; }
    long side() const { return 2 * ext() + 1; }
    std::size_t size() const;  // number of stored lattice points

    bool contains_core(const LatticePoint& xi) const;  // |xi_j| <= K
    bool contains(const LatticePoint& xi) const;       // |xi_j| <= K + margin

    std::size_t index(const LatticePoint& xi) const;  // lexicographic, extended box
    LatticePoint point(std::size_t idx) const;
    std::vector<LatticePoint> points() const;       // extended box
    std::vector<LatticePoint> core_points() const;  // |xi_j| <= K

    FrequencyBox with_margin(int m) const { return FrequencyBox(n, K, m); }
    bool same_extent(const FrequencyBox& o) const {
        return n == o.n && K + margin == o.K + o.margin;
    }

    // Smallest power of two >= 3K+1: pointwise products of two band-limited
    // functions stay alias-free under pad-then-truncate.
    int default_grid() const;
};

// Periodic function on T^n held as Fourier coefficients on a FrequencyBox
// (margin 0), with a synchronized uniform-grid sample view (N points per
// axis, N >= 2K+1). Coefficients are the ground truth; samples are
// synthesized on demand and cached.
class GridFunction {
public:
    GridFunction(FrequencyBox box, int grid_size);  // zero function

    static GridFunction from_coefficients(FrequencyBox box, int grid_size,
                                          std::vector<cplx> coeffs);
    // Forward quadrature of given samples (row-major, N^n). Spectral mass at
    // unrepresentable frequencies is discarded; its l2 size is reported
    // through *discarded if non-null.
    static GridFunction from_samples(FrequencyBox box, int grid_size,
                                     std::vector<cplx> samples,
                                     double* discarded = nullptr);
    static GridFunction basis(FrequencyBox box, int grid_size,
                              const LatticePoint& xi);  // e_xi
    static GridFunction from_rule(FrequencyBox box, int grid_size,
                                  const std::function<cplx(const std::vector<double>&)>& rule,
                                  double* discarded = nullptr);

    const FrequencyBox& box() const { return box_; }
    int dim() const { return box_.n; }
    int grid_size() const { return grid_size_; }
    std::size_t grid_total() const;

    cplx coeff(const LatticePoint& xi) const;
    void set_coeff(const LatticePoint& xi, cplx v);
    const std::vector<cplx>& coefficients() const { return coeffs_; }

    const std::vector<cplx>& samples() const;  // lazily synthesized, cached
    std::vector<double> grid_point(std::size_t flat) const;

    double l2_norm() const;  // Parseval: (sum |coeff|^2)^{1/2}

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(cplx scale);

private:
    FrequencyBox box_;
    int grid_size_;
    std::vector<cplx> coeffs_;
    mutable std::vector<cplx> samples_;
    mutable bool have_samples_ = false;
};

// Toroidal Fourier transform: exact quadrature of a band-limited function;
// the result reads off the coefficient table on the box.
LatticeFunction toroidal_ft(const GridFunction& u);

// x |-> sum_xi e^{i x.xi} g(xi) over the box.
GridFunction inverse_ft(const LatticeFunction& g, const FrequencyBox& box,
                        int grid_size);

// Fourier multiplier (sign*xi)^((alpha)); acts diagonally, stays in the box.
GridFunction falling_derivative(const GridFunction& u, const MultiIndex& alpha,
                                int sign = +1);

// ( sum_xi <xi>^{2s} |u^(xi)|^2 )^{1/2}
double sobolev_norm(const GridFunction& u, double s);

// Fourier transform on the inflated torus N T^n. The input holds the
// samples of g as the T^n function g_N(x) = g(Nx); frequencies eta in
// (1/N) Z^n are addressed by the integer point mu = N eta, and
// F_{NT^n} g(mu/N) = N^n (F_{T^n} g_N)(mu).
LatticeFunction inflated_ft(const GridFunction& g_compressed, int inflation);

// Uniform grid coordinate x_i = 2 pi i / N.
inline double grid_coord(long i, int N) { return two_pi * double(i) / double(N); }

// Coordinates of a row-major flattened grid index.
std::vector<double> unflatten_grid_point(int n, int N, std::size_t flat);

std::vector<int> grid_dims(int n, int N);

}  // namespace torus
