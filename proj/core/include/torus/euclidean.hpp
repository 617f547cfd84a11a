#pragma once

#include <array>
#include <functional>
#include <optional>

#include "torus/grid_function.hpp"
#include "torus/types.hpp"

namespace torus {

// Function on R^n with declared compact numerical support, evaluated through
// a rule; Gaussians carry a closed-form tag so their transform needs no
// quadrature. Tensor-product Gaussian: amplitude * prod_j e^{-x_j^2/(2 w_j^2)}.
class EuclideanSampledFunction {
public:
    struct Gaussian {
        std::vector<double> widths;
        cplx amplitude = 1.0;
    };

    EuclideanSampledFunction(std::vector<std::array<double, 2>> support,
                             std::function<cplx(const std::vector<double>&)> rule);
    static EuclideanSampledFunction gaussian(std::vector<double> widths,
                                             cplx amplitude = 1.0,
                                             double support_sigmas = 9.5);

    int dim() const { return static_cast<int>(support_.size()); }
    const std::vector<std::array<double, 2>>& support() const { return support_; }
    cplx operator()(const std::vector<double>& x) const;
    const std::optional<Gaussian>& gaussian_tag() const { return gaussian_; }

    // max |f| over the support boundary relative to an interior scale; the
    // periodization tail precondition checks this.
    double boundary_tail() const;

private:
    std::vector<std::array<double, 2>> support_;
    std::function<cplx(const std::vector<double>&)> rule_;
    std::optional<Gaussian> gaussian_;
};

// (F_{R^n} f)(xi) = int e^{-i x.xi} f(x) dbar x, dbar x = (2pi)^{-n} dx.
// Composite trapezoid over the declared support, refined until successive
// halvings differ by < tol; Gaussians use the closed form.
cplx euclidean_ft(const EuclideanSampledFunction& f, const std::vector<double>& xi,
                  double tol = 1e-10);

struct PeriodizeReport {
    double route_disagreement = 0;  // max over box of |shift-sum - restriction|
    double boundary_tail = 0;
};

// P f(x) = sum_k f(x + 2 pi k), computed both by the direct shift-sum on the
// grid and by restricting F_{R^n} f to the lattice. The two must agree to
// `consistency_tol`, otherwise the decay precondition failed.
GridFunction periodize(const EuclideanSampledFunction& f, const FrequencyBox& box,
                       int grid_size, double consistency_tol = 1e-9,
                       PeriodizeReport* report = nullptr);

}  // namespace torus
