#pragma once

#include <memory>

#include "torus/types.hpp"

namespace torus {

// Interpolation kernel for extending lattice symbols to real frequencies.
// theta_1(x) = psi(x) / (psi(x) + psi(x - 2 pi sgn x)) on [-2pi, 2pi] built
// from the bump psi(x) = exp(-1/(1-(x/2pi)^2)), tensorized over axes. The
// tabulation holds (F_R theta_1)(xi) on [0, H] (even in xi) on a fine grid
// with natural-cubic-spline evaluation; values vanish beyond the cutoff.
//
// Certificates checked at build: P theta == 1 (shift sum), and the
// interpolation property (F theta)(k) = delta_{0,k} at integers to 1e-8.
class ThetaKernel {
public:
    struct Params {
        double cutoff = 12.0;     // H
        double tail_tol = 2.5e-4; // enforced bound on |F theta| near the cutoff
        double step = 1.0 / 512.0;
        int quadrature_points = 2048;
    };

    static std::shared_ptr<const ThetaKernel> build(int n);
    static std::shared_ptr<const ThetaKernel> build(int n, Params params);
    static std::shared_ptr<const ThetaKernel> build(int n, double cutoff);

    int dim() const { return n_; }
    double cutoff() const { return params_.cutoff; }
    double step() const { return params_.step; }

    static double theta_1d(double x);       // the 1D window itself
    double f_hat_1d(double xi) const;        // spline lookup; 0 beyond cutoff
    double f_hat(const std::vector<double>& xi) const;  // product over axes

    double interpolation_defect() const { return interpolation_defect_; }
    double measured_tail() const { return measured_tail_; }
    double shift_sum_defect() const { return shift_sum_defect_; }

private:
    ThetaKernel(int n, Params params);
    void tabulate();
    void certify();

    int n_;
    Params params_;
    std::vector<double> nodes_;    // F theta on [0, H], step h
    std::vector<double> second_;   // natural cubic spline second derivatives
    double interpolation_defect_ = 0;
    double measured_tail_ = 0;
    double shift_sum_defect_ = 0;
};

}  // namespace torus
