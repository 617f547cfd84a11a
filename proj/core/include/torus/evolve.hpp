#pragma once

#include "torus/euclidean.hpp"
#include "torus/fso.hpp"

namespace torus {

// Cauchy problem for the first-order evolution with symbol
// a(x,xi) = a1(xi) + a0(x,xi): the propagator convention is
//   u(t,x) = sum_k e^{i(x.k + t a1(k))} b(t,x,k) f^(k),
// whose executable witness is a1(xi)=xi => u(t,x) = f(x+t) (equivalently
// d_t u = i a(X,D) u). a1 must be real on the box; times start at 0.
struct CauchyProblem {
    LatticeFunction a1;
    std::optional<SymbolTable> a0;  // order <= 0 perturbation, empty means 0
    GridFunction f;
    std::vector<double> times;

    CauchyProblem(LatticeFunction a1_, std::optional<SymbolTable> a0_,
                  GridFunction f_, std::vector<double> times_);
};

struct EvolvedSolution {
    enum class Method { reference, fso };
    Method method;
    std::vector<double> times;
    std::vector<GridFunction> states;
    struct Diagnostics {
        double norm = 0;
        double spectral_tail = 0;  // l2 mass discarded at re-truncation
    };
    std::vector<Diagnostics> diagnostics;
};

// Exact diagonal propagation e^{i t a1(xi)}; the a0 coupling is integrated
// in the interaction picture with classical RK4, the step chosen so that
// halving changes the outputs by less than step_tol.
EvolvedSolution solve_reference(const CauchyProblem& problem,
                                double step_tol = 1e-9);

struct FsoSolveOptions {
    double step_tol = 1e-9;
    double kernel_cutoff = 24.0;  // theta-kernel window for d_xi^alpha(a1+a0)
    std::vector<double> fd_steps = {1e-3, 0.35, 0.5};
};

// FSO parametrix with phase x.k + t a1(k) and the truncated transport
// hierarchy b = sum_{j<M} b_j:
//   d_t b_j = i a0 b_j + i sum_{0<|alpha|, j'+|alpha|=j} (i^{-|alpha|}/alpha!)
//             d_xi^alpha (a1+a0)|_{xi=k} d_x^alpha b_{j'},
// derivatives of the symbol taken on its theta-kernel extension. a1 must be
// declared out to K + kernel_cutoff + 1.
EvolvedSolution solve_fso(const CauchyProblem& problem, int truncation,
                          FsoSolveOptions options = {});

// x-supported euclidean perturbation a0(x, xi) for the embedding pipeline.
struct EuclideanPerturbation {
    std::vector<std::array<double, 2>> support;  // per axis, inside [-pi, pi]
    std::function<cplx(const std::vector<double>&, const LatticePoint&)> rule;
};

struct EmbedReport {
    PeriodizeReport data_report;
    // the dropped correction is a smoothing operator; its presence is
    // recorded, not its size
    bool smoothing_remainder_dropped = false;
};

// Builds the toroidal problem with data P f and symbol a1 + (P a0)~.
CauchyProblem embed_and_periodize(const EuclideanSampledFunction& f,
                                  LatticeFunction a1,
                                  const std::optional<EuclideanPerturbation>& a0,
                                  const FrequencyBox& box, int grid_size,
                                  std::vector<double> times,
                                  EmbedReport* report = nullptr);

}  // namespace torus
