#include "torus/evolve.hpp"

#include <cmath>

namespace torus {

namespace {

cplx ipow_neg(int k) {
    switch (k % 4) {
        case 0: return {1, 0};
        case 1: return {0, -1};
        case 2: return {-1, 0};
        default: return {0, 1};
    }
}

// classical RK4 over [0, T] on a complex state vector
template <typename Rhs>
void rk4(std::vector<cplx>& state, double t0, double t1, int steps, Rhs&& rhs) {
    double h = (t1 - t0) / double(steps);
    std::size_t dim = state.size();
    std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    for (int s = 0; s < steps; ++s) {
        double t = t0 + h * double(s);
        rhs(t, state, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

double state_dev(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double dev = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        dev = std::max(dev, std::abs(a[i] - b[i]));
    return dev;
}

// integrate with step halving until two resolutions agree below tol
template <typename Rhs>
std::vector<std::vector<cplx>> integrate_checkpointed(
    std::vector<cplx> state, const std::vector<double>& times, double tol,
    Rhs&& rhs) {
    int steps_per_unit = 8;
    const int max_steps_per_unit = 1 << 18;
    std::vector<std::vector<cplx>> coarse;
    while (true) {
        auto run = [&](int spu) {
            std::vector<std::vector<cplx>> out;
            auto cur = state;
            out.push_back(cur);
            for (std::size_t k = 1; k < times.size(); ++k) {
                double len = times[k] - times[k - 1];
                int steps = std::max(1, int(std::ceil(len * double(spu))));
                rk4(cur, times[k - 1], times[k], steps, rhs);
                out.push_back(cur);
            }
            return out;
        };
        coarse = run(steps_per_unit);
        auto fine = run(2 * steps_per_unit);
        double dev = 0;
        for (std::size_t k = 0; k < times.size(); ++k)
            dev = std::max(dev, state_dev(coarse[k], fine[k]));
        if (dev < tol) return fine;
        steps_per_unit *= 2;
        if (steps_per_unit > max_steps_per_unit)
            throw accuracy_error("evolution step-size floor reached");
    }
}

}  // namespace

CauchyProblem::CauchyProblem(LatticeFunction a1_, std::optional<SymbolTable> a0_,
                             GridFunction f_, std::vector<double> times_)
    : a1(std::move(a1_)), a0(std::move(a0_)), f(std::move(f_)),
      times(std::move(times_)) {
    if (times.empty() || times[0] != 0.0)
        throw config_error("time list must start at 0");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (times[k] <= times[k - 1])
            throw config_error("time list must increase");
    for (const auto& xi : f.box().points())
        if (std::abs(a1(xi).imag()) > 1e-12)
            throw precondition_error("principal multiplier a1 must be real");
    if (a0 && (a0->dim() != f.dim() || a0->grid_size() != f.grid_size() ||
               a0->box().K < f.box().K))
        throw config_error("perturbation table does not cover the data box");
}

EvolvedSolution solve_reference(const CauchyProblem& problem, double step_tol) {
    const auto& box = problem.f.box();
    const int N = problem.f.grid_size();
    std::size_t dim = box.size();
    std::vector<double> a1d(dim);
    for (std::size_t i = 0; i < dim; ++i) a1d[i] = problem.a1(box.point(i)).real();

    EvolvedSolution sol;
    sol.method = EvolvedSolution::Method::reference;
    sol.times = problem.times;

    auto push_state = [&](std::vector<cplx> coeffs) {
        auto g = GridFunction::from_coefficients(box, N, std::move(coeffs));
        sol.diagnostics.push_back({g.l2_norm(), 0.0});
        sol.states.push_back(std::move(g));
    };

    if (!problem.a0) {
        for (double t : problem.times) {
            std::vector<cplx> c(dim);
            for (std::size_t i = 0; i < dim; ++i)
                c[i] = std::polar(1.0, t * a1d[i]) * problem.f.coefficients()[i];
            push_state(std::move(c));
        }
        return sol;
    }

    // interaction picture: u^ = e^{i t a1} v, d_t v = i e^{-i t a1} A0 e^{i t a1} v
    auto a0_restricted = problem.a0->restricted(FrequencyBox(box.n, box.K, 0));
    auto mat = assemble_matrix(pdo_operator(a0_restricted));
    auto rhs = [&](double t, const std::vector<cplx>& v, std::vector<cplx>& out) {
        std::vector<cplx> w(dim);
        for (std::size_t i = 0; i < dim; ++i)
            w[i] = std::polar(1.0, t * a1d[i]) * v[i];
        for (std::size_t r = 0; r < dim; ++r) {
            cplx acc = 0;
            const cplx* row = mat.data() + r * dim;
            for (std::size_t c = 0; c < dim; ++c) acc += row[c] * w[c];
            out[r] = cplx(0, 1) * std::polar(1.0, -t * a1d[r]) * acc;
        }
    };
    auto checkpoints = integrate_checkpointed(problem.f.coefficients(),
                                              problem.times, step_tol, rhs);
    for (std::size_t k = 0; k < problem.times.size(); ++k) {
        double t = problem.times[k];
        std::vector<cplx> c(dim);
        for (std::size_t i = 0; i < dim; ++i)
            c[i] = std::polar(1.0, t * a1d[i]) * checkpoints[k][i];
        push_state(std::move(c));
    }
    return sol;
}

EvolvedSolution solve_fso(const CauchyProblem& problem, int truncation,
                          FsoSolveOptions options) {
    if (truncation < 1 || truncation > 4)
        throw config_error("transport truncation must be in 1..4");
    const auto& box = problem.f.box();
    const int N = problem.f.grid_size();
    const int n = box.n;
    const std::size_t B = box.size();
    std::size_t grid_total = problem.f.grid_total();

    // d_xi^alpha (a1 + a0) at lattice xi, via the theta-kernel extension
    auto kernel = ThetaKernel::build(n, options.kernel_cutoff);
    long need = box.K + long(options.kernel_cutoff) + 1;
    auto a1_table = SymbolTable::from_rule(
        FrequencyBox(n, int(need), 0), N, {1, 1, 0},
        [&](const std::vector<double>&, const LatticePoint& xi) {
            return problem.a1(xi);
        },
        false);
    auto a1_ext = extend_symbol(a1_table, kernel);
    std::optional<EuclideanSymbol> a0_ext;
    if (problem.a0) {
        if (problem.a0->box().ext() < need - 1)
            throw box_error("perturbation table too small for the kernel window");
        a0_ext = extend_symbol(*problem.a0, kernel);
    }

    auto couplings = multi_indices_below(n, truncation);
    // C_alpha(x, k) tables for 1 <= |alpha| < truncation
    std::vector<std::vector<cplx>> coupling_tables(couplings.size());
    for (std::size_t ci = 0; ci < couplings.size(); ++ci) {
        const auto& alpha = couplings[ci];
        if (alpha.order() == 0) continue;
        auto& table = coupling_tables[ci];
        table.assign(B * grid_total, cplx(0));
        for (std::size_t i = 0; i < B; ++i) {
            auto xi = box.point(i);
            std::vector<double> eta(static_cast<std::size_t>(n), 0.0);
            for (int j = 0; j < n; ++j) eta[std::size_t(j)] = double(xi[j]);
            // a1 part is x-independent: evaluate once per xi
            cplx c1 = extension_derivative(a1_ext, 0, N, eta, alpha, options.fd_steps);
            for (std::size_t xf = 0; xf < grid_total; ++xf) {
                cplx c = c1;
                if (a0_ext)
                    c += extension_derivative(*a0_ext, xf, N, eta, alpha,
                                              options.fd_steps);
                table[i * grid_total + xf] = c;
            }
        }
    }

    // a0 lattice values for the pointwise coupling
    std::vector<cplx> a0_vals;
    if (problem.a0) {
        a0_vals.assign(B * grid_total, cplx(0));
        for (std::size_t i = 0; i < B; ++i) {
            const cplx* row = problem.a0->row(box.point(i));
            for (std::size_t xf = 0; xf < grid_total; ++xf)
                a0_vals[i * grid_total + xf] = row[xf];
        }
    }

    // joint state: b_j(x, k) stacked over j; b_0(0) = 1, b_j(0) = 0
    std::size_t level_size = B * grid_total;
    std::vector<cplx> state(std::size_t(truncation) * level_size, cplx(0));
    for (std::size_t i = 0; i < level_size; ++i) state[i] = 1.0;

    std::vector<std::vector<cplx>> dx_buf(couplings.size());
    auto rhs = [&](double, const std::vector<cplx>& s, std::vector<cplx>& out) {
        std::fill(out.begin(), out.end(), cplx(0));
        // spectral x-derivatives of each level, reused across target levels
        for (int j = 0; j < truncation; ++j) {
            const cplx* bj = s.data() + std::size_t(j) * level_size;
            cplx* oj = out.data() + std::size_t(j) * level_size;
            if (problem.a0) {
                for (std::size_t i = 0; i < level_size; ++i)
                    oj[i] += cplx(0, 1) * a0_vals[i] * bj[i];
            }
            for (std::size_t ci = 0; ci < couplings.size(); ++ci) {
                const auto& alpha = couplings[ci];
                int jp = j - alpha.order();
                if (alpha.order() == 0 || jp < 0) continue;
                const cplx* bsrc = s.data() + std::size_t(jp) * level_size;
                // d_x^alpha b_{j'} per k-row
                auto& buf = dx_buf[ci];
                buf.assign(level_size, cplx(0));
                for (std::size_t i = 0; i < B; ++i) {
                    std::copy(bsrc + i * grid_total, bsrc + (i + 1) * grid_total,
                              buf.begin() + long(i * grid_total));
                    apply_x_multiplier(buf.data() + i * grid_total, n, N,
                                       [&alpha](const LatticePoint& eta) {
                                           cplx m = 1.0;
                                           for (int d = 0; d < eta.dim(); ++d)
                                               for (int q = 0; q < alpha[d]; ++q)
                                                   m *= cplx(0.0, double(eta[d]));
                                           return m;
                                       });
                }
                cplx coef = cplx(0, 1) * ipow_neg(alpha.order()) /
                            double(alpha.factorial());
                const auto& ctab = coupling_tables[ci];
                for (std::size_t i = 0; i < level_size; ++i)
                    oj[i] += coef * ctab[i] * buf[i];
            }
        }
    };

    auto checkpoints =
        integrate_checkpointed(state, problem.times, options.step_tol, rhs);

    EvolvedSolution sol;
    sol.method = EvolvedSolution::Method::fso;
    sol.times = problem.times;
    for (std::size_t k = 0; k < problem.times.size(); ++k) {
        double t = problem.times[k];
        std::vector<cplx> samples(grid_total, cplx(0));
        const auto& s = checkpoints[k];
        for (std::size_t i = 0; i < B; ++i) {
            auto xi = box.point(i);
            cplx fc = problem.f.coefficients()[i];
            if (fc == cplx(0)) continue;
            cplx tphase = std::polar(1.0, t * problem.a1(xi).real());
            for (std::size_t xf = 0; xf < grid_total; ++xf) {
                auto x = unflatten_grid_point(n, N, xf);
                double xphase = 0;
                for (int j = 0; j < n; ++j) xphase += x[std::size_t(j)] * double(xi[j]);
                cplx b = 0;
                for (int j = truncation - 1; j >= 0; --j)
                    b += s[std::size_t(j) * level_size + i * grid_total + xf];
                samples[xf] += std::polar(1.0, xphase) * tphase * b * fc;
            }
        }
        double tail = 0;
        auto g = GridFunction::from_samples(box, N, std::move(samples), &tail);
        sol.diagnostics.push_back({g.l2_norm(), tail});
        sol.states.push_back(std::move(g));
    }
    return sol;
}

CauchyProblem embed_and_periodize(const EuclideanSampledFunction& f,
                                  LatticeFunction a1,
                                  const std::optional<EuclideanPerturbation>& a0,
                                  const FrequencyBox& box, int grid_size,
                                  std::vector<double> times, EmbedReport* report) {
    for (const auto& [lo, hi] : f.support())
        if (lo < -pi - 1e-12 || hi > pi + 1e-12)
            throw precondition_error("data support must lie inside [-pi, pi]^n");
    PeriodizeReport prep;
    auto pf = periodize(f, box, grid_size, 1e-9, &prep);

    std::optional<SymbolTable> a0_table;
    if (a0) {
        for (const auto& [lo, hi] : a0->support)
            if (lo < -pi - 1e-12 || hi > pi + 1e-12)
                throw precondition_error(
                    "perturbation support must lie inside [-pi, pi]^n");
        // (P a0)~: with support inside one cell the shift-sum reduces to a
        // wrap of the fundamental domain
        auto rule = a0->rule;
        auto support = a0->support;
        a0_table = SymbolTable::from_rule(
            box, grid_size, {0, 1, 0},
            [rule, support](const std::vector<double>& x, const LatticePoint& xi) {
                std::vector<double> w(x);
                for (auto& c : w) {
                    while (c > pi) c -= two_pi;
                    while (c < -pi) c += two_pi;
                }
                for (std::size_t j = 0; j < support.size(); ++j)
                    if (w[j] < support[j][0] || w[j] > support[j][1]) return cplx(0);
                return rule(w, xi);
            });
    }
    if (report) {
        report->data_report = prep;
        report->smoothing_remainder_dropped = a0.has_value();
    }
    return CauchyProblem(std::move(a1), std::move(a0_table), std::move(pf),
                         std::move(times));
}

}  // namespace torus
