#include "torus/fso.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <map>
#include <unordered_map>

namespace torus {

namespace {

// componentwise signed Stirling numbers of the first kind:
// x^((k)) = sum_j s(k,j) x^j
long long stirling_first(int k, int j) {
    static std::vector<std::vector<long long>> table = {{1}};
    while (static_cast<int>(table.size()) <= k) {
        int kk = static_cast<int>(table.size());
        std::vector<long long> row(std::size_t(kk) + 1, 0);
        for (int jj = 0; jj <= kk; ++jj) {
            long long prev_shift = (jj >= 1) ? table[std::size_t(kk - 1)][std::size_t(jj - 1)] : 0;
            long long prev = (jj < kk) ? table[std::size_t(kk - 1)][std::size_t(jj)] : 0;
            row[std::size_t(jj)] = prev_shift - (long long)(kk - 1) * prev;
        }
        table.push_back(std::move(row));
    }
    if (j < 0 || j > k) return 0;
    return table[std::size_t(k)][std::size_t(j)];
}

long long stirling_first(const MultiIndex& alpha, const MultiIndex& gamma) {
    long long prod = 1;
    for (int j = 0; j < alpha.dim(); ++j) prod *= stirling_first(alpha[j], gamma[j]);
    return prod;
}

}  // namespace

FourierSeriesOp::FourierSeriesOp(PhaseTable phase, SymbolTable symbol)
    : phase_(std::move(phase)), symbol_(std::move(symbol)) {
    if (phase_.dim() != symbol_->dim() || phase_.grid_size() != symbol_->grid_size())
        throw config_error("phase and amplitude live on different grids");
    if (phase_.box().K < symbol_->box().K)
        throw config_error("phase box does not cover the amplitude box");
}

FourierSeriesOp::FourierSeriesOp(PhaseTable phase, AmplitudeTable amplitude)
    : phase_(std::move(phase)), amplitude_(std::move(amplitude)) {
    if (phase_.dim() != amplitude_->dim() ||
        phase_.grid_size() != amplitude_->grid_size())
        throw config_error("phase and amplitude live on different grids");
    if (phase_.box().K < amplitude_->box().K)
        throw config_error("phase box does not cover the amplitude box");
}

const SymbolTable& FourierSeriesOp::symbol() const {
    if (!symbol_) throw config_error("operator carries an amplitude-form table");
    return *symbol_;
}

const AmplitudeTable& FourierSeriesOp::amplitude() const {
    if (!amplitude_) throw config_error("operator carries a symbol-form table");
    return *amplitude_;
}

GridFunction apply_fso(const FourierSeriesOp& T, const GridFunction& u,
                       ApplyReport* report) {
    const auto& phi = T.phase();
    if (phi.periodicity_defect() > 1e-10)
        throw phase_error("phase fails the periodicity certificate");
    if (phi.grid_size() != u.grid_size() || phi.dim() != u.dim())
        throw config_error("operator applied on a mismatched grid");
    if (phi.box().ext() < u.box().K)
        throw config_error("phase box does not cover the function band");

    std::size_t total = u.grid_total();
    std::vector<cplx> out(total, cplx(0));
    if (T.has_symbol_form()) {
        const auto& a = T.symbol();
        for (const auto& xi : u.box().points()) {
            cplx uc = u.coeff(xi);
            if (uc == cplx(0)) continue;
            const cplx* row = a.row(xi);
            for (std::size_t xf = 0; xf < total; ++xf)
                out[xf] += phi.factor(xi, xf) * row[xf] * uc;
        }
    } else {
        const auto& a = T.amplitude();
        const auto& uy = u.samples();
        const double quad = 1.0 / double(total);
        std::vector<cplx> weighted(total);
        for (const auto& xi : u.box().points()) {
            for (std::size_t yf = 0; yf < total; ++yf) {
                auto y = unflatten_grid_point(u.dim(), u.grid_size(), yf);
                double phase = 0;
                for (int j = 0; j < u.dim(); ++j)
                    phase -= y[std::size_t(j)] * double(xi[j]);
                weighted[yf] = std::polar(1.0, phase) * uy[yf] * quad;
            }
            for (std::size_t xf = 0; xf < total; ++xf) {
                const cplx* row = a.y_row(xi, xf);
                cplx acc = 0;
                for (std::size_t yf = 0; yf < total; ++yf)
                    acc += row[yf] * weighted[yf];
                out[xf] += phi.factor(xi, xf) * acc;
            }
        }
    }
    double discarded = 0;
    auto res = GridFunction::from_samples(u.box(), u.grid_size(), std::move(out),
                                          &discarded);
    if (report) report->discarded_mass = discarded;
    return res;
}

FourierSeriesOp compose_fso_pdo(const FourierSeriesOp& T, const SymbolTable& p,
                                int truncation) {
    if (truncation < 1) throw config_error("truncation must be >= 1");
    if (p.box().margin < truncation - 1)
        throw box_error("pdo symbol margin too small for the truncation");
    AmplitudeTable base = T.has_symbol_form()
                              ? AmplitudeTable::from_symbol(T.symbol(), 0)
                              : T.amplitude();
    int out_margin = std::min(base.box().margin, p.box().margin - (truncation - 1));
    auto out_box = base.box().with_margin(out_margin);
    SymbolOrder ord{base.order().m + p.order().m,
                    std::min(base.order().rho, p.order().rho),
                    std::max(base.order().delta, p.order().delta)};
    AmplitudeTable acc(out_box, base.grid_size(), ord);
    for (const auto& alpha : multi_indices_below(p.dim(), truncation)) {
        auto dp = p.forward_xi_difference(alpha);
        auto term = base.times_symbol_in_y(dp).falling_y_derivative(alpha, -1);
        term *= 1.0 / double(alpha.factorial());
        // restrict to the accumulation box
        AmplitudeTable cut(out_box, base.grid_size(), ord);
        for (const auto& xi : out_box.points())
            for (std::size_t xf = 0; xf < cut.grid_total(); ++xf) {
                const cplx* src = term.y_row(xi, xf);
                cplx* dst = cut.y_row(xi, xf);
                for (std::size_t yf = 0; yf < cut.grid_total(); ++yf) dst[yf] = src[yf];
            }
        acc += cut;
    }
    return FourierSeriesOp(T.phase(), std::move(acc));
}

namespace {

// d_y^gamma [ e^{i Psi(x,y,xi)} a(y,z,xi) ]|_{y=x} for all |gamma| < bound,
// returned as amplitude-shaped tables in (x, z). Uses the decomposition
// e^{i Psi} = e^{-i per(x)} e^{-i x.v} [e^{i per(y)} e^{i y.v}] with
// v = -grad per(x, xi): the bracketed factor times a is periodic in y.
std::map<std::vector<int>, AmplitudeTable> psi_product_derivatives(
    const FourierSeriesOp& T, int bound) {
    const auto& phi = T.phase();
    AmplitudeTable amp = T.has_symbol_form()
                             ? AmplitudeTable::from_symbol(T.symbol(), 0)
                             : T.amplitude();
    const auto& box = amp.box();
    const int N = amp.grid_size();
    const std::size_t total = amp.grid_total();
    if (phi.box().ext() < box.ext())
        throw config_error("phase box does not cover the amplitude storage box");

    // G(y,z,xi) = e^{i per(y,xi)} a(y,z,xi): multiply the first slot
    AmplitudeTable g = amp;
    for (const auto& xi : box.points())
        for (std::size_t s1 = 0; s1 < total; ++s1) {
            cplx w = std::polar(1.0, phi.periodic_part(xi, s1));
            cplx* row = g.y_row(xi, s1);
            for (std::size_t s2 = 0; s2 < total; ++s2) row[s2] *= w;
        }

    // first-slot partial derivatives of G for all |gamma| < bound
    std::map<std::vector<int>, AmplitudeTable> dg;
    for (const auto& gamma : multi_indices_below(box.n, bound)) {
        AmplitudeTable d = g;
        if (gamma.order() > 0) {
            // derivative in the first slot: work on strided columns
            std::vector<cplx> col(total);
            for (const auto& xi : box.points())
                for (std::size_t s2 = 0; s2 < total; ++s2) {
                    for (std::size_t s1 = 0; s1 < total; ++s1)
                        col[s1] = g.value(xi, s1, s2);
                    apply_x_multiplier(col.data(), box.n, N,
                                       [&gamma](const LatticePoint& eta) {
                                           cplx m = 1.0;
                                           for (int j = 0; j < eta.dim(); ++j)
                                               for (int k = 0; k < gamma[j]; ++k)
                                                   m *= cplx(0.0, double(eta[j]));
                                           return m;
                                       });
                    for (std::size_t s1 = 0; s1 < total; ++s1)
                        d.y_row(xi, s1)[s2] = col[s1];
                }
        }
        dg.emplace(gamma.entries(), std::move(d));
    }

    // assemble W_gamma(x,z,xi)
    std::map<std::vector<int>, AmplitudeTable> out;
    for (const auto& gamma : multi_indices_below(box.n, bound)) {
        AmplitudeTable w(box, N, amp.order());
        for (const auto& xi : box.points()) {
            for (std::size_t xf = 0; xf < total; ++xf) {
                auto grad = phi.gradient(xi, xf);
                const auto& slope = phi.slope(xi);
                std::vector<double> v(std::size_t(box.n));
                for (int j = 0; j < box.n; ++j)
                    v[std::size_t(j)] = slope[std::size_t(j)] - grad[std::size_t(j)];
                cplx outer = std::polar(1.0, -phi.periodic_part(xi, xf));
                cplx* dst = w.y_row(xi, xf);
                for (const auto& beta : sub_indices(gamma)) {
                    cplx coef = double(binomial(gamma, beta));
                    for (int j = 0; j < box.n; ++j)
                        for (int k = 0; k < beta[j]; ++k)
                            coef *= cplx(0.0, v[std::size_t(j)]);
                    const auto& dgt = dg.at(gamma.minus(beta).entries());
                    const cplx* src = dgt.y_row(xi, xf);
                    for (std::size_t s2 = 0; s2 < total; ++s2)
                        dst[s2] += outer * coef * src[s2];
                }
            }
        }
        out.emplace(gamma.entries(), std::move(w));
    }
    return out;
}

}  // namespace

// Whole axes are differentiated with direct order-k stencils (k <= 3);
// recursion only crosses axes.
cplx extension_derivative(const EuclideanSymbol& p, std::size_t xf, int N,
                          std::vector<double> eta, const MultiIndex& alpha,
                          const std::vector<double>& steps) {
    if (alpha.order() == 0) return p.eval_grid(xf, N, eta);
    int axis = 0;
    while (alpha[axis] == 0) ++axis;
    int k = alpha[axis];
    if (k > 3) throw config_error("extension derivatives support order <= 3 per axis");
    std::vector<int> rest_e(alpha.entries());
    rest_e[std::size_t(axis)] = 0;
    MultiIndex rest{rest_e};
    double h = steps[std::min(steps.size() - 1, std::size_t(k - 1))];
    auto f = [&](double off) {
        auto e = eta;
        e[std::size_t(axis)] += off;
        return extension_derivative(p, xf, N, e, rest, steps);
    };
    auto stencil = [&](double hh) -> cplx {
        switch (k) {
            case 1: return (f(hh) - f(-hh)) / (2.0 * hh);
            case 2: return (f(hh) - 2.0 * f(0.0) + f(-hh)) / (hh * hh);
            default:
                return (f(2.0 * hh) - 2.0 * f(hh) + 2.0 * f(-hh) - f(-2.0 * hh)) /
                       (2.0 * hh * hh * hh);
        }
    };
    return (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0;
}

namespace {

cplx ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

}  // namespace

FourierSeriesOp compose_pdo_fso(const SymbolTable& p, const FourierSeriesOp& T,
                                int truncation,
                                std::shared_ptr<const ThetaKernel> kernel,
                                PtOptions options) {
    if (truncation < 1) throw config_error("truncation must be >= 1");
    const auto& phi = T.phase();
    if (phi.periodicity_defect() > 1e-10)
        throw phase_error("phase fails the periodicity certificate");
    auto rep_bounds = [&] {
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& xi : phi.box().points())
            for (std::size_t xf = 0; xf < phi.grid_total(); ++xf) {
                auto g = phi.gradient(xi, xf);
                double g2 = 0;
                for (double c : g) g2 += c * c;
                lo = std::min(lo, std::sqrt(1.0 + g2) / xi.bracket());
            }
        return lo;
    }();
    if (rep_bounds < options.comparability_floor)
        throw phase_error("phase gradient is not comparable to <xi>");

    auto w_tables = psi_product_derivatives(T, truncation);
    auto p_ext = extend_symbol(p, kernel);
    const auto& out_box = w_tables.begin()->second.box();
    const int N = w_tables.begin()->second.grid_size();
    SymbolOrder ord{p.order().m + w_tables.begin()->second.order().m,
                    std::min(p.order().rho, w_tables.begin()->second.order().rho),
                    std::max(p.order().delta, w_tables.begin()->second.order().delta)};
    AmplitudeTable acc(out_box, N, ord);
    const std::size_t total = acc.grid_total();
    for (const auto& alpha : multi_indices_below(p.dim(), truncation)) {
        const auto& w = w_tables.at(alpha.entries());
        cplx scale = ipow(-alpha.order()) / double(alpha.factorial());
        for (const auto& xi : out_box.points()) {
            for (std::size_t xf = 0; xf < total; ++xf) {
                auto eta = phi.gradient(xi, xf);
                cplx pval =
                    extension_derivative(p_ext, xf, N, eta, alpha, options.fd_steps);
                cplx coef = scale * pval;
                const cplx* src = w.y_row(xi, xf);
                cplx* dst = acc.y_row(xi, xf);
                for (std::size_t s2 = 0; s2 < total; ++s2) dst[s2] += coef * src[s2];
            }
        }
    }
    return FourierSeriesOp(T.phase(), std::move(acc));
}

FourierSeriesOp compose_pdo_fso_difference_form(const SymbolTable& p,
                                                const FourierSeriesOp& T,
                                                int truncation) {
    if (truncation < 1) throw config_error("truncation must be >= 1");
    const auto& phi = T.phase();
    if (phi.periodicity_defect() > 1e-10)
        throw phase_error("phase fails the periodicity certificate");

    auto w_tables = psi_product_derivatives(T, truncation);
    const auto& out_box = w_tables.begin()->second.box();
    const int N = w_tables.begin()->second.grid_size();
    const std::size_t total = w_tables.begin()->second.grid_total();

    // lattice-valued gradient precondition
    for (const auto& xi : out_box.points())
        for (std::size_t xf = 0; xf < total; ++xf) {
            auto g = phi.gradient(xi, xf);
            for (double c : g)
                if (std::abs(c - std::round(c)) > 1e-9)
                    throw precondition_error(
                        "difference form needs a lattice-valued phase gradient");
        }

    SymbolOrder ord{p.order().m + w_tables.begin()->second.order().m, 1, 0};
    AmplitudeTable acc(out_box, N, ord);
    for (const auto& alpha : multi_indices_below(p.dim(), truncation)) {
        // D_y^((alpha)) [e^{i Psi} a]|_{y=x} = sum_gamma s1(alpha,gamma) (-i)^{|gamma|} W_gamma
        AmplitudeTable dya(out_box, N, ord);
        for (const auto& gamma : sub_indices(alpha)) {
            long long s1 = stirling_first(alpha, gamma);
            if (s1 == 0) continue;
            cplx coef = double(s1) * ipow(-gamma.order());
            const auto& w = w_tables.at(gamma.entries());
            for (const auto& xi : out_box.points())
                for (std::size_t xf = 0; xf < total; ++xf) {
                    const cplx* src = w.y_row(xi, xf);
                    cplx* dst = dya.y_row(xi, xf);
                    for (std::size_t s2 = 0; s2 < total; ++s2)
                        dst[s2] += coef * src[s2];
                }
        }
        double inv_fact = 1.0 / double(alpha.factorial());
        for (const auto& xi : out_box.points())
            for (std::size_t xf = 0; xf < total; ++xf) {
                auto g = phi.gradient(xi, xf);
                std::vector<long> omega(std::size_t(p.dim()));
                for (int j = 0; j < p.dim(); ++j)
                    omega[std::size_t(j)] = std::lround(g[std::size_t(j)]);
                // forward difference of the p-table at omega
                cplx pdiff = 0;
                for (const auto& beta : sub_indices(alpha)) {
                    double sign = ((alpha.order() - beta.order()) % 2 == 0) ? 1.0 : -1.0;
                    auto shifted = LatticePoint(omega).shifted(beta);
                    pdiff += sign * double(binomial(alpha, beta)) *
                             p.value(shifted, xf);
                }
                cplx coef = pdiff * inv_fact;
                const cplx* src = dya.y_row(xi, xf);
                cplx* dst = acc.y_row(xi, xf);
                for (std::size_t s2 = 0; s2 < total; ++s2) dst[s2] += coef * src[s2];
            }
    }
    return FourierSeriesOp(T.phase(), std::move(acc));
}

double schur_l2_bound(const SymbolTable& a) {
    auto coeffs = a.x_coefficients();
    const auto& box = a.box();
    const int N = a.grid_size();
    std::size_t total = a.grid_total();

    double row_sup = 0;
    std::unordered_map<long long, double> col_sums;
    auto pts = box.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double row_sum = 0;
        for (std::size_t bin = 0; bin < total; ++bin) {
            double mag = std::abs(coeffs[i][bin]);
            row_sum += mag;
            // omega = xi + eta, flattened over a wide virtual box
            std::size_t rem = bin;
            long long key = 0;
            for (int j = box.n - 1; j >= 0; --j) {
                long eta = fft_bin_frequency(long(rem % std::size_t(N)), N);
                rem /= std::size_t(N);
                long omega = pts[i][j] + eta;
                key = key * 100000 + (omega + 50000);
            }
            col_sums[key] += mag;
        }
        row_sup = std::max(row_sup, row_sum);
    }
    double col_sup = 0;
    for (const auto& [k, v] : col_sums) col_sup = std::max(col_sup, v);
    return std::sqrt(row_sup * col_sup);
}

FsoL2Report fso_l2_check(const FourierSeriesOp& T) {
    FsoL2Report rep;
    const auto& phi = T.phase();
    int n = phi.dim();
    int order_cap = 2 * n + 1;

    if (T.has_symbol_form()) {
        const auto& a = T.symbol();
        for (const auto& alpha : multi_indices_below(n, order_cap + 1)) {
            auto d = a.x_partial(alpha);
            rep.amplitude_bounds.push_back({alpha, d.max_abs()});
        }
    }
    auto phase_rep = check_phase(phi, order_cap);
    rep.phase_bounds = phase_rep.difference_bounds;

    // discrete graph condition over the core box
    double graph = std::numeric_limits<double>::infinity();
    auto core = FrequencyBox(n, phi.box().K, 0).points();
    for (std::size_t i = 0; i < core.size(); ++i)
        for (std::size_t j = i + 1; j < core.size(); ++j) {
            double kl = 0;
            for (int d = 0; d < n; ++d) {
                double t = double(core[i][d] - core[j][d]);
                kl += t * t;
            }
            kl = std::sqrt(kl);
            for (std::size_t xf = 0; xf < phi.grid_total(); ++xf) {
                auto gi = phi.gradient(core[i], xf);
                auto gj = phi.gradient(core[j], xf);
                double diff = 0;
                for (int d = 0; d < n; ++d) {
                    double t = gi[std::size_t(d)] - gj[std::size_t(d)];
                    diff += t * t;
                }
                graph = std::min(graph, std::sqrt(diff) / kl);
            }
        }
    rep.graph_constant = graph;
    return rep;
}

double operator_norm(const LinearOperatorHandle& A, double rel_tol, int max_iter) {
    auto mat = assemble_matrix(A);
    std::size_t dim = A.box().size();

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<cplx> v(dim);
    for (auto& c : v) c = cplx(d(rng), d(rng));
    double nv = 0;
    for (const auto& c : v) nv += std::norm(c);
    nv = std::sqrt(nv);
    for (auto& c : v) c /= nv;

    std::vector<cplx> w(dim), z(dim);
    double sigma2 = 0;
    for (int it = 0; it < max_iter; ++it) {
        // w = M v, z = M^H w
        for (std::size_t r = 0; r < dim; ++r) {
            cplx acc = 0;
            const cplx* row = mat.data() + r * dim;
            for (std::size_t c = 0; c < dim; ++c) acc += row[c] * v[c];
            w[r] = acc;
        }
        for (std::size_t c = 0; c < dim; ++c) {
            cplx acc = 0;
            for (std::size_t r = 0; r < dim; ++r)
                acc += std::conj(mat[r * dim + c]) * w[r];
            z[c] = acc;
        }
        double nz = 0;
        for (const auto& cc : z) nz += std::norm(cc);
        nz = std::sqrt(nz);
        if (nz == 0.0) return 0.0;
        double next = nz;  // ||A^H A v|| -> sigma_max^2
        for (std::size_t c = 0; c < dim; ++c) v[c] = z[c] / nz;
        if (it > 0 && std::abs(next - sigma2) <= rel_tol * next)
            return std::sqrt(next);
        sigma2 = next;
    }
    throw accuracy_error("operator norm power iteration hit the iteration limit at " +
                         std::to_string(std::sqrt(sigma2)));
}

}  // namespace torus
