#include "torus/quantize.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace torus {

namespace {

std::size_t pow_size(int n, int N) {
    std::size_t t = 1;
    for (int j = 0; j < n; ++j) t *= std::size_t(N);
    return t;
}

// phasors[j][i] = e^{i sign * x_i * xi_j}
std::vector<std::vector<cplx>> axis_phasors(const LatticePoint& xi, int N, int sign) {
    std::vector<std::vector<cplx>> phs(std::size_t(xi.dim()));
    for (int j = 0; j < xi.dim(); ++j) {
        phs[std::size_t(j)].resize(std::size_t(N));
        for (int i = 0; i < N; ++i)
            phs[std::size_t(j)][std::size_t(i)] =
                std::polar(1.0, double(sign) * grid_coord(i, N) * double(xi[j]));
    }
    return phs;
}

// walk the flat grid in row-major order, handing the caller the product of
// per-axis phasors at every point
template <typename F>
void for_each_phase(const std::vector<std::vector<cplx>>& phs, int N, F&& f) {
    int n = static_cast<int>(phs.size());
    std::vector<int> c(std::size_t(n), 0);
    std::size_t total = 1;
    for (int j = 0; j < n; ++j) total *= std::size_t(N);
    for (std::size_t i = 0; i < total; ++i) {
        cplx p = 1.0;
        for (int j = 0; j < n; ++j) p *= phs[std::size_t(j)][std::size_t(c[std::size_t(j)])];
        f(i, p);
        int j = n - 1;
        while (j >= 0 && ++c[std::size_t(j)] == N) {
            c[std::size_t(j)] = 0;
            --j;
        }
    }
}

// flat index of the periodic difference x - y on an N-grid
std::size_t wrap_difference(std::size_t xf, std::size_t yf, int n, int N) {
    std::size_t vf = 0;
    std::vector<long> vidx(static_cast<std::size_t>(n), 0L);
    for (int j = n - 1; j >= 0; --j) {
        long xi = long(xf % std::size_t(N));
        long yi = long(yf % std::size_t(N));
        xf /= std::size_t(N);
        yf /= std::size_t(N);
        long v = (xi - yi) % N;
        if (v < 0) v += N;
        vidx[std::size_t(j)] = v;
    }
    for (int j = 0; j < n; ++j) vf = vf * std::size_t(N) + std::size_t(vidx[std::size_t(j)]);
    return vf;
}

}  // namespace

LinearOperatorHandle::LinearOperatorHandle(FrequencyBox box, int grid_size,
                                           Apply apply, bool check_linearity,
                                           unsigned seed)
    : box_(box.n, box.K, 0), grid_size_(grid_size), apply_(std::move(apply)) {
    if (check_linearity) {
        std::mt19937 rng(seed + 101);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        auto rand_coeffs = [&] {
            std::vector<cplx> c(box_.size());
            for (auto& v : c) v = cplx(d(rng), d(rng));
            return c;
        };
        for (int rep = 0; rep < 2; ++rep) {
            auto cu = rand_coeffs();
            auto cv = rand_coeffs();
            cplx lam(d(rng), d(rng));
            std::vector<cplx> cw(cu.size());
            for (std::size_t i = 0; i < cw.size(); ++i) cw[i] = cu[i] + lam * cv[i];
            auto au = apply_(GridFunction::from_coefficients(box_, grid_size_, cu));
            auto av = apply_(GridFunction::from_coefficients(box_, grid_size_, cv));
            auto aw = apply_(GridFunction::from_coefficients(box_, grid_size_, cw));
            double dev = 0, scale = 1;
            for (std::size_t i = 0; i < cw.size(); ++i) {
                cplx rhs = au.coefficients()[i] + lam * av.coefficients()[i];
                dev = std::max(dev, std::abs(aw.coefficients()[i] - rhs));
                scale = std::max(scale, std::abs(rhs));
            }
            if (dev > 1e-10 * scale)
                throw precondition_error("operator handle failed the linearity check");
        }
    }
}

GridFunction LinearOperatorHandle::operator()(const GridFunction& u) const {
    if (u.box().K != box_.K || u.grid_size() != grid_size_ || u.dim() != box_.n)
        throw config_error("operator applied to a mismatched grid function");
    return apply_(u);
}

GridFunction apply_pdo(const SymbolTable& a, const GridFunction& u,
                       ApplyReport* report) {
    if (a.dim() != u.dim() || a.grid_size() != u.grid_size())
        throw config_error("symbol and grid function live on different grids");
    if (a.box().ext() < u.box().K)
        throw config_error("symbol box does not cover the function band");
    std::vector<cplx> out(u.grid_total(), cplx(0));
    // fixed lexicographic accumulation over xi keeps results bit-stable
    for (const auto& xi : u.box().points()) {
        cplx uc = u.coeff(xi);
        if (uc == cplx(0)) continue;
        const cplx* row = a.row(xi);
        auto phs = axis_phasors(xi, u.grid_size(), +1);
        for_each_phase(phs, u.grid_size(),
                       [&](std::size_t i, cplx p) { out[i] += p * row[i] * uc; });
    }
    double discarded = 0;
    auto res = GridFunction::from_samples(u.box(), u.grid_size(), std::move(out),
                                          &discarded);
    if (report) report->discarded_mass = discarded;
    return res;
}

SymbolTable extract_symbol(const LinearOperatorHandle& A, const FrequencyBox& box,
                           int grid_size) {
    if (box.n != A.box().n || grid_size != A.grid_size())
        throw config_error("extraction grid mismatch");
    if (box.ext() > A.box().K)
        throw config_error("extraction box exceeds the operator's working box");
    SymbolTable out(box, grid_size, SymbolOrder{});
    for (const auto& xi : box.points()) {
        auto image = A(GridFunction::basis(A.box(), grid_size, xi));
        const auto& samples = image.samples();
        cplx* dst = out.row(xi);
        auto phs = axis_phasors(xi, grid_size, -1);
        for_each_phase(phs, grid_size,
                       [&](std::size_t i, cplx p) { dst[i] = p * samples[i]; });
    }
    return out;
}

LinearOperatorHandle pdo_operator(const SymbolTable& a) {
    FrequencyBox box(a.dim(), a.box().K, 0);
    return LinearOperatorHandle(
        box, a.grid_size(), [a](const GridFunction& u) { return apply_pdo(a, u); },
        /*check_linearity=*/false);
}

GridFunction apply_amplitude(const AmplitudeTable& a, const GridFunction& u,
                             ApplyReport* report) {
    if (a.dim() != u.dim() || a.grid_size() != u.grid_size())
        throw config_error("amplitude and grid function live on different grids");
    if (a.box().ext() < u.box().K)
        throw config_error("amplitude box does not cover the function band");
    const std::size_t total = u.grid_total();
    const auto& uy = u.samples();
    std::vector<cplx> out(total, cplx(0));
    const double quad = 1.0 / double(total);  // dbar y on the periodic grid
    std::vector<cplx> weighted(total);
    for (const auto& xi : u.box().points()) {
        auto phs = axis_phasors(xi, u.grid_size(), +1);
        // e^{-i y.xi} u(y) dbar y weights
        for_each_phase(phs, u.grid_size(), [&](std::size_t yf, cplx p) {
            weighted[yf] = std::conj(p) * uy[yf] * quad;
        });
        for_each_phase(phs, u.grid_size(), [&](std::size_t xf, cplx p) {
            const cplx* row = a.y_row(xi, xf);
            cplx acc = 0;
            for (std::size_t yf = 0; yf < total; ++yf) acc += row[yf] * weighted[yf];
            out[xf] += p * acc;
        });
    }
    double discarded = 0;
    auto res = GridFunction::from_samples(u.box(), u.grid_size(), std::move(out),
                                          &discarded);
    if (report) report->discarded_mass = discarded;
    return res;
}

cplx KernelTable::schwartz_at(std::size_t x_flat, std::size_t y_flat) const {
    std::size_t rows = pow_size(n, grid_size);
    return schwartz[x_flat * rows + y_flat];
}

cplx KernelTable::convolution_at(std::size_t x_flat, std::size_t v_flat) const {
    std::size_t rows = pow_size(n, grid_size);
    return convolution[x_flat * rows + v_flat];
}

double KernelTable::consistency_defect() const {
    std::size_t rows = pow_size(n, grid_size);
    double dev = 0;
    for (std::size_t xf = 0; xf < rows; ++xf)
        for (std::size_t yf = 0; yf < rows; ++yf) {
            std::size_t vf = wrap_difference(xf, yf, n, grid_size);
            dev = std::max(dev, std::abs(schwartz[xf * rows + yf] -
                                         convolution[xf * rows + vf]));
        }
    return dev;
}

KernelTable kernel_of(const SymbolTable& a) {
    KernelTable k;
    k.n = a.dim();
    k.grid_size = a.grid_size();
    std::size_t rows = pow_size(k.n, k.grid_size);
    k.convolution.assign(rows * rows, cplx(0));
    // k_A(x, v) = sum_xi e^{i v.xi} a(x, xi) per x-row
    for (const auto& xi : a.box().points()) {
        auto phs = axis_phasors(xi, k.grid_size, +1);
        std::vector<cplx> synth(rows);
        for_each_phase(phs, k.grid_size, [&](std::size_t vf, cplx p) { synth[vf] = p; });
        for (std::size_t xf = 0; xf < rows; ++xf) {
            cplx av = a.value(xi, xf);
            if (av == cplx(0)) continue;
            cplx* dst = k.convolution.data() + xf * rows;
            for (std::size_t vf = 0; vf < rows; ++vf) dst[vf] += synth[vf] * av;
        }
    }
    k.schwartz.assign(rows * rows, cplx(0));
    for (std::size_t xf = 0; xf < rows; ++xf)
        for (std::size_t yf = 0; yf < rows; ++yf)
            k.schwartz[xf * rows + yf] =
                k.convolution[xf * rows + wrap_difference(xf, yf, k.n, k.grid_size)];
    return k;
}

GridFunction apply_kernel(const KernelTable& k, const GridFunction& u,
                          const FrequencyBox& box) {
    if (k.grid_size != u.grid_size() || k.n != u.dim())
        throw config_error("kernel grid mismatch");
    std::size_t rows = pow_size(k.n, k.grid_size);
    const auto& uy = u.samples();
    std::vector<cplx> out(rows, cplx(0));
    double quad = 1.0 / double(rows);
    for (std::size_t xf = 0; xf < rows; ++xf) {
        cplx acc = 0;
        for (std::size_t yf = 0; yf < rows; ++yf)
            acc += k.schwartz[xf * rows + yf] * uy[yf];
        out[xf] = acc * quad;
    }
    return GridFunction::from_samples(box, u.grid_size(), std::move(out));
}

namespace {
std::atomic<int> worker_threads{1};
}  // namespace

void set_threads(int k) { worker_threads.store(std::max(1, k)); }
int threads() { return worker_threads.load(); }

std::vector<cplx> assemble_matrix(const LinearOperatorHandle& A) {
    const auto& box = A.box();
    std::size_t dim = box.size();
    std::vector<cplx> mat(dim * dim, cplx(0));
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t col = begin; col < end; ++col) {
            auto image = A(GridFunction::basis(box, A.grid_size(), box.point(col)));
            for (std::size_t row = 0; row < dim; ++row)
                mat[row * dim + col] = image.coefficients()[row];
        }
    };
    int workers = int(std::min<std::size_t>(std::size_t(threads()), dim));
    if (workers <= 1) {
        fill(0, dim);
        return mat;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (dim + std::size_t(workers) - 1) / std::size_t(workers);
    for (int w = 0; w < workers; ++w) {
        std::size_t begin = std::size_t(w) * chunk;
        std::size_t end = std::min(dim, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fill, begin, end);
    }
    for (auto& t : pool) t.join();
    return mat;
}

}  // namespace torus
