#include "torus/euclidean.hpp"

#include <cmath>

namespace torus {

EuclideanSampledFunction::EuclideanSampledFunction(
    std::vector<std::array<double, 2>> support,
    std::function<cplx(const std::vector<double>&)> rule)
    : support_(std::move(support)), rule_(std::move(rule)) {
    if (support_.empty() || support_.size() > 3)
        throw config_error("dimension must be 1, 2 or 3");
    for (const auto& [a, b] : support_)
        if (!(a < b)) throw config_error("empty support interval");
}

EuclideanSampledFunction EuclideanSampledFunction::gaussian(std::vector<double> widths,
                                                            cplx amplitude,
                                                            double support_sigmas) {
    std::vector<std::array<double, 2>> support;
    for (double w : widths) {
        if (w <= 0) throw config_error("gaussian width must be positive");
        support.push_back({-support_sigmas * w, support_sigmas * w});
    }
    auto ws = widths;
    EuclideanSampledFunction f(std::move(support),
                               [ws, amplitude](const std::vector<double>& x) {
                                   double e = 0;
                                   for (std::size_t j = 0; j < ws.size(); ++j)
                                       e += x[j] * x[j] / (2.0 * ws[j] * ws[j]);
                                   return amplitude * std::exp(-e);
                               });
    f.gaussian_ = Gaussian{std::move(widths), amplitude};
    return f;
}

cplx EuclideanSampledFunction::operator()(const std::vector<double>& x) const {
    for (int j = 0; j < dim(); ++j)
        if (x[j] < support_[j][0] || x[j] > support_[j][1]) return cplx(0);
    return rule_(x);
}

double EuclideanSampledFunction::boundary_tail() const {
    // probe each face on a coarse lattice of the remaining axes
    double interior = 0, boundary = 0;
    const int probes = 33;
    std::vector<double> x(dim());
    // interior scale along the axes through the midpoint
    for (int j = 0; j < dim(); ++j) {
        for (int k = 0; k < dim(); ++k)
            x[k] = 0.5 * (support_[k][0] + support_[k][1]);
        for (int i = 0; i < probes; ++i) {
            x[j] = support_[j][0] +
                   (support_[j][1] - support_[j][0]) * double(i) / double(probes - 1);
            interior = std::max(interior, std::abs(rule_(x)));
        }
    }
    for (int j = 0; j < dim(); ++j) {
        for (int side = 0; side < 2; ++side) {
            for (int i = 0; i < probes; ++i) {
                for (int k = 0; k < dim(); ++k)
                    x[k] = support_[k][0] + (support_[k][1] - support_[k][0]) *
                                                double(i) / double(probes - 1);
                x[j] = support_[j][side];
                boundary = std::max(boundary, std::abs(rule_(x)));
            }
        }
    }
    return interior > 0 ? boundary / interior : 0.0;
}

namespace {

// trapezoid over the support with m intervals per axis
cplx trapezoid_ft(const EuclideanSampledFunction& f, const std::vector<double>& xi,
                  int m) {
    int n = f.dim();
    std::vector<double> h(n), x(n);
    for (int j = 0; j < n; ++j)
        h[j] = (f.support()[j][1] - f.support()[j][0]) / double(m);
    std::vector<int> idx(n, 0);
    cplx acc = 0;
    while (true) {
        double w = 1, phase = 0;
        for (int j = 0; j < n; ++j) {
            x[j] = f.support()[j][0] + h[j] * idx[j];
            w *= h[j] * ((idx[j] == 0 || idx[j] == m) ? 0.5 : 1.0);
            phase -= x[j] * xi[j];
        }
        acc += w * f(x) * std::polar(1.0, phase);
        int j = n - 1;
        while (j >= 0 && idx[j] == m) idx[j--] = 0;
        if (j < 0) break;
        ++idx[j];
    }
    return acc / std::pow(two_pi, n);
}

}  // namespace

cplx euclidean_ft(const EuclideanSampledFunction& f, const std::vector<double>& xi,
                  double tol) {
    if (static_cast<int>(xi.size()) != f.dim())
        throw config_error("frequency dimension mismatch");
    if (f.gaussian_tag()) {
        // F[e^{-x^2/(2w^2)}](xi) = w (2pi)^{-1/2} e^{-w^2 xi^2 / 2} per axis
        const auto& g = *f.gaussian_tag();
        cplx val = g.amplitude;
        for (int j = 0; j < f.dim(); ++j)
            val *= g.widths[j] / std::sqrt(two_pi) *
                   std::exp(-0.5 * g.widths[j] * g.widths[j] * xi[j] * xi[j]);
        return val;
    }
    int m = 64;
    cplx prev = trapezoid_ft(f, xi, m);
    const int max_m = f.dim() == 1 ? (1 << 20) : (1 << 11);
    while (m < max_m) {
        m *= 2;
        cplx cur = trapezoid_ft(f, xi, m);
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    throw accuracy_error("euclidean_ft quadrature did not reach tolerance");
}

GridFunction periodize(const EuclideanSampledFunction& f, const FrequencyBox& box,
                       int grid_size, double consistency_tol,
                       PeriodizeReport* report) {
    if (box.n != f.dim()) throw config_error("dimension mismatch");
    double tail = f.boundary_tail();
    if (tail > 1e-12)
        throw precondition_error("periodization input does not decay inside its support");

    // route 1: shift-sum samples on the grid
    GridFunction shape(FrequencyBox(box.n, box.K, 0), grid_size);
    std::vector<cplx> samples(shape.grid_total(), cplx(0));
    std::vector<long> klo(box.n), khi(box.n);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto x = shape.grid_point(i);
        for (int j = 0; j < box.n; ++j) {
            klo[j] = static_cast<long>(std::ceil((f.support()[j][0] - x[j]) / two_pi));
            khi[j] = static_cast<long>(std::floor((f.support()[j][1] - x[j]) / two_pi));
        }
        std::vector<long> k(klo);
        if ([&] {
                for (int j = 0; j < box.n; ++j)
                    if (klo[j] > khi[j]) return true;
                return false;
            }())
            continue;
        std::vector<double> y(box.n);
        while (true) {
            for (int j = 0; j < box.n; ++j) y[j] = x[j] + two_pi * double(k[j]);
            samples[i] += f(y);
            int j = box.n - 1;
            while (j >= 0 && k[j] == khi[j]) k[j] = klo[j], --j;
            if (j < 0) break;
            ++k[j];
        }
    }
    GridFunction route1 = GridFunction::from_samples(FrequencyBox(box.n, box.K, 0),
                                                     grid_size, std::move(samples));

    // route 2: restriction of the Euclidean transform to the lattice
    GridFunction route2(FrequencyBox(box.n, box.K, 0), grid_size);
    std::vector<double> xi_real(box.n);
    for (const auto& xi : route2.box().points()) {
        for (int j = 0; j < box.n; ++j) xi_real[j] = double(xi[j]);
        route2.set_coeff(xi, euclidean_ft(f, xi_real));
    }

    double dev = 0;
    for (std::size_t i = 0; i < route1.coefficients().size(); ++i)
        dev = std::max(dev,
                       std::abs(route1.coefficients()[i] - route2.coefficients()[i]));
    if (report) {
        report->route_disagreement = dev;
        report->boundary_tail = tail;
    }
    if (dev > consistency_tol)
        throw precondition_error(
            "periodization routes disagree: shift-sum vs Fourier restriction");
    return route2;
}

}  // namespace torus
