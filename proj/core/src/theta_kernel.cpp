#include "torus/theta_kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace torus {

namespace {

double bump(double x) {
    double t = x / two_pi;
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

std::mutex cache_mutex;
std::map<std::tuple<int, long, long, int>, std::shared_ptr<const ThetaKernel>> cache;

}  // namespace

double ThetaKernel::theta_1d(double x) {
    if (std::abs(x) >= two_pi) return 0.0;
    double s = (x >= 0) ? 1.0 : -1.0;
    double num = bump(x);
    return num / (num + bump(x - two_pi * s));
}

ThetaKernel::ThetaKernel(int n, Params params) : n_(n), params_(params) {
    if (n_ < 1 || n_ > 3) throw config_error("dimension must be 1, 2 or 3");
    if (params_.cutoff < 4.0) throw config_error("kernel cutoff H must be >= 4");
    tabulate();
    certify();
}

std::shared_ptr<const ThetaKernel> ThetaKernel::build(int n) { return build(n, Params{}); }

std::shared_ptr<const ThetaKernel> ThetaKernel::build(int n, Params params) {
    auto key = std::make_tuple(n, std::lround(params.cutoff * 1024.0),
                               std::lround(params.step * (1 << 20)),
                               params.quadrature_points);
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto kernel = std::shared_ptr<const ThetaKernel>(new ThetaKernel(n, params));
    cache[key] = kernel;
    return kernel;
}

std::shared_ptr<const ThetaKernel> ThetaKernel::build(int n, double cutoff) {
    Params p;
    p.cutoff = cutoff;
    // the bump transform decays like exp(-c sqrt(xi)); the enforced bound
    // tracks the cutoff with a generous envelope
    p.tail_tol = std::max(1e-11, 2.0 * std::exp(-2.2 * std::sqrt(cutoff)));
    return build(n, p);
}

void ThetaKernel::tabulate() {
    const int M = params_.quadrature_points;
    // trapezoid weights of theta_1 on [-2pi, 2pi]; all endpoint derivatives
    // vanish, so the rule is spectrally accurate
    std::vector<double> tw(M + 1), tx(M + 1);
    for (int i = 0; i <= M; ++i) {
        tx[i] = -two_pi + 4.0 * pi * double(i) / double(M);
        tw[i] = theta_1d(tx[i]) * (4.0 * pi / double(M)) / two_pi;
        if (i == 0 || i == M) tw[i] *= 0.5;
    }
    std::size_t count = static_cast<std::size_t>(std::ceil(params_.cutoff / params_.step)) + 1;
    nodes_.assign(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        double xi = double(k) * params_.step;
        double acc = 0;
        for (int i = 0; i <= M; ++i) acc += tw[i] * std::cos(tx[i] * xi);
        nodes_[k] = acc;
    }
    // natural cubic spline second derivatives (tridiagonal solve)
    std::size_t m = nodes_.size();
    second_.assign(m, 0.0);
    if (m >= 3) {
        std::vector<double> c(m, 0.0), d(m, 0.0);
        double h = params_.step;
        for (std::size_t i = 1; i + 1 < m; ++i) {
            double rhs = 6.0 * (nodes_[i + 1] - 2.0 * nodes_[i] + nodes_[i - 1]) / (h * h);
            double piv = 4.0 - c[i - 1];
            c[i] = 1.0 / piv;
            d[i] = (rhs - d[i - 1]) / piv;
        }
        for (std::size_t i = m - 2; i >= 1; --i) {
            second_[i] = d[i] - c[i] * second_[i + 1];
            if (i == 1) break;
        }
    }
}

double ThetaKernel::f_hat_1d(double xi) const {
    double q = std::abs(xi);
    if (q >= params_.cutoff) return 0.0;
    double t = q / params_.step;
    std::size_t k = static_cast<std::size_t>(t);
    if (k + 1 >= nodes_.size()) return 0.0;
    double u = t - double(k);
    double h = params_.step;
    double a = 1.0 - u, b = u;
    return a * nodes_[k] + b * nodes_[k + 1] +
           ((a * a * a - a) * second_[k] + (b * b * b - b) * second_[k + 1]) * h * h / 6.0;
}

double ThetaKernel::f_hat(const std::vector<double>& xi) const {
    if (static_cast<int>(xi.size()) != n_) throw config_error("dimension mismatch");
    double v = 1.0;
    for (double q : xi) v *= f_hat_1d(q);
    return v;
}

void ThetaKernel::certify() {
    // interpolation property at integers inside the window
    double defect = 0;
    for (long k = 0; k <= long(params_.cutoff); ++k) {
        double expect = (k == 0) ? 1.0 : 0.0;
        defect = std::max(defect, std::abs(f_hat_1d(double(k)) - expect));
    }
    interpolation_defect_ = defect;
    if (defect > 1e-8)
        throw precondition_error("theta kernel interpolation check failed");

    // P theta == 1 at 50 deterministic sample points
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(0.0, two_pi);
    double sdefect = 0;
    for (int i = 0; i < 50; ++i) {
        double x = dist(rng);
        double s = theta_1d(x) + theta_1d(x - two_pi);
        sdefect = std::max(sdefect, std::abs(s - 1.0));
    }
    shift_sum_defect_ = sdefect;
    if (sdefect > 1e-10)
        throw precondition_error("theta kernel shift-sum check failed");

    // measured tail near the cutoff
    double tail = 0;
    for (int i = 0; i <= 64; ++i) {
        double q = params_.cutoff - 1.0 + double(i) / 64.0;
        if (q >= 0) tail = std::max(tail, std::abs(f_hat_1d(q)));
    }
    measured_tail_ = tail;
    if (tail > params_.tail_tol)
        throw precondition_error("theta kernel tail exceeds the declared bound");
}

}  // namespace torus
