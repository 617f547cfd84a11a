#include "torus/lattice.hpp"

#include <cmath>
#include <sstream>

namespace torus {

namespace {

long long checked_mul(long long a, long long b) {
    long long out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw error("integer overflow in falling factorial");
    return out;
}

}  // namespace

LatticePoint LatticePoint::shifted(const MultiIndex& beta, int sign) const {
    if (beta.dim() != dim()) throw config_error("lattice/multi-index dimension mismatch");
    std::vector<long> e(entries_);
    for (int j = 0; j < dim(); ++j) e[j] += sign * beta[j];
    return LatticePoint(std::move(e));
}

LatticePoint LatticePoint::plus(const LatticePoint& other) const {
    if (other.dim() != dim()) throw config_error("lattice dimension mismatch");
    std::vector<long> e(entries_);
    for (int j = 0; j < dim(); ++j) e[j] += other.entries_[j];
    return LatticePoint(std::move(e));
}

double LatticePoint::norm2() const {
    double s = 0;
    for (long e : entries_) s += double(e) * double(e);
    return s;
}

double LatticePoint::norm() const { return std::sqrt(norm2()); }

double LatticePoint::bracket() const { return std::sqrt(1.0 + norm2()); }

LatticeFunction::LatticeFunction(int n, long sym_bound, Rule rule)
    : lo_(std::vector<long>(n, -sym_bound)),
      hi_(std::vector<long>(n, sym_bound)),
      rule_(std::move(rule)) {
    if (sym_bound < 0) throw config_error("negative lattice window");
}

LatticeFunction::LatticeFunction(LatticePoint lo, LatticePoint hi, Rule rule)
    : lo_(std::move(lo)), hi_(std::move(hi)), rule_(std::move(rule)) {
    if (lo_.dim() != hi_.dim()) throw config_error("lattice window dimension mismatch");
    for (int j = 0; j < lo_.dim(); ++j)
        if (lo_[j] > hi_[j]) throw config_error("empty lattice window");
}

bool LatticeFunction::contains(const LatticePoint& xi) const {
    if (xi.dim() != dim()) return false;
    for (int j = 0; j < dim(); ++j)
        if (xi[j] < lo_[j] || xi[j] > hi_[j]) return false;
    return true;
}

cplx LatticeFunction::operator()(const LatticePoint& xi) const {
    if (!contains(xi)) {
        std::ostringstream os;
        os << "lattice query outside declared window at (";
        for (int j = 0; j < xi.dim(); ++j) os << (j ? "," : "") << xi[j];
        os << ")";
        throw box_error(os.str());
    }
    return rule_(xi);
}

cplx forward_difference(const LatticeFunction& p, const MultiIndex& alpha,
                        const LatticePoint& xi) {
    cplx acc = 0;
    for (const auto& beta : sub_indices(alpha)) {
        double sign = ((alpha.order() - beta.order()) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * double(binomial(alpha, beta)) * p(xi.shifted(beta));
    }
    return acc;
}

cplx backward_difference(const LatticeFunction& p, const MultiIndex& alpha,
                         const LatticePoint& xi) {
    cplx acc = 0;
    for (const auto& beta : sub_indices(alpha)) {
        double sign = (beta.order() % 2 == 0) ? 1.0 : -1.0;
        acc += sign * double(binomial(alpha, beta)) * p(xi.shifted(beta, -1));
    }
    return acc;
}

long long falling_factorial(const LatticePoint& theta, const MultiIndex& alpha) {
    if (theta.dim() != alpha.dim()) throw config_error("dimension mismatch");
    long long prod = 1;
    for (int j = 0; j < theta.dim(); ++j)
        for (int k = 0; k < alpha[j]; ++k) prod = checked_mul(prod, theta[j] - k);
    return prod;
}

long long falling_factorial_over_factorial(const LatticePoint& theta,
                                           const MultiIndex& alpha) {
    if (theta.dim() != alpha.dim()) throw config_error("dimension mismatch");
    long long prod = 1;
    for (int j = 0; j < theta.dim(); ++j) {
        long long c = 1;
        for (int k = 0; k < alpha[j]; ++k) {
            c = checked_mul(c, theta[j] - k);
            c /= (k + 1);
        }
        prod = checked_mul(prod, c);
    }
    return prod;
}

DiscreteTaylor discrete_taylor(const LatticeFunction& p, const LatticePoint& xi,
                               const LatticePoint& theta, int order_bound) {
    if (order_bound < 1) throw config_error("discrete Taylor order must be >= 1");
    cplx sum = 0;
    for (const auto& alpha : multi_indices_below(xi.dim(), order_bound))
        sum += double(falling_factorial_over_factorial(theta, alpha)) *
               forward_difference(p, alpha, xi);
    cplx rem = p(xi.plus(theta)) - sum;
    return {sum, rem};
}

std::vector<LatticePoint> taylor_box(const LatticePoint& theta) {
    std::vector<LatticePoint> out;
    std::vector<long> cur(theta.dim());
    std::vector<long> lo(theta.dim()), hi(theta.dim());
    for (int j = 0; j < theta.dim(); ++j) {
        lo[j] = -std::labs(theta[j]);
        hi[j] = std::labs(theta[j]);
    }
    cur = lo;
    while (true) {
        out.emplace_back(cur);
        int j = theta.dim() - 1;
        while (j >= 0 && cur[j] == hi[j]) cur[j] = lo[j], --j;
        if (j < 0) break;
        ++cur[j];
    }
    return out;
}

double taylor_remainder_bound(const LatticeFunction& p, const LatticePoint& xi,
                              const LatticePoint& theta, int order_bound) {
    double bound = 0;
    auto box = taylor_box(theta);
    for (const auto& alpha : multi_indices_of_order(xi.dim(), order_bound)) {
        double worst = 0;
        for (const auto& nu : box)
            worst = std::max(worst, std::abs(forward_difference(p, alpha, xi.plus(nu))));
        bound += std::abs(double(falling_factorial(theta, alpha))) /
                 double(alpha.factorial()) * worst;
    }
    return bound;
}

}  // namespace torus
