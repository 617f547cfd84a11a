#pragma once

#include <functional>

#include "torus/multi_index.hpp"
#include "torus/types.hpp"

namespace torus {

// Point of the integer lattice Z^n.
class LatticePoint {
public:
    LatticePoint() = default;
    explicit LatticePoint(std::vector<long> entries) : entries_(std::move(entries)) {}
    static LatticePoint zero(int n) { return LatticePoint(std::vector<long>(n, 0)); }

    int dim() const { return static_cast<int>(entries_.size()); }
    long operator[](int j) const { return entries_[j]; }
    long& operator[](int j) { return entries_[j]; }
    const std::vector<long>& entries() const { return entries_; }

    bool operator==(const LatticePoint&) const = default;

    LatticePoint shifted(const MultiIndex& beta, int sign = +1) const;
    LatticePoint plus(const LatticePoint& other) const;

    double norm2() const;           // |xi|^2
    double norm() const;            // |xi|
    double bracket() const;         // <xi> = (1+|xi|^2)^{1/2}

private:
    std::vector<long> entries_;
};

// Evaluation rule Z^n -> C, valid on a declared inclusive window [lo, hi]
// per axis. Out-of-window queries throw box_error.
class LatticeFunction {
public:
    using Rule = std::function<cplx(const LatticePoint&)>;

    LatticeFunction(int n, long sym_bound, Rule rule);
    LatticeFunction(LatticePoint lo, LatticePoint hi, Rule rule);

    int dim() const { return lo_.dim(); }
    const LatticePoint& lo() const { return lo_; }
    const LatticePoint& hi() const { return hi_; }
    bool contains(const LatticePoint& xi) const;

    cplx operator()(const LatticePoint& xi) const;

private:
    LatticePoint lo_, hi_;
    Rule rule_;
};

// Iterated forward difference, explicit binomial expansion:
//   (tri^alpha p)(xi) = sum_{beta<=alpha} (-1)^{|alpha-beta|} C(alpha,beta) p(xi+beta)
cplx forward_difference(const LatticeFunction& p, const MultiIndex& alpha,
                        const LatticePoint& xi);

// Iterated backward difference; adjoint of the forward one under summation
// by parts.
cplx backward_difference(const LatticeFunction& p, const MultiIndex& alpha,
                         const LatticePoint& xi);

// Falling factorial theta^((alpha)) = prod_j theta_j (theta_j - 1) ... ;
// theta^((0)) = 1. Overflow-checked 64-bit.
long long falling_factorial(const LatticePoint& theta, const MultiIndex& alpha);

// Integer-exact theta^((alpha)) / alpha! (a product of generalized binomials).
long long falling_factorial_over_factorial(const LatticePoint& theta,
                                           const MultiIndex& alpha);

struct DiscreteTaylor {
    cplx partial_sum;  // sum_{|alpha|<M} theta^((alpha))/alpha! tri^alpha p(xi)
    cplx remainder;    // p(xi+theta) - partial_sum
};

DiscreteTaylor discrete_taylor(const LatticeFunction& p, const LatticePoint& xi,
                               const LatticePoint& theta, int order_bound);

// Computable remainder bound, always >= |remainder| from discrete_taylor:
//   sum_{|alpha|=M} |theta^((alpha))|/alpha! * max_{nu in Q(theta)} |tri^alpha p(xi+nu)|
double taylor_remainder_bound(const LatticeFunction& p, const LatticePoint& xi,
                              const LatticePoint& theta, int order_bound);

// All nu with |nu_j| <= |theta_j| (the discrete box Q(theta)).
std::vector<LatticePoint> taylor_box(const LatticePoint& theta);

}  // namespace torus
