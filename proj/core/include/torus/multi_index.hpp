#pragma once

#include <vector>

#include "torus/types.hpp"

namespace torus {

// Exponent/difference vector alpha in N_0^n. Total order |alpha| is capped
// at 12 so that factorials and falling factorials stay inside int64.
class MultiIndex {
public:
    static constexpr int max_order = 12;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    static MultiIndex zero(int n);
    static MultiIndex unit(int n, int axis);

    int dim() const { return static_cast<int>(entries_.size()); }
    int order() const;
    int operator[](int j) const { return entries_[j]; }
    const std::vector<int>& entries() const { return entries_; }

    bool operator==(const MultiIndex&) const = default;
    bool leq(const MultiIndex& other) const;  // componentwise <=
    MultiIndex plus(const MultiIndex& other) const;
    MultiIndex minus(const MultiIndex& other) const;  // requires other.leq(*this)

    long long factorial() const;  // alpha!

private:
    std::vector<int> entries_;
};

// Componentwise binomial C(alpha, beta); requires beta <= alpha.
long long binomial(const MultiIndex& alpha, const MultiIndex& beta);

// All alpha with |alpha| < M (graded, lexicographic within a grade).
std::vector<MultiIndex> multi_indices_below(int n, int order_bound);
// All alpha with |alpha| == M, lexicographic.
std::vector<MultiIndex> multi_indices_of_order(int n, int order);
// All beta <= alpha, lexicographic.
std::vector<MultiIndex> sub_indices(const MultiIndex& alpha);

}  // namespace torus
