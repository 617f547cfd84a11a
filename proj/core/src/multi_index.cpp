#include "torus/multi_index.hpp"

#include <limits>

namespace torus {

namespace {

long long checked_mul(long long a, long long b) {
    long long out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw error("integer overflow in multi-index arithmetic");
    return out;
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    int total = 0;
    for (int e : entries_) {
        if (e < 0) throw config_error("multi-index entries must be non-negative");
        total += e;
    }
    if (total > max_order)
        throw config_error("multi-index order exceeds cap of 12");
}

MultiIndex MultiIndex::zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }

MultiIndex MultiIndex::unit(int n, int axis) {
    std::vector<int> e(n, 0);
    e[axis] = 1;
    return MultiIndex(std::move(e));
}

int MultiIndex::order() const {
    int total = 0;
    for (int e : entries_) total += e;
    return total;
}

bool MultiIndex::leq(const MultiIndex& other) const {
    if (dim() != other.dim()) throw config_error("multi-index dimension mismatch");
    for (int j = 0; j < dim(); ++j)
        if (entries_[j] > other.entries_[j]) return false;
    return true;
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
    if (dim() != other.dim()) throw config_error("multi-index dimension mismatch");
    std::vector<int> e(entries_);
    for (int j = 0; j < dim(); ++j) e[j] += other.entries_[j];
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::minus(const MultiIndex& other) const {
    if (!other.leq(*this)) throw config_error("multi-index subtraction underflow");
    std::vector<int> e(entries_);
    for (int j = 0; j < dim(); ++j) e[j] -= other.entries_[j];
    return MultiIndex(std::move(e));
}

long long MultiIndex::factorial() const {
    long long f = 1;
    for (int e : entries_)
        for (int k = 2; k <= e; ++k) f = checked_mul(f, k);
    return f;
}

long long binomial(const MultiIndex& alpha, const MultiIndex& beta) {
    if (!beta.leq(alpha)) throw config_error("binomial requires beta <= alpha");
    long long prod = 1;
    for (int j = 0; j < alpha.dim(); ++j) {
        long long c = 1;
        for (int i = 0; i < beta[j]; ++i) {
            c = checked_mul(c, alpha[j] - i);
            c /= (i + 1);  // partial products of consecutive integers are divisible
        }
        prod = checked_mul(prod, c);
    }
    return prod;
}

namespace {

void enumerate_of_order(int n, int order, std::vector<int>& cur,
                        std::vector<MultiIndex>& out) {
    if (static_cast<int>(cur.size()) == n - 1) {
        cur.push_back(order);
        out.emplace_back(cur);
        cur.pop_back();
        return;
    }
    for (int k = order; k >= 0; --k) {
        cur.push_back(k);
        enumerate_of_order(n, order - k, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(int n, int order) {
    std::vector<MultiIndex> out;
    std::vector<int> cur;
    enumerate_of_order(n, order, cur, out);
    return out;
}

std::vector<MultiIndex> multi_indices_below(int n, int order_bound) {
    std::vector<MultiIndex> out;
    for (int m = 0; m < order_bound; ++m) {
        auto grade = multi_indices_of_order(n, m);
        out.insert(out.end(), grade.begin(), grade.end());
    }
    return out;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& alpha) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(alpha.dim(), 0);
    while (true) {
        out.emplace_back(cur);
        int j = alpha.dim() - 1;
        while (j >= 0 && cur[j] == alpha[j]) cur[j--] = 0;
        if (j < 0) break;
        ++cur[j];
    }
    return out;
}

}  // namespace torus
