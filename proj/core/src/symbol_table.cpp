#include "torus/symbol_table.hpp"

#include <cmath>

#include "torus/fft.hpp"

namespace torus {

long fft_bin_frequency(long k, int N) { return (k <= N / 2) ? k : k - N; }

void apply_x_multiplier(cplx* row, int n, int N,
                        const std::function<cplx(const LatticePoint&)>& mult) {
    std::size_t total = 1;
    for (int j = 0; j < n; ++j) total *= static_cast<std::size_t>(N);
    std::vector<cplx> work(row, row + total);
    fft::dft(work, grid_dims(n, N), -1);
    std::vector<long> eta(n);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i;
        for (int j = n - 1; j >= 0; --j) {
            eta[j] = fft_bin_frequency(static_cast<long>(rem % N), N);
            rem /= N;
        }
        work[i] *= mult(LatticePoint(eta));
    }
    fft::dft(work, grid_dims(n, N), +1);
    double scale = 1.0 / double(total);
    for (std::size_t i = 0; i < total; ++i) row[i] = work[i] * scale;
}

namespace {

cplx falling_multiplier(const LatticePoint& eta, const MultiIndex& alpha, int sign) {
    std::vector<long> s(eta.entries());
    for (auto& e : s) e *= sign;
    return cplx(double(falling_factorial(LatticePoint(std::move(s)), alpha)));
}

cplx partial_multiplier(const LatticePoint& eta, const MultiIndex& beta) {
    cplx m = 1.0;
    for (int j = 0; j < eta.dim(); ++j)
        for (int k = 0; k < beta[j]; ++k) m *= cplx(0.0, double(eta[j]));
    return m;
}

double row_tail_fraction(const cplx* row, int n, int N) {
    std::size_t total = 1;
    for (int j = 0; j < n; ++j) total *= static_cast<std::size_t>(N);
    std::vector<cplx> work(row, row + total);
    fft::dft(work, grid_dims(n, N), -1);
    double tail = 0, whole = 0;
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i;
        bool high = false;
        for (int j = n - 1; j >= 0; --j) {
            long f = fft_bin_frequency(static_cast<long>(rem % N), N);
            rem /= N;
            if (std::labs(f) > N / 3) high = true;
        }
        whole += std::norm(work[i]);
        if (high) tail += std::norm(work[i]);
    }
    return whole > 0 ? std::sqrt(tail / whole) : 0.0;
}

}  // namespace

SymbolTable::SymbolTable(FrequencyBox box, int grid_size, SymbolOrder order)
    : box_(box), grid_size_(grid_size), order_(order) {
    if (grid_size_ < 3) throw config_error("grid size must be >= 3");
    grid_total_ = 1;
    for (int j = 0; j < box_.n; ++j) grid_total_ *= static_cast<std::size_t>(grid_size_);
    if (double(grid_total_) * double(box_.size()) > 2.5e8)
        throw config_error("symbol table too large");
    values_.assign(box_.size() * grid_total_, cplx(0));
}

std::vector<double> SymbolTable::grid_point(std::size_t x_flat) const {
    std::vector<double> x(box_.n);
    for (int j = box_.n - 1; j >= 0; --j) {
        x[j] = grid_coord(static_cast<long>(x_flat % grid_size_), grid_size_);
        x_flat /= grid_size_;
    }
    return x;
}

void SymbolTable::check_rows() const {
    for (const auto& xi : box_.points()) {
        double frac = row_tail_fraction(row(xi), box_.n, grid_size_);
        if (frac > smoothness_tol)
            throw precondition_error(
                "symbol x-row fails the smooth-periodicity tail check");
    }
}

SymbolTable SymbolTable::from_rule(
    FrequencyBox box, int grid_size, SymbolOrder order,
    const std::function<cplx(const std::vector<double>&, const LatticePoint&)>& rule,
    bool check_smoothness) {
    SymbolTable t(box, grid_size, order);
    for (const auto& xi : box.points()) {
        cplx* r = t.row(xi);
        for (std::size_t i = 0; i < t.grid_total_; ++i) r[i] = rule(t.grid_point(i), xi);
    }
    if (check_smoothness) t.check_rows();
    return t;
}

SymbolTable SymbolTable::from_values(FrequencyBox box, int grid_size, SymbolOrder order,
                                     std::vector<cplx> values, bool check_smoothness) {
    SymbolTable t(box, grid_size, order);
    if (values.size() != t.values_.size())
        throw config_error("value vector does not match table shape");
    t.values_ = std::move(values);
    if (check_smoothness) t.check_rows();
    return t;
}

SymbolTable SymbolTable::falling_x_derivative(const MultiIndex& alpha, int sign) const {
    SymbolTable out(*this);
    for (const auto& xi : box_.points())
        apply_x_multiplier(out.row(xi), box_.n, grid_size_,
                           [&](const LatticePoint& eta) {
                               return falling_multiplier(eta, alpha, sign);
                           });
    return out;
}

SymbolTable SymbolTable::x_partial(const MultiIndex& beta) const {
    SymbolTable out(*this);
    for (const auto& xi : box_.points())
        apply_x_multiplier(out.row(xi), box_.n, grid_size_,
                           [&](const LatticePoint& eta) {
                               return partial_multiplier(eta, beta);
                           });
    return out;
}

SymbolTable SymbolTable::forward_xi_difference(const MultiIndex& alpha) const {
    if (alpha.order() > box_.margin)
        throw box_error("xi-difference exceeds the table margin");
    SymbolTable out(box_.with_margin(box_.margin - alpha.order()), grid_size_, order_);
    for (const auto& xi : out.box_.points()) {
        cplx* dst = out.row(xi);
        for (std::size_t i = 0; i < grid_total_; ++i) dst[i] = 0;
        for (const auto& beta : sub_indices(alpha)) {
            double sign = ((alpha.order() - beta.order()) % 2 == 0) ? 1.0 : -1.0;
            double w = sign * double(binomial(alpha, beta));
            const cplx* src = row(xi.shifted(beta));
            for (std::size_t i = 0; i < grid_total_; ++i) dst[i] += w * src[i];
        }
    }
    return out;
}

SymbolTable SymbolTable::conjugated() const {
    SymbolTable out(*this);
    for (auto& v : out.values_) v = std::conj(v);
    return out;
}

SymbolTable SymbolTable::restricted(const FrequencyBox& smaller) const {
    if (smaller.n != box_.n || smaller.ext() > box_.ext() || smaller.K > box_.K)
        throw config_error("restriction target is not a sub-box");
    SymbolTable out(smaller, grid_size_, order_);
    for (const auto& xi : smaller.points()) {
        const cplx* src = row(xi);
        cplx* dst = out.row(xi);
        for (std::size_t i = 0; i < grid_total_; ++i) dst[i] = src[i];
    }
    return out;
}

SymbolTable& SymbolTable::operator+=(const SymbolTable& other) {
    if (!box_.same_extent(other.box_) || grid_size_ != other.grid_size_)
        throw config_error("symbol table shape mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

SymbolTable& SymbolTable::operator-=(const SymbolTable& other) {
    if (!box_.same_extent(other.box_) || grid_size_ != other.grid_size_)
        throw config_error("symbol table shape mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

SymbolTable& SymbolTable::operator*=(cplx scale) {
    for (auto& v : values_) v *= scale;
    return *this;
}

SymbolTable SymbolTable::product(const SymbolTable& a, const SymbolTable& b) {
    if (a.box_.n != b.box_.n || a.box_.K != b.box_.K || a.grid_size_ != b.grid_size_)
        throw config_error("symbol product shape mismatch");
    int margin = std::min(a.box_.margin, b.box_.margin);
    SymbolOrder ord{a.order_.m + b.order_.m, std::min(a.order_.rho, b.order_.rho),
                    std::max(a.order_.delta, b.order_.delta)};
    SymbolTable out(a.box_.with_margin(margin), a.grid_size_, ord);
    for (const auto& xi : out.box_.points()) {
        const cplx* ra = a.row(xi);
        const cplx* rb = b.row(xi);
        cplx* dst = out.row(xi);
        for (std::size_t i = 0; i < out.grid_total_; ++i) dst[i] = ra[i] * rb[i];
    }
    return out;
}

double SymbolTable::max_abs() const {
    double m = 0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

double SymbolTable::max_abs_core() const {
    double m = 0;
    for (const auto& xi : box_.core_points()) {
        const cplx* r = row(xi);
        for (std::size_t i = 0; i < grid_total_; ++i) m = std::max(m, std::abs(r[i]));
    }
    return m;
}

std::vector<std::vector<cplx>> SymbolTable::x_coefficients() const {
    std::vector<std::vector<cplx>> out;
    out.reserve(box_.size());
    double scale = 1.0 / double(grid_total_);
    for (const auto& xi : box_.points()) {
        std::vector<cplx> work(row(xi), row(xi) + grid_total_);
        fft::dft(work, grid_dims(box_.n, grid_size_), -1);
        for (auto& w : work) w *= scale;
        out.push_back(std::move(work));
    }
    return out;
}

AmplitudeTable::AmplitudeTable(FrequencyBox box, int grid_size, SymbolOrder order)
    : box_(box), grid_size_(grid_size), order_(order) {
    if (grid_size_ < 3) throw config_error("grid size must be >= 3");
    grid_total_ = 1;
    for (int j = 0; j < box_.n; ++j) grid_total_ *= static_cast<std::size_t>(grid_size_);
    double total = double(grid_total_) * double(grid_total_) * double(box_.size());
    if (total > 2.5e8) throw config_error("amplitude table too large");
    values_.assign(box_.size() * grid_total_ * grid_total_, cplx(0));
}

AmplitudeTable AmplitudeTable::from_rule(
    FrequencyBox box, int grid_size, SymbolOrder order,
    const std::function<cplx(const std::vector<double>&, const std::vector<double>&,
                             const LatticePoint&)>& rule,
    bool check_smoothness) {
    AmplitudeTable t(box, grid_size, order);
    for (const auto& xi : box.points())
        for (std::size_t xf = 0; xf < t.grid_total_; ++xf) {
            cplx* r = t.y_row(xi, xf);
            auto x = unflatten_grid_point(box.n, grid_size, xf);
            for (std::size_t yf = 0; yf < t.grid_total_; ++yf)
                r[yf] = rule(x, unflatten_grid_point(box.n, grid_size, yf), xi);
        }
    if (check_smoothness) {
        for (const auto& xi : box.points())
            for (std::size_t xf = 0; xf < t.grid_total_; ++xf)
                if (row_tail_fraction(t.y_row(xi, xf), box.n, grid_size) >
                    SymbolTable::smoothness_tol)
                    throw precondition_error(
                        "amplitude y-row fails the smooth-periodicity tail check");
    }
    return t;
}

AmplitudeTable AmplitudeTable::from_symbol(const SymbolTable& s, int slot) {
    AmplitudeTable t(s.box(), s.grid_size(), s.order());
    for (const auto& xi : s.box().points()) {
        const cplx* src = s.row(xi);
        for (std::size_t xf = 0; xf < t.grid_total_; ++xf) {
            cplx* r = t.y_row(xi, xf);
            if (slot == 0) {
                for (std::size_t yf = 0; yf < t.grid_total_; ++yf) r[yf] = src[xf];
            } else {
                for (std::size_t yf = 0; yf < t.grid_total_; ++yf) r[yf] = src[yf];
            }
        }
    }
    return t;
}

AmplitudeTable AmplitudeTable::falling_y_derivative(const MultiIndex& alpha,
                                                    int sign) const {
    AmplitudeTable out(*this);
    for (const auto& xi : box_.points())
        for (std::size_t xf = 0; xf < grid_total_; ++xf)
            apply_x_multiplier(out.y_row(xi, xf), box_.n, grid_size_,
                               [&](const LatticePoint& eta) {
                                   return falling_multiplier(eta, alpha, sign);
                               });
    return out;
}

AmplitudeTable AmplitudeTable::y_partial(const MultiIndex& beta) const {
    AmplitudeTable out(*this);
    for (const auto& xi : box_.points())
        for (std::size_t xf = 0; xf < grid_total_; ++xf)
            apply_x_multiplier(out.y_row(xi, xf), box_.n, grid_size_,
                               [&](const LatticePoint& eta) {
                                   return partial_multiplier(eta, beta);
                               });
    return out;
}

AmplitudeTable AmplitudeTable::forward_xi_difference(const MultiIndex& alpha) const {
    if (alpha.order() > box_.margin)
        throw box_error("xi-difference exceeds the table margin");
    AmplitudeTable out(box_.with_margin(box_.margin - alpha.order()), grid_size_, order_);
    std::size_t slab = grid_total_ * grid_total_;
    for (const auto& xi : out.box_.points()) {
        cplx* dst = out.values_.data() + out.box_.index(xi) * slab;
        for (std::size_t i = 0; i < slab; ++i) dst[i] = 0;
        for (const auto& beta : sub_indices(alpha)) {
            double sign = ((alpha.order() - beta.order()) % 2 == 0) ? 1.0 : -1.0;
            double w = sign * double(binomial(alpha, beta));
            const cplx* src = values_.data() + box_.index(xi.shifted(beta)) * slab;
            for (std::size_t i = 0; i < slab; ++i) dst[i] += w * src[i];
        }
    }
    return out;
}

AmplitudeTable AmplitudeTable::times_symbol_in_y(const SymbolTable& p) const {
    if (p.dim() != box_.n || p.grid_size() != grid_size_ || p.box().K != box_.K)
        throw config_error("amplitude/symbol shape mismatch");
    int margin = std::min(box_.margin, p.box().margin);
    SymbolOrder ord{order_.m + p.order().m, std::min(order_.rho, p.order().rho),
                    std::max(order_.delta, p.order().delta)};
    AmplitudeTable out(box_.with_margin(margin), grid_size_, ord);
    for (const auto& xi : out.box_.points()) {
        const cplx* prow = p.row(xi);
        for (std::size_t xf = 0; xf < grid_total_; ++xf) {
            const cplx* src = y_row(xi, xf);
            cplx* dst = out.y_row(xi, xf);
            for (std::size_t yf = 0; yf < grid_total_; ++yf)
                dst[yf] = src[yf] * prow[yf];
        }
    }
    return out;
}

SymbolTable AmplitudeTable::diagonal(SymbolOrder order) const {
    SymbolTable out(box_, grid_size_, order);
    for (const auto& xi : box_.points()) {
        cplx* dst = out.row(xi);
        for (std::size_t xf = 0; xf < grid_total_; ++xf) dst[xf] = value(xi, xf, xf);
    }
    return out;
}

AmplitudeTable& AmplitudeTable::operator+=(const AmplitudeTable& other) {
    if (!box_.same_extent(other.box_) || grid_size_ != other.grid_size_)
        throw config_error("amplitude table shape mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

AmplitudeTable& AmplitudeTable::operator*=(cplx scale) {
    for (auto& v : values_) v *= scale;
    return *this;
}

}  // namespace torus
