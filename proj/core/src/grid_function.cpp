#include "torus/grid_function.hpp"

#include <cmath>

#include "torus/fft.hpp"

namespace torus {

FrequencyBox::FrequencyBox(int n_, int K_, int margin_) : n(n_), K(K_), margin(margin_) {
    if (n < 1 || n > 3) throw config_error("dimension must be 1, 2 or 3");
    if (K < 1) throw config_error("frequency cutoff K must be >= 1");
    if (margin < 0) throw config_error("difference margin must be >= 0");
    double total = std::pow(double(side()), n);
    if (total > 4e8) throw config_error("frequency box too large");
}

std::size_t FrequencyBox::size() const {
    std::size_t s = 1;
    for (int j = 0; j < n; ++j) s *= static_cast<std::size_t>(side());
    return s;
}

bool FrequencyBox::contains_core(const LatticePoint& xi) const {
    if (xi.dim() != n) return false;
    for (int j = 0; j < n; ++j)
        if (std::labs(xi[j]) > K) return false;
    return true;
}

bool FrequencyBox::contains(const LatticePoint& xi) const {
    if (xi.dim() != n) return false;
    for (int j = 0; j < n; ++j)
        if (std::labs(xi[j]) > ext()) return false;
    return true;
}

std::size_t FrequencyBox::index(const LatticePoint& xi) const {
    if (!contains(xi)) throw box_error("lattice point outside frequency box");
    std::size_t idx = 0;
    for (int j = 0; j < n; ++j)
        idx = idx * static_cast<std::size_t>(side()) +
              static_cast<std::size_t>(xi[j] + ext());
    return idx;
}

LatticePoint FrequencyBox::point(std::size_t idx) const {
    std::vector<long> e(n);
    for (int j = n - 1; j >= 0; --j) {
        e[j] = static_cast<long>(idx % static_cast<std::size_t>(side())) - ext();
        idx /= static_cast<std::size_t>(side());
    }
    return LatticePoint(std::move(e));
}

std::vector<LatticePoint> FrequencyBox::points() const {
    std::vector<LatticePoint> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
    return out;
}

std::vector<LatticePoint> FrequencyBox::core_points() const {
    std::vector<LatticePoint> out;
    for (std::size_t i = 0; i < size(); ++i) {
        auto p = point(i);
        if (contains_core(p)) out.push_back(std::move(p));
    }
    return out;
}

int FrequencyBox::default_grid() const {
    int N = 1;
    while (N < 3 * K + 1) N *= 2;
    return N;
}

std::vector<int> grid_dims(int n, int N) { return std::vector<int>(n, N); }

std::vector<double> unflatten_grid_point(int n, int N, std::size_t flat) {
    std::vector<double> x(n);
    for (int j = n - 1; j >= 0; --j) {
        x[j] = grid_coord(static_cast<long>(flat % static_cast<std::size_t>(N)), N);
        flat /= static_cast<std::size_t>(N);
    }
    return x;
}

GridFunction::GridFunction(FrequencyBox box, int grid_size)
    : box_(box), grid_size_(grid_size) {
    if (box_.margin != 0)
        throw config_error("grid functions carry no difference margin");
    if (grid_size_ < 2 * box_.K + 1)
        throw config_error("grid size must be >= 2K+1");
    coeffs_.assign(box_.size(), cplx(0));
}

std::size_t GridFunction::grid_total() const {
    std::size_t t = 1;
    for (int j = 0; j < dim(); ++j) t *= static_cast<std::size_t>(grid_size_);
    return t;
}

GridFunction GridFunction::from_coefficients(FrequencyBox box, int grid_size,
                                             std::vector<cplx> coeffs) {
    GridFunction u(box, grid_size);
    if (coeffs.size() != u.coeffs_.size())
        throw config_error("coefficient vector size does not match box");
    u.coeffs_ = std::move(coeffs);
    return u;
}

GridFunction GridFunction::from_samples(FrequencyBox box, int grid_size,
                                        std::vector<cplx> samples, double* discarded) {
    GridFunction u(box, grid_size);
    if (samples.size() != u.grid_total())
        throw config_error("sample vector size does not match grid");
    auto spectrum = samples;  // forward DFT in place
    fft::dft(spectrum, grid_dims(box.n, grid_size), -1);
    double scale = 1.0 / double(u.grid_total());
    double kept = 0, total = 0;
    for (auto& c : spectrum) total += std::norm(c);
    for (std::size_t i = 0; i < u.coeffs_.size(); ++i) {
        auto xi = box.point(i);
        std::size_t bin = 0;
        for (int j = 0; j < box.n; ++j) {
            long m = xi[j] % grid_size;
            if (m < 0) m += grid_size;
            bin = bin * static_cast<std::size_t>(grid_size) + static_cast<std::size_t>(m);
        }
        u.coeffs_[i] = spectrum[bin] * scale;
        kept += std::norm(spectrum[bin]);
    }
    if (discarded) *discarded = std::sqrt(std::max(0.0, total - kept)) * scale;
    return u;
}

GridFunction GridFunction::basis(FrequencyBox box, int grid_size,
                                 const LatticePoint& xi) {
    GridFunction u(box, grid_size);
    u.set_coeff(xi, cplx(1));
    return u;
}

GridFunction GridFunction::from_rule(
    FrequencyBox box, int grid_size,
    const std::function<cplx(const std::vector<double>&)>& rule, double* discarded) {
    GridFunction probe(box, grid_size);
    std::vector<cplx> samples(probe.grid_total());
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = rule(probe.grid_point(i));
    return from_samples(box, grid_size, std::move(samples), discarded);
}

cplx GridFunction::coeff(const LatticePoint& xi) const {
    return coeffs_[box_.index(xi)];
}

void GridFunction::set_coeff(const LatticePoint& xi, cplx v) {
    coeffs_[box_.index(xi)] = v;
    have_samples_ = false;
}

const std::vector<cplx>& GridFunction::samples() const {
    if (!have_samples_) {
        std::vector<cplx> spectrum(grid_total(), cplx(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            auto xi = box_.point(i);
            std::size_t bin = 0;
            for (int j = 0; j < dim(); ++j) {
                long m = xi[j] % grid_size_;
                if (m < 0) m += grid_size_;
                bin = bin * static_cast<std::size_t>(grid_size_) +
                      static_cast<std::size_t>(m);
            }
            spectrum[bin] += coeffs_[i];
        }
        fft::dft(spectrum, grid_dims(dim(), grid_size_), +1);
        samples_ = std::move(spectrum);
        have_samples_ = true;
    }
    return samples_;
}

std::vector<double> GridFunction::grid_point(std::size_t flat) const {
    std::vector<double> x(dim());
    for (int j = dim() - 1; j >= 0; --j) {
        x[j] = grid_coord(static_cast<long>(flat % grid_size_), grid_size_);
        flat /= grid_size_;
    }
    return x;
}

double GridFunction::l2_norm() const {
    double s = 0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (!box_.same_extent(other.box_) || grid_size_ != other.grid_size_)
        throw config_error("grid function shape mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    have_samples_ = false;
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    if (!box_.same_extent(other.box_) || grid_size_ != other.grid_size_)
        throw config_error("grid function shape mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    have_samples_ = false;
    return *this;
}

GridFunction& GridFunction::operator*=(cplx scale) {
    for (auto& c : coeffs_) c *= scale;
    have_samples_ = false;
    return *this;
}

LatticeFunction toroidal_ft(const GridFunction& u) {
    auto box = u.box();
    auto coeffs = u.coefficients();
    return LatticeFunction(box.n, box.ext(), [box, coeffs](const LatticePoint& xi) {
        return coeffs[box.index(xi)];
    });
}

GridFunction inverse_ft(const LatticeFunction& g, const FrequencyBox& box,
                        int grid_size) {
    std::vector<cplx> coeffs(box.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = g(box.point(i));
    auto core = FrequencyBox(box.n, box.K + box.margin, 0);
    return GridFunction::from_coefficients(core, grid_size, std::move(coeffs));
}

GridFunction falling_derivative(const GridFunction& u, const MultiIndex& alpha,
                                int sign) {
    if (alpha.dim() != u.dim()) throw config_error("dimension mismatch");
    std::vector<cplx> coeffs(u.coefficients());
    const auto& box = u.box();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        auto xi = box.point(i);
        std::vector<long> s(xi.entries());
        for (auto& e : s) e *= sign;
        coeffs[i] *= double(falling_factorial(LatticePoint(std::move(s)), alpha));
    }
    return GridFunction::from_coefficients(box, u.grid_size(), std::move(coeffs));
}

double sobolev_norm(const GridFunction& u, double s) {
    double acc = 0;
    const auto& box = u.box();
    const auto& c = u.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i)
        acc += std::pow(1.0 + box.point(i).norm2(), s) * std::norm(c[i]);
    return std::sqrt(acc);
}

LatticeFunction inflated_ft(const GridFunction& g_compressed, int inflation) {
    if (inflation < 1) throw config_error("inflation factor must be >= 1");
    auto box = g_compressed.box();
    auto coeffs = g_compressed.coefficients();
    double scale = std::pow(double(inflation), box.n);
    return LatticeFunction(box.n, box.K, [box, coeffs, scale](const LatticePoint& mu) {
        return scale * coeffs[box.index(mu)];
    });
}

}  // namespace torus
