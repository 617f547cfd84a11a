#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lattice access outside a declared frequency box / evaluation window.
struct box_error : error {
    using error::error;
};

// Data-level precondition violation (decay tails, supports, non-lattice
// gradients, ...). The CLI maps this to exit code 3.
struct precondition_error : error {
    using error::error;
};

// Structural misuse: mismatched boxes/grids, invalid sizes. Exit code 2
// territory when it comes from a scenario config.
struct config_error : error {
    using error::error;
};

// Phase certificate failure for Fourier series operators.
struct phase_error : error {
    using error::error;
};

// Ellipticity witness failure; carries the violating point.
struct ellipticity_error : error {
    std::vector<long> xi;
    double x_coord;
    ellipticity_error(const std::string& msg, std::vector<long> xi_, double x_)
        : error(msg), xi(std::move(xi_)), x_coord(x_) {}
};

// Requested accuracy is unreachable (step-size floor, iteration limit).
struct accuracy_error : error {
    using error::error;
};

// Expression mini-grammar syntax error with source position.
struct parse_error : error {
    std::size_t position;
    parse_error(const std::string& msg, std::size_t pos)
        : error(msg), position(pos) {}
};

inline double angle_bracket(double r2) { return std::sqrt(1.0 + r2); }

}  // namespace torus
