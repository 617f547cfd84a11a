#pragma once

#include "torus/symbol_table.hpp"

namespace torus {

// Finite head of an asymptotic symbol series; term orders strictly decrease
// and all terms share box extent and grid.
struct AsymptoticSeries {
    struct Term {
        double order;
        SymbolTable table;
    };
    std::vector<Term> terms;

    void push(double order, SymbolTable table);
    const SymbolTable* at_order(double order) const;
    SymbolTable sum() const;  // restricted to the least margin among terms
};

// sigma_{AB}(x,xi) = sum_{|alpha|<M} (1/alpha!) (tri^alpha sigma_A) D_x^((alpha)) sigma_B.
SymbolTable compose_symbols(const SymbolTable& sigma_a, const SymbolTable& sigma_b,
                            int truncation);

// sigma_{A*}(x,xi) = sum_{|alpha|<M} (1/alpha!) tri^alpha D_x^((alpha)) conj(sigma_A).
SymbolTable adjoint_symbol(const SymbolTable& sigma_a, int truncation);

// Compound-symbol reduction sum (1/alpha!) tri^alpha D_y^((alpha)) a(x,y,xi)|_{y=x}.
SymbolTable amplitude_to_symbol(const AmplitudeTable& a, int truncation);

struct EllipticityWitness {
    double C0 = 1.0;
    long N0 = 0;
};

// Parametrix of an elliptic series by the division recursion; the witness
// |sigma_{A0}| >= C0 <xi>^m for |xi| >= N0 is verified on the box first.
// B_0 = chi / sigma_{A0} with a smooth low-frequency cut (identity when
// N0 = 0), and each B_N consumes one unit of the A-series margin.
AsymptoticSeries parametrix(const AsymptoticSeries& a_series, int num_terms,
                            const EllipticityWitness& witness);

struct ShellSpec {
    std::vector<double> radii;  // inner radii, increasing
};
ShellSpec default_shells(int K);  // floor(K/8) * {1,2,4,8}

struct DecayFit {
    double slope = 0;
    double residual = 0;  // max log-space deviation from the fit line
    std::vector<double> shell_radii;
    std::vector<double> shell_values;  // max magnitudes per shell
};

// Least-squares slope of log(max shell magnitude) against log <r>. A shell
// whose magnitude is exactly zero marks super-algebraic decay: the slope is
// -inf. All-zero data is an undefined fit.
DecayFit fit_shell_decay(const std::vector<double>& radii,
                         const std::vector<double>& values);

DecayFit fit_decay_order(const SymbolTable& s, const ShellSpec& shells);
DecayFit fit_decay_order(const GridFunction& u, const ShellSpec& shells);
DecayFit fit_decay_order(const LatticeFunction& s, const FrequencyBox& box,
                         const ShellSpec& shells);

}  // namespace torus
