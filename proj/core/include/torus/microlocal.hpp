#pragma once

#include "torus/calculus.hpp"
#include "torus/symbol_table.hpp"

namespace torus {

// Lattice cone {xi : xi.omega >= |xi| cos(half_angle), |xi| >= min_radius}.
struct DiscreteCone {
    std::vector<double> direction;  // unit vector
    double half_angle = 0.4;
    double min_radius = 2.0;

    bool contains(const LatticePoint& xi) const;
    bool nonempty_in(const FrequencyBox& box) const;
    bool contains_direction(const std::vector<double>& v) const;
};

// Raised-cosine-power localizer prod_j ((1 + cos(x_j - c_j))/2)^p.
struct Localizer {
    std::vector<double> center;
    int power = 4;
    GridFunction bump;
};

Localizer make_localizer(const FrequencyBox& box, int grid_size,
                         std::vector<double> center, int power = 4);

struct WaveFrontOptions {
    double threshold_slope = -4.0;
    std::vector<double> shell_radii;  // empty: dyadic {K/8, K/4, K/2, K}
};

struct WaveFrontReport {
    struct Entry {
        std::size_t cell_index;
        std::size_t cone_index;
        double slope;  // -inf marks vanishing shell content
        bool flagged;
    };
    std::vector<Entry> entries;
    double threshold = -4.0;

    bool is_flagged(std::size_t cell, std::size_t cone) const;
};

// Localized decay-rate diagnostic: for each (cutoff, cone) fit the decay of
// max |F(chi u)| over dyadic shells inside the cone; flag slopes above the
// threshold.
WaveFrontReport wavefront_detect(const GridFunction& u,
                                 const std::vector<Localizer>& cutoffs,
                                 const std::vector<DiscreteCone>& cones,
                                 WaveFrontOptions options = {});

// The (cell, cone) pairs flagged for A u but not for u; the containment
// property says this list stays empty.
struct ContainmentReport {
    WaveFrontReport input;
    WaveFrontReport output;
    std::vector<std::pair<std::size_t, std::size_t>> new_flags;
};

ContainmentReport operator_wf_containment(const SymbolTable& a, const GridFunction& u,
                                          const std::vector<Localizer>& cutoffs,
                                          const std::vector<DiscreteCone>& cones,
                                          WaveFrontOptions options = {});

// Band-limited pointwise product through the sample grid.
GridFunction pointwise_product(const GridFunction& a, const GridFunction& b,
                               double* discarded = nullptr);

}  // namespace torus
