#pragma once

#include <filesystem>

#include "torus/calculus.hpp"
#include "torus/fso.hpp"
#include "torus/microlocal.hpp"

namespace torus::io {

// CSV with header xi_1,...,xi_n,re,im; rows in lexicographic lattice order.
void save_grid_function(const GridFunction& u, const std::filesystem::path& path);
// Loader rejects duplicate lattice points; grid_size 0 picks the box default.
GridFunction load_grid_function(const std::filesystem::path& path, int grid_size = 0);

// CSV x_1,...,x_n,xi_1,...,xi_n,re,im plus a JSON sidecar
// {m, rho, delta, K, margin, N} at path + ".json".
void save_symbol_table(const SymbolTable& a, const std::filesystem::path& path);
SymbolTable load_symbol_table(const std::filesystem::path& path);

std::string phase_report_json(const PhaseReport& rep);
std::string fso_l2_report_json(const FsoL2Report& rep);
std::string wavefront_report_json(const WaveFrontReport& rep,
                                  const std::vector<Localizer>& cells,
                                  const std::vector<DiscreteCone>& cones);
std::string decay_fit_json(const DecayFit& fit);

}  // namespace torus::io
