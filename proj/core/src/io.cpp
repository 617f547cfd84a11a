#include "torus/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace torus::io {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

void save_grid_function(const GridFunction& u, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw error("cannot open " + path.string() + " for writing");
    for (int j = 1; j <= u.dim(); ++j) f << "xi_" << j << ",";
    f << "re,im\n";
    for (const auto& xi : u.box().points()) {
        for (int j = 0; j < u.dim(); ++j) f << xi[j] << ",";
        cplx c = u.coeff(xi);
        f << fmt(c.real()) << "," << fmt(c.imag()) << "\n";
    }
}

GridFunction load_grid_function(const std::filesystem::path& path, int grid_size) {
    std::ifstream f(path);
    if (!f) throw error("cannot open " + path.string());
    std::string header;
    if (!std::getline(f, header)) throw config_error("empty grid function file");
    auto cols = split(header);
    if (cols.size() < 3 || cols[cols.size() - 2] != "re" || cols.back() != "im")
        throw config_error("grid function header must be xi_1,..,xi_n,re,im");
    int n = int(cols.size()) - 2;

    std::vector<std::pair<std::vector<long>, cplx>> rows;
    std::set<std::vector<long>> seen;
    long K = 1;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (int(cells.size()) != n + 2)
            throw config_error("malformed grid function row: " + line);
        std::vector<long> xi(static_cast<std::size_t>(n), 0L);
        for (int j = 0; j < n; ++j) {
            xi[std::size_t(j)] = std::stol(cells[std::size_t(j)]);
            K = std::max(K, std::labs(xi[std::size_t(j)]));
        }
        if (!seen.insert(xi).second)
            throw config_error("duplicate lattice point in grid function file");
        rows.push_back({std::move(xi), cplx(std::stod(cells[std::size_t(n)]),
                                            std::stod(cells[std::size_t(n) + 1]))});
    }
    FrequencyBox box(n, int(K), 0);
    if (grid_size == 0) grid_size = box.default_grid();
    GridFunction u(box, grid_size);
    for (const auto& [xi, c] : rows) u.set_coeff(LatticePoint(xi), c);
    return u;
}

void save_symbol_table(const SymbolTable& a, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw error("cannot open " + path.string() + " for writing");
    for (int j = 1; j <= a.dim(); ++j) f << "x_" << j << ",";
    for (int j = 1; j <= a.dim(); ++j) f << "xi_" << j << ",";
    f << "re,im\n";
    for (std::size_t xf = 0; xf < a.grid_total(); ++xf) {
        auto x = a.grid_point(xf);
        for (const auto& xi : a.box().points()) {
            for (int j = 0; j < a.dim(); ++j) f << fmt(x[std::size_t(j)]) << ",";
            for (int j = 0; j < a.dim(); ++j) f << xi[j] << ",";
            cplx c = a.value(xi, xf);
            f << fmt(c.real()) << "," << fmt(c.imag()) << "\n";
        }
    }
    nlohmann::json side = {{"m", a.order().m},     {"rho", a.order().rho},
                           {"delta", a.order().delta}, {"K", a.box().K},
                           {"margin", a.box().margin}, {"N", a.grid_size()},
                           {"n", a.dim()}};
    std::ofstream js(path.string() + ".json");
    js << side.dump(2) << "\n";
}

SymbolTable load_symbol_table(const std::filesystem::path& path) {
    std::ifstream js(path.string() + ".json");
    if (!js) throw error("missing symbol sidecar " + path.string() + ".json");
    nlohmann::json side = nlohmann::json::parse(js);
    FrequencyBox box(side.value("n", 1), side.at("K").get<int>(),
                     side.at("margin").get<int>());
    int N = side.at("N").get<int>();
    SymbolOrder order{side.at("m").get<double>(), side.at("rho").get<double>(),
                      side.at("delta").get<double>()};

    std::ifstream f(path);
    if (!f) throw error("cannot open " + path.string());
    std::string header;
    std::getline(f, header);
    int n = box.n;
    SymbolTable a(box, N, order);
    std::string line;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (int(cells.size()) != 2 * n + 2)
            throw config_error("malformed symbol row: " + line);
        // recover the x index from coordinates
        std::size_t xf = 0;
        for (int j = 0; j < n; ++j) {
            double xc = std::stod(cells[std::size_t(j)]);
            long idx = std::lround(xc * double(N) / two_pi);
            if (idx < 0 || idx >= N) throw config_error("x coordinate off the grid");
            xf = xf * std::size_t(N) + std::size_t(idx);
        }
        std::vector<long> xi(static_cast<std::size_t>(n), 0L);
        for (int j = 0; j < n; ++j)
            xi[std::size_t(j)] = std::stol(cells[std::size_t(n + j)]);
        if (!seen.insert({xf, a.box().index(LatticePoint(xi))}).second)
            throw config_error("duplicate (x, xi) entry in symbol file");
        a.row(LatticePoint(xi))[xf] = cplx(std::stod(cells[std::size_t(2 * n)]),
                                           std::stod(cells[std::size_t(2 * n) + 1]));
    }
    return a;
}

std::string phase_report_json(const PhaseReport& rep) {
    nlohmann::json sup = nlohmann::json::array();
    for (const auto& b : rep.difference_bounds)
        sup.push_back({{"alpha", b.alpha.entries()}, {"axis", b.axis},
                       {"bound", b.bound}});
    nlohmann::json j = {{"periodicity_defect", rep.periodicity_defect},
                        {"C_lower", rep.comparability_lower},
                        {"C_upper", rep.comparability_upper},
                        {"sup_tables", sup}};
    return j.dump(2);
}

std::string fso_l2_report_json(const FsoL2Report& rep) {
    nlohmann::json amp = nlohmann::json::array();
    for (const auto& e : rep.amplitude_bounds)
        amp.push_back({{"alpha", e.alpha.entries()}, {"sup", e.amplitude_sup}});
    nlohmann::json phase = nlohmann::json::array();
    for (const auto& b : rep.phase_bounds)
        phase.push_back({{"alpha", b.alpha.entries()}, {"axis", b.axis},
                         {"bound", b.bound}});
    nlohmann::json j = {{"graph_constant", rep.graph_constant},
                        {"sup_tables", {{"amplitude", amp}, {"phase", phase}}}};
    return j.dump(2);
}

std::string wavefront_report_json(const WaveFrontReport& rep,
                                  const std::vector<Localizer>& cells,
                                  const std::vector<DiscreteCone>& cones) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : rep.entries) {
        nlohmann::json item = {
            {"cell", cells[e.cell_index].center},
            {"cone", {{"direction", cones[e.cone_index].direction},
                      {"half_angle", cones[e.cone_index].half_angle},
                      {"min_radius", cones[e.cone_index].min_radius}}},
            {"flagged", e.flagged}};
        if (std::isfinite(e.slope))
            item["slope"] = e.slope;
        else
            item["slope"] = "-inf";
        list.push_back(std::move(item));
    }
    nlohmann::json j = {{"threshold", rep.threshold}, {"entries", list}};
    return j.dump(2);
}

std::string decay_fit_json(const DecayFit& fit) {
    nlohmann::json j = {{"slope", std::isfinite(fit.slope) ? nlohmann::json(fit.slope)
                                                           : nlohmann::json("-inf")},
                        {"residual", fit.residual},
                        {"shell_radii", fit.shell_radii},
                        {"shell_values", fit.shell_values}};
    return j.dump(2);
}

}  // namespace torus::io
