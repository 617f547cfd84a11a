#include "torus/microlocal.hpp"

#include "torus/quantize.hpp"

#include <cmath>
#include <limits>

namespace torus {

bool DiscreteCone::contains(const LatticePoint& xi) const {
    double r = xi.norm();
    if (r < min_radius) return false;
    double dot = 0;
    for (int j = 0; j < xi.dim(); ++j) dot += double(xi[j]) * direction[std::size_t(j)];
    return dot >= r * std::cos(half_angle);
}

bool DiscreteCone::nonempty_in(const FrequencyBox& box) const {
    for (const auto& xi : box.core_points())
        if (contains(xi)) return true;
    return false;
}

bool DiscreteCone::contains_direction(const std::vector<double>& v) const {
    double r = 0, dot = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        r += v[j] * v[j];
        dot += v[j] * direction[j];
    }
    r = std::sqrt(r);
    return dot >= r * std::cos(half_angle);
}

Localizer make_localizer(const FrequencyBox& box, int grid_size,
                         std::vector<double> center, int power) {
    auto c = center;
    auto bump = GridFunction::from_rule(
        FrequencyBox(box.n, box.K, 0), grid_size,
        [c, power](const std::vector<double>& x) {
            double v = 1.0;
            for (std::size_t j = 0; j < c.size(); ++j)
                v *= std::pow(0.5 * (1.0 + std::cos(x[j] - c[j])), power);
            return cplx(v);
        });
    return Localizer{std::move(center), power, std::move(bump)};
}

GridFunction pointwise_product(const GridFunction& a, const GridFunction& b,
                               double* discarded) {
    if (a.grid_size() != b.grid_size() || a.dim() != b.dim())
        throw config_error("product factors live on different grids");
    std::vector<cplx> samples(a.samples());
    const auto& sb = b.samples();
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] *= sb[i];
    return GridFunction::from_samples(FrequencyBox(a.dim(), a.box().K, 0),
                                      a.grid_size(), std::move(samples), discarded);
}

bool WaveFrontReport::is_flagged(std::size_t cell, std::size_t cone) const {
    for (const auto& e : entries)
        if (e.cell_index == cell && e.cone_index == cone) return e.flagged;
    return false;
}

WaveFrontReport wavefront_detect(const GridFunction& u,
                                 const std::vector<Localizer>& cutoffs,
                                 const std::vector<DiscreteCone>& cones,
                                 WaveFrontOptions options) {
    const auto& box = u.box();
    if (options.shell_radii.empty()) options.shell_radii = default_shells(box.K).radii;
    const auto& radii = options.shell_radii;

    for (const auto& cone : cones) {
        for (const auto& c : cone.direction)
            (void)c;
        if (!cone.nonempty_in(box))
            throw config_error("cone has no lattice points inside the box");
    }
    for (const auto& chi : cutoffs)
        for (const auto& s : chi.bump.samples())
            if (s.real() < -1e-12 || std::abs(s.imag()) > 1e-12)
                throw precondition_error("localizers must be nonnegative bumps");

    WaveFrontReport report;
    report.threshold = options.threshold_slope;
    for (std::size_t cell = 0; cell < cutoffs.size(); ++cell) {
        auto localized = pointwise_product(cutoffs[cell].bump, u);
        for (std::size_t ci = 0; ci < cones.size(); ++ci) {
            std::vector<double> values(radii.size(), 0.0);
            std::vector<bool> populated(radii.size(), false);
            for (const auto& xi : box.points()) {
                if (!cones[ci].contains(xi)) continue;
                double r = xi.norm();
                for (std::size_t s = 0; s < radii.size(); ++s) {
                    double upper = (s + 1 < radii.size())
                                       ? radii[s + 1]
                                       : std::numeric_limits<double>::infinity();
                    if (r >= radii[s] && r < upper) {
                        populated[s] = true;
                        values[s] = std::max(values[s], std::abs(localized.coeff(xi)));
                        break;
                    }
                }
            }
            std::size_t have = 0;
            for (bool p : populated) have += p ? 1 : 0;
            if (have == 0)
                throw precondition_error("cone contributes no shell data");
            double slope;
            bool any = false;
            for (double v : values) any = any || v > 0;
            if (!any) {
                slope = -std::numeric_limits<double>::infinity();
            } else {
                // drop unpopulated shells from the fit; vanishing populated
                // shells mark super-algebraic decay
                std::vector<double> rs, vs;
                bool zero_tail = false;
                for (std::size_t s = 0; s < radii.size(); ++s) {
                    if (!populated[s]) continue;
                    if (values[s] == 0.0) {
                        zero_tail = true;
                        continue;
                    }
                    rs.push_back(radii[s]);
                    vs.push_back(values[s]);
                }
                if (zero_tail || rs.size() < 2) {
                    slope = -std::numeric_limits<double>::infinity();
                } else {
                    double sx = 0, sy = 0, sxx = 0, sxy = 0;
                    for (std::size_t s = 0; s < rs.size(); ++s) {
                        double x = std::log(std::sqrt(1.0 + rs[s] * rs[s]));
                        double y = std::log(vs[s]);
                        sx += x, sy += y, sxx += x * x, sxy += x * y;
                    }
                    double nn = double(rs.size());
                    slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
                }
            }
            report.entries.push_back(
                {cell, ci, slope, slope > options.threshold_slope});
        }
    }
    return report;
}

ContainmentReport operator_wf_containment(const SymbolTable& a, const GridFunction& u,
                                          const std::vector<Localizer>& cutoffs,
                                          const std::vector<DiscreteCone>& cones,
                                          WaveFrontOptions options) {
    ContainmentReport rep;
    rep.input = wavefront_detect(u, cutoffs, cones, options);
    rep.output = wavefront_detect(apply_pdo(a, u), cutoffs, cones, options);
    for (const auto& e : rep.output.entries)
        if (e.flagged && !rep.input.is_flagged(e.cell_index, e.cone_index))
            rep.new_flags.push_back({e.cell_index, e.cone_index});
    return rep;
}

}  // namespace torus
