#include "runner.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

#include <json.hpp>

#include "torus/evolve.hpp"
#include "torus/expression.hpp"
#include "torus/io.hpp"
#include "torus/quantize.hpp"

namespace torus::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Context {
    json config;
    fs::path out;
    unsigned long long seed = 0;
    int threads = 1;
    json manifest_outputs = json::array();
    json extra = json::object();

    void write_text(const std::string& name, const std::string& text) {
        std::ofstream f(out / name);
        f << text;
        if (text.empty() || text.back() != '\n') f << "\n";
        manifest_outputs.push_back(name);
    }
    void wrote(const std::string& name) { manifest_outputs.push_back(name); }
};

unsigned long long fnv1a(const std::string& text) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

GridFunction random_gridfn(std::mt19937_64& rng, const FrequencyBox& box, int N) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<cplx> coeffs(box.size());
    for (auto& c : coeffs) c = cplx(d(rng), d(rng));
    return GridFunction::from_coefficients(box, N, std::move(coeffs));
}

struct BoxSpec {
    int n;
    FrequencyBox box;
    int N;
};

BoxSpec box_from_config(const json& cfg, int default_K = 16, int default_margin = 4) {
    int n = cfg.value("n", 1);
    if (n < 1 || n > 3) throw config_error("n must be 1, 2 or 3");
    int K = cfg.value("K", default_K);
    int margin = cfg.value("margin", default_margin);
    FrequencyBox box(n, K, margin);
    int N = cfg.value("N", 0);
    if (N == 0) N = FrequencyBox(n, K + margin, 0).default_grid();
    return {n, box, N};
}

SymbolTable symbol_from_config(const json& value, const FrequencyBox& box, int N,
                               SymbolOrder order, bool check = true) {
    if (value.is_string())
        return symbol_from_expression(Expression::parse(value.get<std::string>()),
                                      box, N, order, 0.0, check);
    if (value.is_object() && value.contains("path")) {
        auto t = io::load_symbol_table(value.at("path").get<std::string>());
        return t;
    }
    throw config_error("symbol spec must be an expression string or {path}");
}

GridFunction data_from_config(const json& value, const FrequencyBox& box, int N,
                              std::mt19937_64& rng) {
    FrequencyBox core(box.n, box.K, 0);
    if (value.is_string()) {
        std::string s = value.get<std::string>();
        if (s == "random") return random_gridfn(rng, core, N);
        return grid_function_from_expression(Expression::parse(s), core, N);
    }
    if (value.is_object() && value.contains("path"))
        return io::load_grid_function(value.at("path").get<std::string>(), N);
    throw config_error("data spec must be an expression string, \"random\" or {path}");
}

// ---------------------------------------------------------------- commands

void cmd_taylor_suite(Context& ctx) {
    int instances = ctx.config.value("instances", 100);
    std::mt19937_64 rng(ctx.seed + 7);
    std::uniform_int_distribution<int> vals(-9, 9);
    std::uniform_int_distribution<long> offs(-3, 3);
    std::uniform_int_distribution<int> orders(1, 4);

    double leibniz_defect = 0, sbp_defect = 0, poly_defect = 0;
    int bound_violations = 0;
    std::ostringstream samples;
    samples << "instance,abs_remainder,bound\n";

    for (int inst = 0; inst < instances; ++inst) {
        // dense random integer table on [-12, 12]
        std::vector<cplx> table(25);
        for (auto& v : table) v = cplx(double(vals(rng)), 0.0);
        LatticeFunction p(1, 12, [table](const LatticePoint& xi) {
            return table[std::size_t(xi[0] + 12)];
        });
        std::vector<cplx> table2(25);
        for (auto& v : table2) v = cplx(double(vals(rng)), 0.0);
        LatticeFunction q(1, 12, [table2](const LatticePoint& xi) {
            return table2[std::size_t(xi[0] + 12)];
        });
        LatticeFunction pq(1, 12, [table, table2](const LatticePoint& xi) {
            return table[std::size_t(xi[0] + 12)] * table2[std::size_t(xi[0] + 12)];
        });
        LatticePoint xi(std::vector<long>{offs(rng)});
        for (int m = 0; m <= 3; ++m) {
            MultiIndex alpha({std::vector<int>{m}});
            cplx lhs = forward_difference(pq, alpha, xi);
            cplx rhs = 0;
            for (const auto& beta : sub_indices(alpha))
                rhs += double(binomial(alpha, beta)) * forward_difference(p, beta, xi) *
                       forward_difference(q, alpha.minus(beta), xi.shifted(beta));
            leibniz_defect = std::max(leibniz_defect, std::abs(lhs - rhs));
        }
        // summation by parts on compactly supported data
        LatticeFunction pw(1, 20, [table](const LatticePoint& xi2) {
            return std::labs(xi2[0]) <= 5 ? table[std::size_t(xi2[0] + 12)] : cplx(0);
        });
        LatticeFunction qw(1, 20, [table2](const LatticePoint& xi2) {
            return std::labs(xi2[0]) <= 5 ? table2[std::size_t(xi2[0] + 12)] : cplx(0);
        });
        MultiIndex alpha({std::vector<int>{orders(rng) % 3 + 1}});
        cplx lhs = 0, rhs = 0;
        for (long s = -12; s <= 12; ++s) {
            LatticePoint z(std::vector<long>{s});
            lhs += pw(z) * forward_difference(qw, alpha, z);
            rhs += backward_difference(pw, alpha, z) * qw(z);
        }
        double sign = (alpha.order() % 2 == 0) ? 1.0 : -1.0;
        sbp_defect = std::max(sbp_defect, std::abs(lhs - sign * rhs));

        // polynomial remainder and the remainder bound on smooth data
        int M = orders(rng);
        std::vector<double> cs(std::size_t(M), 0.0);
        for (auto& c : cs) c = double(vals(rng));
        LatticeFunction poly(1, 64, [cs](const LatticePoint& z) {
            double acc = 0, p2 = 1;
            for (double c : cs) acc += c * p2, p2 *= double(z[0]);
            return cplx(acc);
        });
        auto rpoly = discrete_taylor(poly, LatticePoint(std::vector<long>{offs(rng)}),
                                     LatticePoint(std::vector<long>{offs(rng)}), M);
        poly_defect = std::max(poly_defect, std::abs(rpoly.remainder));

        LatticeFunction smooth(1, 64, [inst](const LatticePoint& z) {
            return cplx(std::sin(0.3 * double(z[0]) + double(inst)), 1.0 / z.bracket());
        });
        LatticePoint base(std::vector<long>{offs(rng)});
        LatticePoint theta(std::vector<long>{offs(rng)});
        auto r = discrete_taylor(smooth, base, theta, M);
        double bound = taylor_remainder_bound(smooth, base, theta, M);
        if (std::abs(r.remainder) > bound * (1.0 + 1e-12) + 1e-12) ++bound_violations;
        samples << inst << "," << std::abs(r.remainder) << "," << bound << "\n";
    }
    ctx.write_text("remainder_samples.csv", samples.str());
    json rep = {{"instances", instances},
                {"leibnitz_max_defect", leibniz_defect},
                {"summation_by_parts_max_defect", sbp_defect},
                {"polynomial_remainder_max", poly_defect},
                {"bound_violations", bound_violations}};
    ctx.write_text("taylor_suite.json", rep.dump(2));
    ctx.extra = rep;
}

void cmd_quantize_apply(Context& ctx) {
    auto spec = box_from_config(ctx.config);
    std::mt19937_64 rng(ctx.seed);
    auto a = symbol_from_config(ctx.config.at("symbol"), spec.box, spec.N, {0, 1, 0});
    auto u = data_from_config(ctx.config.value("u", json("random")),
                              FrequencyBox(spec.n, spec.box.K, 0), spec.N, rng);
    ApplyReport rep;
    auto out = apply_pdo(a, u, &rep);
    io::save_grid_function(u, ctx.out / "input.csv");
    ctx.wrote("input.csv");
    io::save_grid_function(out, ctx.out / "applied.csv");
    ctx.wrote("applied.csv");
    json j = {{"discarded_mass", rep.discarded_mass}};
    ctx.write_text("quantize_report.json", j.dump(2));
    ctx.extra = j;
}

void cmd_extract(Context& ctx) {
    auto spec = box_from_config(ctx.config);
    FrequencyBox work(spec.n, spec.box.K + 4, 0);
    auto a_work = symbol_from_config(ctx.config.at("symbol"),
                                     FrequencyBox(spec.n, work.K, spec.box.margin),
                                     spec.N, {0, 1, 0});
    auto A = pdo_operator(a_work);
    auto extracted = extract_symbol(A, FrequencyBox(spec.n, spec.box.K, 0), spec.N);
    io::save_symbol_table(extracted, ctx.out / "extracted.csv");
    ctx.wrote("extracted.csv");
    ctx.wrote("extracted.csv.json");
    double dev = 0;
    for (const auto& xi : extracted.box().points())
        for (std::size_t i = 0; i < extracted.grid_total(); ++i)
            dev = std::max(dev,
                           std::abs(extracted.value(xi, i) - a_work.value(xi, i)));
    json j = {{"roundtrip_max_dev", dev}};
    ctx.write_text("extract_report.json", j.dump(2));
    ctx.extra = j;
}

void cmd_extend_roundtrip(Context& ctx) {
    auto spec = box_from_config(ctx.config, 32, 0);
    double H = ctx.config.value("H", 12.0);
    auto kernel = ThetaKernel::build(spec.n, H);
    FrequencyBox store(spec.n, int(spec.box.K + std::ceil(H)) + 1, 0);
    auto table = symbol_from_config(ctx.config.at("symbol"), store, spec.N, {0, 1, 0});
    auto rt = restrict_symbol(extend_symbol(table, kernel),
                              FrequencyBox(spec.n, spec.box.K, 0), spec.N);
    double dev = 0;
    for (const auto& xi : rt.box().points())
        for (std::size_t i = 0; i < rt.grid_total(); ++i)
            dev = std::max(dev, std::abs(rt.value(xi, i) - table.value(xi, i)));
    json j = {{"interpolation_defect", kernel->interpolation_defect()},
              {"shift_sum_defect", kernel->shift_sum_defect()},
              {"measured_tail", kernel->measured_tail()},
              {"H", H},
              {"roundtrip_max_dev", dev}};
    ctx.write_text("extend_report.json", j.dump(2));
    ctx.extra = j;
}

void cmd_compose_order(Context& ctx) {
    auto spec = box_from_config(ctx.config, 32, 4);
    auto sa = symbol_from_config(ctx.config.at("sigmaA"), spec.box, spec.N, {1, 1, 0});
    auto sb = symbol_from_config(ctx.config.at("sigmaB"), spec.box, spec.N, {1, 1, 0});
    FrequencyBox work(spec.n, spec.box.K + spec.box.margin, 0);
    LinearOperatorHandle AB(work, spec.N, [&](const GridFunction& u) {
        return apply_pdo(sa, apply_pdo(sb, u));
    }, false);
    FrequencyBox target(spec.n, spec.box.K, 0);
    auto truth = extract_symbol(AB, target, spec.N);
    std::vector<int> orders = ctx.config.value("orders", std::vector<int>{1, 2, 3});
    std::ostringstream csv;
    csv << "M,slope,residual\n";
    json entries = json::array();
    for (int M : orders) {
        auto comp = compose_symbols(sa, sb, M).restricted(target);
        SymbolTable resid = truth;
        resid -= comp;
        auto fit = fit_decay_order(resid, default_shells(spec.box.K));
        csv << M << "," << fit.slope << "," << fit.residual << "\n";
        entries.push_back({{"M", M}, {"slope", fit.slope}, {"residual", fit.residual}});
    }
    ctx.write_text("compose_order.csv", csv.str());
    json j = {{"entries", entries}};
    ctx.write_text("compose_report.json", j.dump(2));
    ctx.extra = j;
}

void cmd_adjoint_check(Context& ctx) {
    auto spec = box_from_config(ctx.config, 12, 3);
    auto sa = symbol_from_config(ctx.config.at("sigmaA"), spec.box, spec.N, {1, 1, 0});
    int M = ctx.config.value("M", 3);
    int pairs = ctx.config.value("pairs", 20);
    auto adj = adjoint_symbol(sa, M);
    std::mt19937_64 rng(ctx.seed);
    FrequencyBox data(spec.n, spec.box.K - 4 > 0 ? spec.box.K - 4 : spec.box.K, 0);
    double worst = 0;
    std::ostringstream csv;
    csv << "pair,defect\n";
    for (int rep = 0; rep < pairs; ++rep) {
        auto u0 = random_gridfn(rng, data, spec.N);
        auto v0 = random_gridfn(rng, data, spec.N);
        GridFunction u(FrequencyBox(spec.n, spec.box.K, 0), spec.N);
        GridFunction v(FrequencyBox(spec.n, spec.box.K, 0), spec.N);
        for (const auto& xi : data.points()) {
            u.set_coeff(xi, u0.coeff(xi));
            v.set_coeff(xi, v0.coeff(xi));
        }
        auto au = apply_pdo(sa, u);
        auto av = apply_pdo(adj, v);
        cplx lhs = 0, rhs = 0;
        for (std::size_t i = 0; i < au.coefficients().size(); ++i) {
            lhs += au.coefficients()[i] * std::conj(v.coefficients()[i]);
            rhs += u.coefficients()[i] * std::conj(av.coefficients()[i]);
        }
        double defect = std::abs(lhs - rhs);
        worst = std::max(worst, defect);
        csv << rep << "," << defect << "\n";
    }
    ctx.write_text("adjoint_pairs.csv", csv.str());
    json j = {{"max_duality_defect", worst}, {"M", M}, {"pairs", pairs}};
    ctx.write_text("adjoint_report.json", j.dump(2));
    ctx.extra = j;
}

void cmd_parametrix(Context& ctx) {
    auto spec = box_from_config(ctx.config, 64, 8);
    int terms = ctx.config.value("terms", 4);
    double C0 = ctx.config.value("C0", 0.5);
    long N0 = ctx.config.value("N0", 0);

    AsymptoticSeries A;
    SymbolTable full(spec.box, spec.N, {2, 1, 0});
    if (ctx.config.contains("series")) {
        bool first = true;
        for (const auto& item : ctx.config.at("series")) {
            double order = item.at("order").get<double>();
            auto t = symbol_from_config(item.at("symbol"), spec.box, spec.N,
                                        {order, 1, 0});
            if (first) {
                full = t;
                first = false;
            } else {
                full += t;
            }
            A.push(order, std::move(t));
        }
    } else {
        double order = ctx.config.value("order", 2.0);
        full = symbol_from_config(ctx.config.at("symbol"), spec.box, spec.N,
                                  {order, 1, 0});
        A.push(order, full);
    }
    auto B = parametrix(A, terms, {C0, N0});
    auto b_sum = B.sum();

    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> ph(-pi, pi);
    FrequencyBox data(spec.n, spec.box.K, 0);
    std::vector<cplx> coeffs(data.size());
    for (auto& c : coeffs) c = std::polar(1.0, ph(rng));
    auto u = GridFunction::from_coefficients(data, spec.N, std::move(coeffs));
    auto resid = apply_pdo(b_sum, apply_pdo(full, u));
    resid -= u;
    auto fit = fit_decay_order(resid, default_shells(spec.box.K));
    std::ostringstream csv;
    csv << "terms,slope,residual\n"
        << terms << "," << fit.slope << "," << fit.residual << "\n";
    ctx.write_text("parametrix_order.csv", csv.str());
    ctx.write_text("parametrix_report.json", io::decay_fit_json(fit));
    ctx.extra = {{"slope", fit.slope}};
}

PhaseTable phase_from_config(const json& cfg, const FrequencyBox& box, int N) {
    if (!cfg.contains("phase") || cfg.at("phase") == "linear")
        return PhaseTable::linear(box, N);
    const auto& p = cfg.at("phase");
    if (p.is_object() && p.contains("tau")) {
        auto tau = Expression::parse(p.at("tau").get<std::string>());
        double t = p.value("t", 1.0);
        return PhaseTable::with_frequency_part(box, N, [tau, t](const LatticePoint& xi) {
            std::vector<double> q(std::size_t(xi.dim()), 0.0);
            for (int j = 0; j < xi.dim(); ++j) q[std::size_t(j)] = double(xi[j]);
            return t * tau.eval({}, q).real();
        });
    }
    throw config_error("phase spec must be \"linear\" or {tau, t}");
}

void cmd_fso_apply(Context& ctx) {
    auto spec = box_from_config(ctx.config, 16, 1);
    auto amp = symbol_from_config(ctx.config.value("amplitude", json("1")), spec.box,
                                  spec.N, {0, 1, 0});
    auto phi = phase_from_config(ctx.config, spec.box, spec.N);
    FourierSeriesOp T(phi, amp);
    std::mt19937_64 rng(ctx.seed);
    auto u = data_from_config(ctx.config.value("u", json("random")),
                              FrequencyBox(spec.n, spec.box.K, 0), spec.N, rng);
    ApplyReport arep;
    auto out = apply_fso(T, u, &arep);
    io::save_grid_function(out, ctx.out / "fso_applied.csv");
    ctx.wrote("fso_applied.csv");

    auto prep = check_phase(phi, 2 * spec.n + 1);
    auto l2 = fso_l2_check(T);
    json j = json::parse(io::phase_report_json(prep));
    j["graph_constant"] = l2.graph_constant;
    j["discarded_mass"] = arep.discarded_mass;
    ctx.write_text("phase_report.json", j.dump(2));
    ctx.extra = j;
}

void cmd_fso_compose(Context& ctx) {
    auto spec = box_from_config(ctx.config, 8, 2);
    std::string route = ctx.config.value("route", "tp");
    int M = ctx.config.value("M", 2);
    auto amp = symbol_from_config(ctx.config.value("amplitude", json("1")), spec.box,
                                  spec.N, {0, 1, 0});
    auto phi = phase_from_config(ctx.config, spec.box, spec.N);
    FourierSeriesOp T(phi, amp);

    std::mt19937_64 rng(ctx.seed);
    auto u0 = random_gridfn(rng, FrequencyBox(spec.n, spec.box.K - 2, 0), spec.N);
    GridFunction u(FrequencyBox(spec.n, spec.box.K, 0), spec.N);
    for (const auto& xi : u0.box().points()) u.set_coeff(xi, u0.coeff(xi));

    GridFunction via(u.box(), spec.N), direct(u.box(), spec.N);
    if (route == "tp") {
        auto p = symbol_from_config(ctx.config.at("p"), spec.box, spec.N, {1, 1, 0});
        auto TP = compose_fso_pdo(T, p, M);
        via = apply_fso(TP, u);
        direct = apply_fso(T, apply_pdo(p, u));
    } else if (route == "pt" || route == "pt-diff") {
        double H = ctx.config.value("H", 24.0);
        FrequencyBox pbox(spec.n, int(spec.box.K + spec.box.margin + std::ceil(H)) + 2,
                          spec.box.margin);
        auto p = symbol_from_config(ctx.config.at("p"), pbox, spec.N, {1, 1, 0});
        auto PT = route == "pt"
                      ? compose_pdo_fso(p, T, M, ThetaKernel::build(spec.n, H))
                      : compose_pdo_fso_difference_form(p, T, M);
        via = apply_fso(PT, u);
        auto pw = p.restricted(FrequencyBox(spec.n, spec.box.K, 0));
        direct = apply_pdo(pw, apply_fso(T, u));
    } else {
        throw config_error("route must be tp, pt or pt-diff");
    }
    GridFunction diff = via;
    diff -= direct;
    json j = {{"route", route},
              {"M", M},
              {"residual_l2", diff.l2_norm()},
              {"residual_rel", diff.l2_norm() / std::max(1e-300, direct.l2_norm())}};
    ctx.write_text("fso_compose_report.json", j.dump(2));
    ctx.extra = j;
}

void cmd_l2_bounds(Context& ctx) {
    auto spec = box_from_config(ctx.config, 8, 0);
    auto a = symbol_from_config(ctx.config.at("symbol"), spec.box, spec.N, {0, 1, 0});
    double bound = schur_l2_bound(a);
    double norm = operator_norm(pdo_operator(a.restricted(
        FrequencyBox(spec.n, spec.box.K, 0))));
    json j = {{"schur_bound", bound}, {"operator_norm", norm},
              {"dominated", norm <= bound + 1e-8}};
    if (ctx.config.contains("phase")) {
        auto phi = phase_from_config(ctx.config, spec.box.margin >= 1
                                                     ? spec.box
                                                     : FrequencyBox(spec.n, spec.box.K, 1),
                                     spec.N);
        FourierSeriesOp T(phi, a.restricted(FrequencyBox(spec.n, spec.box.K, 0)));
        auto rep = fso_l2_check(T);
        j["fso"] = json::parse(io::fso_l2_report_json(rep));
    }
    ctx.write_text("l2_report.json", j.dump(2));
    ctx.extra = j;
}

void cmd_evolve(Context& ctx) {
    auto spec = box_from_config(ctx.config, 32, 0);
    FrequencyBox core(spec.n, spec.box.K, 0);
    std::vector<double> times = ctx.config.value("times", std::vector<double>{0.0, 1.0});

    // data: gaussian specs run through the embedding pipeline
    std::optional<EmbedReport> embed_report;
    GridFunction f(core, spec.N);
    if (ctx.config.contains("f") && ctx.config.at("f").is_object() &&
        ctx.config.at("f").contains("gaussian")) {
        double width = ctx.config.at("f").at("gaussian").value("width", 0.35);
        auto g = EuclideanSampledFunction::gaussian({width});
        EmbedReport rep;
        PeriodizeReport prep;
        f = periodize(g, core, spec.N, 1e-9, &prep);
        rep.data_report = prep;
        embed_report = rep;
    } else {
        std::mt19937_64 rng(ctx.seed);
        f = data_from_config(ctx.config.value("f", json("random")), core, spec.N, rng);
    }

    json diag = json::object();
    if (embed_report) {
        diag["periodization"] = {
            {"route_disagreement", embed_report->data_report.route_disagreement},
            {"boundary_tail", embed_report->data_report.boundary_tail}};
    }
    if (ctx.config.value("periodize_only", false)) {
        io::save_grid_function(f, ctx.out / "periodized.csv");
        ctx.wrote("periodized.csv");
        ctx.write_text("evolve_diagnostics.json", diag.dump(2));
        ctx.extra = diag;
        return;
    }

    double kernel_cutoff = ctx.config.value("kernel_cutoff", 24.0);
    auto a1e = Expression::parse(ctx.config.value("a1", std::string("xi1")));
    auto a1 = lattice_from_expression(a1e, spec.n,
                                      spec.box.K + long(kernel_cutoff) + 2);
    std::optional<SymbolTable> a0;
    if (ctx.config.contains("a0") && !ctx.config.at("a0").is_null()) {
        FrequencyBox a0box(spec.n, spec.box.K + int(kernel_cutoff) + 2, 0);
        a0 = symbol_from_config(ctx.config.at("a0"), a0box, spec.N, {0, 1, 0});
    }
    CauchyProblem P(a1, a0, f, times);

    std::string method = ctx.config.value("method", "reference");
    EvolvedSolution sol = method == "fso"
                              ? solve_fso(P, ctx.config.value("M", 2),
                                          {1e-9, kernel_cutoff, {1e-3, 0.35, 0.5}})
                              : solve_reference(P);
    json jt = json::array(), jn = json::array(), jtail = json::array();
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "state_%03zu.csv", k);
        io::save_grid_function(sol.states[k], ctx.out / name);
        ctx.wrote(name);
        jt.push_back(sol.times[k]);
        jn.push_back(sol.diagnostics[k].norm);
        jtail.push_back(sol.diagnostics[k].spectral_tail);
    }
    diag["method"] = method;
    diag["times"] = jt;
    diag["norms"] = jn;
    diag["spectral_tails"] = jtail;
    ctx.write_text("evolve_diagnostics.json", diag.dump(2));
    ctx.extra = diag;
}

void cmd_wavefront(Context& ctx) {
    auto spec = box_from_config(ctx.config, 16, 0);
    if (spec.n != 2) throw config_error("the wavefront command expects n = 2");
    FrequencyBox core(2, spec.box.K, 0);

    GridFunction u(core, spec.N);
    json uspec = ctx.config.value("u", json("sawtooth"));
    if (uspec.is_string() && uspec.get<std::string>() == "sawtooth") {
        for (long q = -core.K; q <= core.K; ++q)
            if (q != 0)
                u.set_coeff(LatticePoint(std::vector<long>{q, 0}),
                            1.0 / cplx(0.0, double(q)));
    } else {
        std::mt19937_64 rng(ctx.seed);
        u = data_from_config(uspec, core, spec.N, rng);
    }

    std::vector<Localizer> cells;
    for (double cx : {0.0, pi})
        for (double cy : {0.0, pi})
            cells.push_back(make_localizer(core, spec.N, {cx, cy}));
    std::vector<DiscreteCone> cones;
    for (int k = 0; k < 8; ++k) {
        double ang = two_pi * double(k) / 8.0;
        cones.push_back({{std::cos(ang), std::sin(ang)}, 20.0 * pi / 180.0, 2.0});
    }
    WaveFrontOptions opt;
    opt.threshold_slope = ctx.config.value("threshold", -4.0);

    json j;
    if (ctx.config.contains("symbol")) {
        auto a = symbol_from_config(ctx.config.at("symbol"), core, spec.N, {0, 1, 0});
        auto rep = operator_wf_containment(a, u, cells, cones, opt);
        j = {{"new_flags", rep.new_flags.size()},
             {"input", json::parse(io::wavefront_report_json(rep.input, cells, cones))},
             {"output", json::parse(io::wavefront_report_json(rep.output, cells, cones))}};
    } else {
        auto rep = wavefront_detect(u, cells, cones, opt);
        j = json::parse(io::wavefront_report_json(rep, cells, cones));
    }
    ctx.write_text("wavefront_report.json", j.dump(2));
    ctx.extra = {{"entries", j.contains("entries") ? j["entries"].size() : 0}};
}

int dispatch(Context& ctx) {
    std::string command = ctx.config.at("command").get<std::string>();
    if (command == "taylor-suite") cmd_taylor_suite(ctx);
    else if (command == "quantize-apply") cmd_quantize_apply(ctx);
    else if (command == "extract") cmd_extract(ctx);
    else if (command == "extend-roundtrip") cmd_extend_roundtrip(ctx);
    else if (command == "compose-order") cmd_compose_order(ctx);
    else if (command == "adjoint-check") cmd_adjoint_check(ctx);
    else if (command == "parametrix") cmd_parametrix(ctx);
    else if (command == "fso-apply") cmd_fso_apply(ctx);
    else if (command == "fso-compose") cmd_fso_compose(ctx);
    else if (command == "l2-bounds") cmd_l2_bounds(ctx);
    else if (command == "evolve") cmd_evolve(ctx);
    else if (command == "wavefront") cmd_wavefront(ctx);
    else throw config_error("unknown command: " + command);
    return exit_ok;
}

}  // namespace

int run_scenario_text(const std::string& config_text, const RunOptions& options) {
    auto started = std::chrono::steady_clock::now();
    Context ctx;
    try {
        ctx.config = json::parse(config_text);
    } catch (const json::parse_error& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return exit_usage;
    }
    try {
        if (!ctx.config.is_object() || !ctx.config.contains("command"))
            throw config_error("config must be an object with a \"command\" key");
        ctx.out = options.out_dir;
        std::filesystem::create_directories(ctx.out);
        ctx.seed = options.seed_overridden
                       ? options.seed
                       : ctx.config.value("seed", options.seed);
        ctx.threads = options.threads;
        set_threads(ctx.threads);

        int code = dispatch(ctx);

        auto ended = std::chrono::steady_clock::now();
        json manifest = {
            {"command", ctx.config.at("command")},
            {"config_hash", fnv1a(config_text)},
            {"seed", ctx.seed},
            {"threads", ctx.threads},
            {"versions",
             {{"torus_pdo", "0.1.0"}, {"compiler", __VERSION__}}},
            {"wall_time_ms",
             std::chrono::duration_cast<std::chrono::milliseconds>(ended - started)
                 .count()},
            {"outputs", ctx.manifest_outputs},
            {"summary", ctx.extra}};
        std::ofstream mf(ctx.out / "manifest.json");
        mf << manifest.dump(2) << "\n";
        return code;
    } catch (const json::exception& e) {
        std::cerr << "config schema error: " << e.what() << "\n";
        return exit_usage;
    } catch (const parse_error& e) {
        std::cerr << "expression error at position " << e.position << ": " << e.what()
                  << "\n";
        return exit_usage;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const precondition_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const box_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const ellipticity_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const accuracy_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

int run_scenario(const RunOptions& options) {
    std::ifstream f(options.config_path);
    if (!f) {
        std::cerr << "cannot open config " << options.config_path << "\n";
        return exit_usage;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return run_scenario_text(ss.str(), options);
}

}  // namespace torus::cli
