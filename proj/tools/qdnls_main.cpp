// Command-line driver: scatter / asymptote / evolve / verify / bounds
// subcommands with JSON configs, CSV outputs, and a config hash stamped into
// every file for provenance. Exit codes: 0 ok, 1 numerical failure,
// 2 invalid input, 3 assumption violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "qdnls/asymptotics.hpp"
#include "qdnls/bounds.hpp"
#include "qdnls/csvio.hpp"
#include "qdnls/errors.hpp"
#include "qdnls/evolve.hpp"
#include "qdnls/grid.hpp"
#include "qdnls/par.hpp"
#include "qdnls/rh.hpp"
#include "qdnls/scattering.hpp"

using nlohmann::json;
using namespace qdnls;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;
    double tolerance_scale = 1.0;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InvalidInputError(std::string("config parse error: ") + e.what());
    }
    return j;
}

GridFunction profile_from_config(const json& j) {
    const std::string kind = j.value("profile", "gaussian");
    const double amplitude = j.value("amplitude", 0.3);
    const std::size_t n = j.value("profile_samples", (std::size_t)2001);
    if (kind == "gaussian") return make_gaussian(amplitude, n);
    if (kind == "bump") return make_bump(amplitude, n);
    if (kind == "zero") return make_zero();
    if (kind == "file") {
        const std::string path = j.value("path", "");
        if (path.empty()) throw InvalidInputError("profile=file requires \"path\"");
        return load_gridfunction_csv(path);
    }
    throw InvalidInputError("unknown profile: " + kind);
}

std::vector<double> grid_from_config(const json& j, const char* key) {
    if (j.contains(key)) {
        std::vector<double> g = j.at(key).get<std::vector<double>>();
        for (std::size_t i = 1; i < g.size(); ++i)
            if (g[i] <= g[i - 1]) throw InvalidInputError("grid not strictly increasing");
        return g;
    }
    return {};
}

std::string stamp(const json& cfg) { return "config_hash=" + io::hash_hex(cfg.dump()); }

std::filesystem::path outpath(const CommonArgs& a, const std::string& name) {
    std::filesystem::create_directories(a.out_dir);
    return std::filesystem::path(a.out_dir) / name;
}

int run_scatter(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    GridFunction q = profile_from_config(cfg);
    std::vector<double> kg = grid_from_config(cfg, "k_grid");
    if (kg.empty())
        kg = scatter::make_spectral_grid(cfg.value("k_min", 1e-3), cfg.value("k_max", 40.0),
                                         cfg.value("k_points", (std::size_t)400));
    scatter::ReflectOptions opt;
    opt.zero_tolerance = cfg.value("zero_tolerance", 1e-6);
    scatter::ScatteringTable tab = scatter::reflection_coefficients(q, kg, opt);

    scatter::save_table_csv(tab, outpath(args, "scatter_pos.csv").string(),
                            outpath(args, "scatter_neg.csv").string(), stamp(cfg));

    json meta;
    meta["config_hash"] = io::hash_hex(cfg.dump());
    meta["k_points"] = kg.size();
    meta["k_min"] = kg.front();
    meta["k_max"] = kg.back();
    meta["zero_tolerance"] = opt.zero_tolerance;
    meta["soliton_margin"] = tab.soliton_margin;
    meta["truncation_error_bound"] = q.truncation_error_bound();
    meta["window"] = {q.x_min(), q.x_max()};
    std::ofstream(outpath(args, "scatter_meta.json")) << meta.dump(2) << "\n";

    double max_r = 0.0;
    for (const auto& r : tab.pos) max_r = std::max(max_r, std::abs(r.r1));
    for (const auto& r : tab.neg) max_r = std::max(max_r, std::abs(r.r2));
    std::cout << "scatter: " << kg.size() << " k-points per half-line, max |r| = " << max_r
              << ", soliton margin = " << tab.soliton_margin << "\n";
    return 0;
}

int run_asymptote(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    const std::string pos = cfg.value("table_pos", "");
    const std::string neg = cfg.value("table_neg", "");
    if (pos.empty() || neg.empty())
        throw InvalidInputError("asymptote needs table_pos/table_neg (run scatter first)");
    if (!std::filesystem::exists(pos) || !std::filesystem::exists(neg))
        throw InvalidInputError("reflection table files missing (run scatter first)");
    scatter::ScatteringTable tab = scatter::load_table_csv(pos, neg);
    asym::ReflectionData refl(tab);

    std::vector<double> zetas = grid_from_config(cfg, "zeta_list");
    std::vector<double> ts = grid_from_config(cfg, "t_list");
    if (zetas.empty() || ts.empty())
        throw InvalidInputError("asymptote needs zeta_list and t_list");

    asym::LeadingOptions lopt;
    lopt.zeta_min = cfg.value("zeta_min", 0.1);
    lopt.phase.refine_tol = 1e-6 * args.tolerance_scale;

    io::CsvWriter csv(outpath(args, "asymptote.csv").string(), stamp(cfg));
    csv.header("zeta,t,k0,nu,phi,re_leading,im_leading");
    struct Key {
        double z, t;
    };
    std::vector<Key> keys;
    for (double z : zetas)
        for (double t : ts) keys.push_back({z, t});
    std::vector<asym::AsymptoticState> states =
        par::map<asym::AsymptoticState>(keys.size(), [&](std::size_t i) {
            return asym::leading_term(refl, keys[i].z, keys[i].t, lopt);
        });
    for (const auto& st : states)
        csv.row({st.zeta, st.t, st.k0, st.nu, st.phi, st.leading.real(), st.leading.imag()});
    std::cout << "asymptote: wrote " << states.size() << " rows\n";
    return 0;
}

int run_evolve(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    GridFunction q = profile_from_config(cfg);
    pde::EvolveParams p;
    p.L = cfg.value("L", 80.0);
    p.n_modes = cfg.value("n_modes", (std::size_t)8192);
    p.dt = cfg.value("dt", 1e-3);
    p.boundary_threshold = cfg.value("boundary_threshold", 1e-8);
    const double T = cfg.value("T", 1.0);
    std::vector<double> snaps = grid_from_config(cfg, "snapshot_times");

    pde::EvolutionRun run = pde::evolve(q, T, p, snaps);
    for (std::size_t i = 0; i < run.times.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_t%08.3f.csv", run.times[i]);
        io::CsvWriter csv(outpath(args, name).string(), stamp(cfg));
        csv.header("x,re_q,im_q");
        const auto xs = run.xgrid();
        for (std::size_t m = 0; m < xs.size(); ++m)
            csv.row({xs[m], run.snapshots[i][m].real(), run.snapshots[i][m].imag()});
    }
    {
        io::CsvWriter csv(outpath(args, "mass_series.csv").string(), stamp(cfg));
        csv.header("t,mass");
        for (std::size_t i = 0; i < run.times.size(); ++i)
            csv.row({run.times[i], run.mass_series[i]});
    }
    std::cout << "evolve: T=" << T << " mass_drift=" << run.mass_drift
              << " boundary_max=" << run.boundary_max << (run.valid ? "" : " [FLAGGED]")
              << "\n";

    // Optional asymptotic validation against a reflection table.
    if (cfg.contains("zeta_list") && cfg.contains("t_list")) {
        const std::string pos = cfg.value("table_pos", "");
        const std::string neg = cfg.value("table_neg", "");
        if (pos.empty() || !std::filesystem::exists(pos) || neg.empty() ||
            !std::filesystem::exists(neg))
            throw InvalidInputError("evolve validation needs table_pos/table_neg files");
        scatter::ScatteringTable tab = scatter::load_table_csv(pos, neg);
        asym::ReflectionData refl(tab);
        pde::ValidationTable vt = pde::validate_asymptotics(
            q, cfg.at("zeta_list").get<std::vector<double>>(),
            cfg.at("t_list").get<std::vector<double>>(), refl, p);
        io::CsvWriter csv(outpath(args, "validation.csv").string(), stamp(cfg));
        csv.header("zeta,t,abs_err,abs_leading,rel_err");
        for (const auto& r : vt.rows)
            csv.row({r.zeta, r.t, r.abs_err, std::abs(r.leading), r.rel_err});
        std::cout << "evolve: wrote validation table (" << vt.rows.size() << " rows)\n";
    }
    if (!run.valid) return 1;
    return 0;
}

int run_verify(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    GridFunction q = profile_from_config(cfg);
    std::vector<double> xs = grid_from_config(cfg, "x_list");
    std::vector<double> ks = grid_from_config(cfg, "k_list");
    if (xs.empty()) xs = {-1.0, -0.5, 0.0, 0.5, 1.0};
    if (ks.empty()) ks = {0.5, 1.0, 2.0, 4.0, 8.0};
    const int ray = cfg.value("ray", 1);

    struct Cell {
        double x, k, resid;
    };
    std::vector<Cell> cells;
    for (double x : xs)
        for (double k : ks) cells.push_back({x, k, 0.0});
    std::vector<double> resids = par::map<double>(cells.size(), [&](std::size_t i) {
        return rh::verify_jump(q, ray, cells[i].x, cells[i].k);
    });

    io::CsvWriter csv(outpath(args, "jump_residuals.csv").string(), stamp(cfg));
    csv.header("x,k,residual");
    double worst = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        csv.row({cells[i].x, cells[i].k, resids[i]});
        worst = std::max(worst, resids[i]);
    }

    // Reconstruction spot checks.
    std::vector<double> rx = grid_from_config(cfg, "recover_x");
    if (rx.empty()) rx = {-1.0, 0.0, 0.5};
    io::CsvWriter rcsv(outpath(args, "reconstruction.csv").string(), stamp(cfg));
    rcsv.header("x,re_q0,im_q0,re_recovered,im_recovered,abs_err");
    double worst_rec = 0.0;
    for (double x : rx) {
        const cd qr = rh::recover_q(q, x);
        const cd q0 = q(x);
        worst_rec = std::max(worst_rec, std::abs(qr - q0));
        rcsv.row({x, q0.real(), q0.imag(), qr.real(), qr.imag(), std::abs(qr - q0)});
    }

    const double jump_tol = 1e-6 * args.tolerance_scale;
    const double rec_tol = 1e-6 * args.tolerance_scale;
    std::cout << "verify: ray " << ray << " worst jump residual = " << worst
              << ", worst reconstruction error = " << worst_rec << "\n";
    if (worst > jump_tol || worst_rec > rec_tol) {
        std::cout << "verify: FAILED tolerance\n";
        return 1;
    }
    return 0;
}

int run_bounds(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    GridFunction q = profile_from_config(cfg);
    std::vector<double> kg = grid_from_config(cfg, "k_grid");
    if (kg.empty())
        for (double k = -10.0; k <= 1e-12; k += 0.5) kg.push_back(std::min(k, 0.0));
    std::vector<double> xg = grid_from_config(cfg, "x_grid");
    if (xg.empty())
        for (double x = -20.0; x <= 20.0 + 1e-9; x += 0.25) xg.push_back(x);

    bounds::CertifyOptions opt;
    opt.x33_tol = 1e-7 * args.tolerance_scale;
    opt.r2_tol = 1e-6 * args.tolerance_scale;
    bounds::BoundCertificate cert = bounds::certify_bounds(q, kg, xg, opt);

    json j;
    j["config_hash"] = io::hash_hex(cfg.dump());
    j["passed"] = cert.passed;
    j["min_f"] = {cert.min_f[0], cert.min_f[1], cert.min_f[2]};
    j["x33_residual"] = cert.x33_residual;
    j["r2_identity_residual"] = cert.r2_identity_residual;
    j["r2_margin"] = cert.r2_margin;
    j["k_range"] = {cert.k_min, cert.k_max};
    j["x_range"] = {cert.x_min, cert.x_max};
    j["notes"] = cert.notes;
    std::ofstream(outpath(args, "bound_certificate.json")) << j.dump(2) << "\n";

    io::CsvWriter csv(outpath(args, "bound_scan.csv").string(), stamp(cfg));
    csv.header("k,min_f1,min_f2,min_f3,one_minus_r2_sq");
    for (const auto& row : cert.rows) csv.row({row[0], row[1], row[2], row[3], row[4]});

    std::cout << "bounds: " << (cert.passed ? "PASS" : "FAIL")
              << " min_f=" << std::min({cert.min_f[0], cert.min_f[1], cert.min_f[2]})
              << " x33_residual=" << cert.x33_residual << " r2_margin=" << cert.r2_margin
              << "\n";
    return cert.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverse-scattering toolkit for the quadratic-derivative NLS (3x3 Lax pair)"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonArgs args;
    app.add_option("--config", args.config_path, "JSON config file");
    app.add_option("--out", args.out_dir, "output directory");
    app.add_option("--threads", args.threads, "worker threads (0 = library default)");
    app.add_option("--tolerance-scale", args.tolerance_scale, "scale all pass tolerances");

    auto* sc = app.add_subcommand("scatter", "reflection coefficients on a spectral grid");
    auto* as = app.add_subcommand("asymptote", "long-time leading terms on (zeta, t)");
    auto* ev = app.add_subcommand("evolve", "pseudospectral time evolution");
    auto* ve = app.add_subcommand("verify", "jump-condition and reconstruction checks");
    auto* bo = app.add_subcommand("bounds", "appendix positivity certificate");

    CLI11_PARSE(app, argc, argv);
    if (args.threads > 0) par::set_threads(args.threads);

    try {
        if (sc->parsed()) return run_scatter(args);
        if (as->parsed()) return run_asymptote(args);
        if (ev->parsed()) return run_evolve(args);
        if (ve->parsed()) return run_verify(args);
        if (bo->parsed()) return run_bounds(args);
    } catch (const SolitonAssumptionError& e) {
        std::cerr << "assumption violation: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
