// Command-line front end: reads a JSON config, applies flag overrides, runs
// one pipeline, and writes JSON + CSV reports. Exit codes: 0 all checks pass,
// 1 at least one failed check, 2 usage/config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lorot/content.hpp"
#include "lorot/localization.hpp"
#include "lorot/model_forms.hpp"
#include "lorot/report.hpp"
#include "lorot/rng.hpp"
#include "lorot/serde.hpp"
#include "lorot/transport.hpp"
#include "lorot/verify.hpp"

namespace {

constexpr uint64_t kDefaultSeed = 20240817;

int thread_count() {
    if (const char* env = std::getenv("LOROT_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 4;
}

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed = kDefaultSeed;
    long long n = 100000;
    bool n_set = false;
    bool seed_set = false;
    double m = 1.0;
    bool m_set = false;
    std::vector<double> slab;
    std::vector<double> r0;
    double a = 1.0;
    bool a_set = false;
    double K = 0.0;
    bool K_set = false;
    double N = 2.0;
    bool N_set = false;
    double p = 1.0;
    bool p_set = false;
    double t = 0.5;
    bool t_set = false;
    std::vector<double> t_grid;
    bool past = false;
};

nlohmann::json load_config(const Options& opt) {
    if (opt.config_path.empty()) return nlohmann::json::object();
    std::ifstream is(opt.config_path);
    if (!is) throw std::runtime_error("cannot open config file: " + opt.config_path);
    nlohmann::json j;
    is >> j;
    if (j.contains("n_samples") && j["n_samples"].get<long long>() < 100)
        throw std::runtime_error("config: n_samples must be >= 100");
    return j;
}

// flag > config > default
template <typename T>
T pick(const nlohmann::json& cfg, const char* key, bool flag_set, T flag_value, T fallback) {
    if (flag_set) return flag_value;
    if (cfg.contains(key)) return cfg[key].get<T>();
    return fallback;
}

lorot::CurvatureParams curvature_of(const nlohmann::json& cfg, const Options& opt) {
    lorot::CurvatureParams params;
    if (cfg.contains("curvature")) params = cfg["curvature"].get<lorot::CurvatureParams>();
    if (opt.K_set) params.K = opt.K;
    if (opt.N_set) params.N = opt.N;
    params.validate();
    return params;
}

int emit(const std::string& out_dir, const std::string& name,
         const std::vector<lorot::VerificationReport>& reports) {
    const std::string base = out_dir + "/" + name;
    lorot::write_reports_json(base + ".json", reports);
    lorot::write_reports_csv(base + ".csv", reports);
    for (const auto& r : reports)
        std::cout << r.name << ": " << (r.pass ? "pass" : "FAIL") << "  lhs=" << r.lhs
                  << " rhs=" << r.rhs << " slack=" << r.slack << "\n";
    std::cout << "wrote " << base << ".json, " << base << ".csv\n";
    return lorot::all_pass(reports) ? 0 : 1;
}

// Zero-mean test function built from disjoint chronological pairs, so the
// signed parts are couplable by construction.
std::vector<double> paired_zero_mean(const lorot::CausalSample& sample, uint64_t seed) {
    const int n = sample.n();
    lorot::Rng rng(seed, 0xf0);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(order[i], order[rng.below(static_cast<uint64_t>(i + 1))]);
    std::vector<double> f(n, 0.0);
    std::vector<uint8_t> used(n, 0);
    for (int ii = 0; ii < n; ++ii) {
        const int i = order[ii];
        if (used[i]) continue;
        for (int jj = ii + 1; jj < n; ++jj) {
            const int j = order[jj];
            if (used[j]) continue;
            int src = -1, dst = -1;
            if (sample.tau_at(i, j) > 0.0) {
                src = i;
                dst = j;
            } else if (sample.tau_at(j, i) > 0.0) {
                src = j;
                dst = i;
            } else {
                continue;
            }
            const double c = 0.5 + rng.uniform();
            f[src] = c / sample.weights[src];
            f[dst] = -c / sample.weights[dst];
            used[i] = used[j] = 1;
            break;
        }
    }
    return f;
}

int run_sprinkle(const nlohmann::json& cfg, const Options& opt) {
    const auto region = cfg.at("region").get<lorot::RegionDescriptor>();
    const auto n = pick<long long>(cfg, "n_samples", opt.n_set, opt.n, 10000);
    const auto seed = pick<uint64_t>(cfg, "seed", opt.seed_set, opt.seed, kDefaultSeed);
    const auto sample = lorot::sprinkle(region, static_cast<int>(n), seed, thread_count());
    lorot::write_samples_file(opt.out_dir + "/samples.jsonl", sample);
    std::cout << "sprinkled " << sample.n() << " events, total weight " << sample.total_weight()
              << "\n";
    std::cout << "wrote " << opt.out_dir << "/samples.jsonl\n";
    return 0;
}

int run_transport(const nlohmann::json& cfg, const Options& opt) {
    const auto region = cfg.at("region").get<lorot::RegionDescriptor>();
    const auto n = pick<long long>(cfg, "n_samples", opt.n_set, opt.n, 200);
    const auto seed = pick<uint64_t>(cfg, "seed", opt.seed_set, opt.seed, kDefaultSeed);
    const double p = pick<double>(cfg, "p", opt.p_set, opt.p, 1.0);
    const auto sample = lorot::sprinkle(region, static_cast<int>(n), seed, thread_count());

    const int t_ax = sample.st.time_axis();
    std::vector<int> idx(sample.n());
    for (int i = 0; i < sample.n(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return sample.events[a].coords[t_ax] < sample.events[b].coords[t_ax];
    });
    const std::vector<int> early(idx.begin(), idx.begin() + sample.n() / 2);
    const std::vector<int> late(idx.begin() + sample.n() / 2, idx.end());
    const auto mu = lorot::DiscreteMeasure::uniform_on(early);
    const auto nu = lorot::DiscreteMeasure::uniform_on(late);
    const auto plan = lorot::solve_lp_optimal(sample, mu, nu, p);

    nlohmann::json pj;
    pj["p"] = p;
    pj["feasible"] = plan.feasible;
    pj["value"] = plan.feasible ? plan.value : 0.0;
    pj["objective"] = plan.feasible ? plan.objective : 0.0;
    auto entries = nlohmann::json::array();
    for (const auto& e : plan.entries)
        entries.push_back({{"src", e.src}, {"dst", e.dst}, {"mass", e.mass}});
    pj["entries"] = std::move(entries);
    lorot::write_text_file(opt.out_dir + "/plan.json", pj.dump(2) + "\n");

    lorot::VerificationReport rep;
    rep.name = "lp_value";
    rep.lhs = plan.feasible ? plan.value : -std::numeric_limits<double>::infinity();
    rep.rhs = rep.lhs;
    rep.slack = plan.feasible ? 0.0 : -1.0;
    rep.tolerance = 0.0;
    rep.finalize();
    return emit(opt.out_dir, "transport", {rep});
}

int run_localize(const nlohmann::json& cfg, const Options& opt) {
    const auto region = cfg.at("region").get<lorot::RegionDescriptor>();
    const auto n = pick<long long>(cfg, "n_samples", opt.n_set, opt.n, 20);
    const auto seed = pick<uint64_t>(cfg, "seed", opt.seed_set, opt.seed, kDefaultSeed);
    const double p = pick<double>(cfg, "p", opt.p_set, opt.p, 1.0);
    const auto sample = lorot::sprinkle(region, static_cast<int>(n), seed, thread_count());
    const auto f = paired_zero_mean(sample, seed);
    const auto loc = lorot::localize_zero_mean(sample, f, p);

    std::vector<lorot::VerificationReport> reports;
    for (std::size_t k = 0; k < loc.rays.size(); ++k) {
        lorot::VerificationReport rep;
        rep.name = "ray[" + std::to_string(k) + "]";
        rep.lhs = loc.rays[k].imbalance;
        rep.rhs = 1e-9 * loc.rays[k].mass;
        rep.slack = rep.rhs - rep.lhs;
        rep.tolerance = 0.0;
        rep.metadata["points"] = std::to_string(loc.rays[k].indices.size());
        rep.finalize();
        reports.push_back(std::move(rep));
    }
    return emit(opt.out_dir, "localize", reports);
}

int run_content(const nlohmann::json& cfg, const Options& opt) {
    const auto st = cfg.at("spacetime").get<lorot::SpacetimeDescriptor>();
    const auto A = cfg.at("V").get<lorot::AchronalSetDescriptor>();
    const auto n = pick<long long>(cfg, "n_samples", opt.n_set, opt.n, 100000);
    const auto seed = pick<uint64_t>(cfg, "seed", opt.seed_set, opt.seed, kDefaultSeed);
    std::vector<double> eps_grid = cfg.value("eps_grid", std::vector<double>{0.05, 0.1});
    lorot::RegionDescriptor window;
    if (cfg.contains("region")) window = cfg["region"].get<lorot::RegionDescriptor>();
    else window = lorot::thickened_window(st, A, 0.2);
    const auto est = opt.past ? lorot::past_content(st, A, window, eps_grid, n, seed)
                              : lorot::future_content(st, A, window, eps_grid, n, seed);
    lorot::write_text_file(opt.out_dir + "/estimate.json", est.to_json().dump(2) + "\n");

    lorot::VerificationReport rep;
    rep.name = opt.past ? "past_content" : "future_content";
    rep.lhs = est.value;
    rep.rhs = est.value;
    rep.slack = est.monotone_trend ? 0.0 : -1.0;
    rep.tolerance = 0.0;
    rep.stderr_ = est.stderr_;
    rep.metadata["monotone_trend"] = est.monotone_trend ? "true" : "false";
    rep.finalize();
    return emit(opt.out_dir, "content", {rep});
}

int run_isoperimetry(const nlohmann::json& cfg, const Options& opt) {
    const auto st = cfg.at("spacetime").get<lorot::SpacetimeDescriptor>();
    const auto V = cfg.at("V").get<lorot::AchronalSetDescriptor>();
    const auto S = cfg.at("S").get<lorot::AchronalSetDescriptor>();
    const auto params = curvature_of(cfg, opt);
    const auto n = pick<long long>(cfg, "n_samples", opt.n_set, opt.n, 200000);
    const auto seed = pick<uint64_t>(cfg, "seed", opt.seed_set, opt.seed, kDefaultSeed);
    const auto rep = lorot::check_isoperimetric(st, V, S, params, n, seed);
    return emit(opt.out_dir, "isoperimetry", {rep});
}

int run_monotonicity(const nlohmann::json& cfg, const Options& opt) {
    const auto region = cfg.at("region").get<lorot::RegionDescriptor>();
    const auto V = cfg.at("V").get<lorot::AchronalSetDescriptor>();
    const auto params = curvature_of(cfg, opt);
    const auto n = pick<long long>(cfg, "n_samples", opt.n_set, opt.n, 100000);
    const auto seed = pick<uint64_t>(cfg, "seed", opt.seed_set, opt.seed, kDefaultSeed);
    std::vector<double> grid = opt.t_grid;
    if (grid.empty() && cfg.contains("t_grid")) grid = cfg["t_grid"].get<std::vector<double>>();
    if (grid.empty()) throw std::runtime_error("verify-monotonicity needs --t-grid or config t_grid");
    const auto reports =
        lorot::check_monotonicity(region, V, params, grid, static_cast<int>(n), seed);
    return emit(opt.out_dir, "monotonicity", reports);
}

int run_schwarzschild(const nlohmann::json& cfg, const Options& opt) {
    const double m = pick<double>(cfg, "m", opt.m_set, opt.m, 1.0);
    std::vector<double> slab = opt.slab;
    if (slab.empty() && cfg.contains("slab")) slab = cfg["slab"].get<std::vector<double>>();
    if (slab.empty()) slab = {0.0, 1.0};
    if (slab.size() != 2) throw std::runtime_error("--slab needs exactly two values");
    std::vector<double> grid = opt.r0;
    if (grid.empty() && cfg.contains("r0_grid")) grid = cfg["r0_grid"].get<std::vector<double>>();
    if (grid.empty()) throw std::runtime_error("verify-schwarzschild needs --r0 or config r0_grid");
    const auto reports = lorot::check_schwarzschild_bound(m, slab[0], slab[1], grid);
    return emit(opt.out_dir, "schwarzschild", reports);
}

int run_brunn_minkowski(const nlohmann::json& cfg, const Options& opt) {
    const auto st = cfg.at("spacetime").get<lorot::SpacetimeDescriptor>();
    const auto params = curvature_of(cfg, opt);
    const auto n = pick<long long>(cfg, "n_samples", opt.n_set, opt.n, 20000);
    const auto seed = pick<uint64_t>(cfg, "seed", opt.seed_set, opt.seed, kDefaultSeed);
    const double t = pick<double>(cfg, "t", opt.t_set, opt.t, 0.5);
    const double p = pick<double>(cfg, "p", opt.p_set, opt.p, 1.0);
    const auto b0 = cfg.at("A0_box");
    const auto b1 = cfg.at("A1_box");
    const auto lo0 = b0.at("lo").get<std::vector<double>>();
    const auto hi0 = b0.at("hi").get<std::vector<double>>();
    const auto lo1 = b1.at("lo").get<std::vector<double>>();
    const auto hi1 = b1.at("hi").get<std::vector<double>>();

    lorot::RegionDescriptor hull;
    hull.st = st;
    hull.kind = lorot::RegionKind::box;
    hull.lo.resize(st.dim);
    hull.hi.resize(st.dim);
    for (int k = 0; k < st.dim; ++k) {
        hull.lo[k] = std::min(lo0[k], lo1[k]);
        hull.hi[k] = std::max(hi0[k], hi1[k]);
    }
    const auto sample = lorot::sprinkle(hull, static_cast<int>(n), seed, thread_count());
    auto inside = [&](const lorot::Event& e, const std::vector<double>& lo,
                      const std::vector<double>& hi) {
        for (int k = 0; k < hull.st.dim; ++k)
            if (e.coords[k] < lo[k] || e.coords[k] > hi[k]) return false;
        return true;
    };
    std::vector<int> A0, A1;
    for (int i = 0; i < sample.n(); ++i) {
        if (inside(sample.events[i], lo0, hi0)) A0.push_back(i);
        if (inside(sample.events[i], lo1, hi1)) A1.push_back(i);
    }
    const auto rep = lorot::check_brunn_minkowski(sample, A0, A1, t, params, p);
    return emit(opt.out_dir, "brunn_minkowski", {rep});
}

int run_sharpness(const nlohmann::json& cfg, const Options& opt) {
    const int n = static_cast<int>(pick<long long>(cfg, "n", opt.n_set, opt.n, 2));
    const double a = pick<double>(cfg, "a", opt.a_set, opt.a, 1.0);
    const auto rep = lorot::check_claim_sharp_identity(n, a);
    return emit(opt.out_dir, "sharpness", {rep});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic Lorentzian optimal-transport toolkit"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "JSON config file");
    app.add_option("--out", opt.out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", opt.seed, "RNG seed");
    auto* n_opt = app.add_option("--n", opt.n, "sample count (or integer parameter)");
    auto* m_opt = app.add_option("--m", opt.m, "schwarzschild mass");
    app.add_option("--slab", opt.slab, "schwarzschild slab bounds")->expected(2);
    app.add_option("--r0", opt.r0, "schwarzschild slice radii");
    auto* a_opt = app.add_option("--a", opt.a, "cone aperture / slope");
    auto* K_opt = app.add_option("--K", opt.K, "curvature bound");
    auto* N_opt = app.add_option("--N", opt.N, "dimension bound");
    auto* p_opt = app.add_option("--p", opt.p, "transport exponent");
    auto* t_opt = app.add_option("--t", opt.t, "interpolation time");
    app.add_option("--t-grid", opt.t_grid, "level-set parameter grid");
    app.add_flag("--past", opt.past, "past-direction content");

    for (const char* name : {"sprinkle", "transport", "localize", "content", "verify-isoperimetry",
                             "verify-monotonicity", "verify-schwarzschild", "verify-brunn-minkowski",
                             "verify-sharpness"})
        app.add_subcommand(name)->fallthrough();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    opt.seed_set = seed_opt->count() > 0;
    opt.n_set = n_opt->count() > 0;
    opt.m_set = m_opt->count() > 0;
    opt.a_set = a_opt->count() > 0;
    opt.K_set = K_opt->count() > 0;
    opt.N_set = N_opt->count() > 0;
    opt.p_set = p_opt->count() > 0;
    opt.t_set = t_opt->count() > 0;

    try {
        const auto cfg = load_config(opt);
        std::filesystem::create_directories(opt.out_dir);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "sprinkle") return run_sprinkle(cfg, opt);
        if (sub == "transport") return run_transport(cfg, opt);
        if (sub == "localize") return run_localize(cfg, opt);
        if (sub == "content") return run_content(cfg, opt);
        if (sub == "verify-isoperimetry") return run_isoperimetry(cfg, opt);
        if (sub == "verify-monotonicity") return run_monotonicity(cfg, opt);
        if (sub == "verify-schwarzschild") return run_schwarzschild(cfg, opt);
        if (sub == "verify-brunn-minkowski") return run_brunn_minkowski(cfg, opt);
        if (sub == "verify-sharpness") return run_sharpness(cfg, opt);
        std::cerr << "unknown subcommand: " << sub << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
