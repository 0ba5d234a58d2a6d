#include "lorot/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lorot/rng.hpp"
#include "lorot/serde.hpp"

namespace lorot {

namespace {

constexpr long long kPerPointProposalCap = 5000000;

double spatial_norm(const Event& x, int dim) {
    double s = 0.0;
    for (int i = 0; i + 1 < dim; ++i) s += x.coords[i] * x.coords[i];
    return std::sqrt(s);
}

bool inside_box(const RegionDescriptor& region, const Event& x) {
    for (std::size_t k = 0; k < region.lo.size(); ++k)
        if (x.coords[k] < region.lo[k] || x.coords[k] > region.hi[k]) return false;
    return true;
}

} // namespace

std::string region_kind_name(RegionKind k) {
    switch (k) {
        case RegionKind::box: return "box";
        case RegionKind::cone: return "cone";
        case RegionKind::slope_cone: return "slope_cone";
        case RegionKind::cone_vs: return "cone_vs";
        case RegionKind::slab: return "slab";
        case RegionKind::diamond: return "diamond";
        case RegionKind::near_set: return "near_set";
    }
    throw std::logic_error("region_kind_name: unknown kind");
}

RegionKind region_kind_from_name(const std::string& name) {
    if (name == "box") return RegionKind::box;
    if (name == "cone") return RegionKind::cone;
    if (name == "slope_cone") return RegionKind::slope_cone;
    if (name == "cone_vs") return RegionKind::cone_vs;
    if (name == "slab") return RegionKind::slab;
    if (name == "diamond") return RegionKind::diamond;
    if (name == "near_set") return RegionKind::near_set;
    throw std::invalid_argument("unknown region kind: " + name);
}

void RegionDescriptor::validate() const {
    st.validate();
    if (static_cast<int>(lo.size()) != st.dim || static_cast<int>(hi.size()) != st.dim)
        throw std::invalid_argument("region: box bounds must match the chart dimension");
    for (int k = 0; k < st.dim; ++k)
        if (!(lo[k] < hi[k])) throw std::invalid_argument("region: need lo < hi per axis");
    switch (kind) {
        case RegionKind::box:
        case RegionKind::cone:
        case RegionKind::slab:
            break;
        case RegionKind::slope_cone:
            if (st.kind != Chart::minkowski)
                throw std::invalid_argument("slope_cone regions live on a minkowski chart");
            if (!(slope_a > 1.0)) throw std::invalid_argument("slope_cone: need slope_a > 1");
            break;
        case RegionKind::cone_vs:
            if (!has_S) throw std::invalid_argument("cone_vs: upper set S is required");
            if (has_V) V.validate(st);
            S.validate(st);
            break;
        case RegionKind::diamond:
            if (!has_V || !has_S) throw std::invalid_argument("diamond: need point sets V and S");
            if (V.kind != SetKind::point || S.kind != SetKind::point)
                throw std::invalid_argument("diamond: V and S must be points");
            V.validate(st);
            S.validate(st);
            break;
        case RegionKind::near_set:
            if (!has_V) throw std::invalid_argument("near_set: base set V is required");
            if (!(eps > 0.0)) throw std::invalid_argument("near_set: need eps > 0");
            V.validate(st);
            break;
    }
}

double RegionDescriptor::box_volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < lo.size(); ++k) v *= hi[k] - lo[k];
    return v;
}

bool region_contains(const RegionDescriptor& region, const Event& x) {
    if (!inside_box(region, x)) return false;
    if (!chart_contains(region.st, x)) return false;
    const auto& st = region.st;
    switch (region.kind) {
        case RegionKind::box:
        case RegionKind::cone:
        case RegionKind::slab:
            break;
        case RegionKind::slope_cone: {
            const double t = x.coords[st.dim - 1];
            const double r = spatial_norm(x, st.dim);
            if (t < std::sqrt(region.slope_a) * r) return false;
            if (region.radius > 0.0 && t * t - r * r > region.radius * region.radius) return false;
            break;
        }
        case RegionKind::cone_vs: {
            if (region.has_V) {
                if (tau_signed_from_set(st, region.V, x) < 0.0) return false;
            } else {
                AchronalSetDescriptor origin;
                origin.kind = SetKind::point;
                if (tau_signed_from_set(st, origin, x) < 0.0) return false;
            }
            if (tau_signed_from_set(st, region.S, x) > 0.0) return false;
            break;
        }
        case RegionKind::diamond: {
            const Event p = st.event(region.V.center_or_origin(st));
            const Event q = st.event(region.S.center_or_origin(st));
            if (!(tau(st, p, x) > 0.0)) return false;
            if (!(tau(st, x, q) > 0.0)) return false;
            break;
        }
        case RegionKind::near_set: {
            const double u = tau_signed_from_set(st, region.V, x);
            if (!(std::fabs(u) < region.eps)) return false;
            break;
        }
    }
    if (region.extra && !region.extra(x)) return false;
    return true;
}

double density_cap(const RegionDescriptor& region) {
    const auto& st = region.st;
    switch (st.kind) {
        case Chart::minkowski:
        case Chart::cone:
            return 1.0;
        case Chart::warped:
            return st.profile == WarpProfile::unit ? 1.0 : std::max(warp_theta(st, region.lo[1]), warp_theta(st, region.hi[1]));
        case Chart::schwarzschild_interior: {
            const double r = std::min(region.hi[1], 2.0 * st.mass);
            return r * r;
        }
    }
    throw std::logic_error("density_cap: unknown chart");
}

double CausalSample::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double CausalSample::tau_at(int i, int j) const {
    if (has_matrices) return tau_mat[static_cast<std::size_t>(i) * events.size() + j];
    double t = tau(st, events[i], events[j]);
    if (t < 1e-12) t = 0.0;
    return t;
}

bool CausalSample::causal_at(int i, int j) const {
    if (has_matrices) return causal_mat[static_cast<std::size_t>(i) * events.size() + j] != 0;
    return causally_related(st, events[i], events[j]);
}

namespace {

void fill_matrices(CausalSample& sample) {
    const std::size_t n = sample.events.size();
    sample.tau_mat.assign(n * n, 0.0);
    sample.causal_mat.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double t = tau(sample.st, sample.events[i], sample.events[j]);
            if (t < 1e-12) t = 0.0;
            sample.tau_mat[i * n + j] = t;
            sample.causal_mat[i * n + j] =
                causally_related(sample.st, sample.events[i], sample.events[j]) ? 1 : 0;
        }
    }
    sample.has_matrices = true;
}

bool matrices_supported(const SpacetimeDescriptor& st, int n) {
    return st.kind != Chart::schwarzschild_interior && n <= 4096;
}

} // namespace

CausalSample sprinkle(const RegionDescriptor& region, int n, uint64_t seed, int workers,
                      bool want_matrices) {
    region.validate();
    if (n <= 0) throw std::invalid_argument("sprinkle: need n > 0");
    const double cap = density_cap(region);
    const auto& st = region.st;

    CausalSample sample;
    sample.st = st;
    sample.seed = seed;
    sample.events.assign(n, Event{st.kind, std::vector<double>(st.dim, 0.0)});

    std::vector<long long> proposals_per_point(n, 0);
    std::atomic<bool> failed{false};

    auto draw_range = [&](int begin, int end) {
        std::vector<double> c(st.dim);
        for (int i = begin; i < end && !failed.load(std::memory_order_relaxed); ++i) {
            Rng rng(seed, static_cast<uint64_t>(i));
            long long trials = 0;
            while (true) {
                ++trials;
                if (trials > kPerPointProposalCap) {
                    failed.store(true, std::memory_order_relaxed);
                    break;
                }
                for (int k = 0; k < st.dim; ++k) c[k] = rng.uniform(region.lo[k], region.hi[k]);
                Event e{st.kind, c};
                if (!region_contains(region, e)) continue;
                if (rng.uniform() * cap > volume_density(st, e)) continue;
                sample.events[i] = std::move(e);
                break;
            }
            proposals_per_point[i] = trials;
        }
    };

    int nw = std::max(1, std::min<int>(workers, std::thread::hardware_concurrency() == 0
                                                    ? 1
                                                    : static_cast<int>(std::thread::hardware_concurrency())));
    nw = std::min(nw, n);
    if (nw <= 1) {
        draw_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + nw - 1) / nw;
        for (int w = 0; w < nw; ++w) {
            const int b = w * chunk;
            const int e = std::min(n, b + chunk);
            if (b < e) pool.emplace_back(draw_range, b, e);
        }
        for (auto& t : pool) t.join();
    }

    long long total_proposals = 0;
    for (long long t : proposals_per_point) total_proposals += t;
    if (failed.load() || static_cast<double>(n) / static_cast<double>(total_proposals) < 1e-4)
        throw std::runtime_error("sprinkle: acceptance rate below 1e-4, region nearly null in its box");

    const double vol_hat = region.box_volume() * cap * static_cast<double>(n) /
                           static_cast<double>(total_proposals);
    sample.weights.assign(n, vol_hat / n);

    if (want_matrices && matrices_supported(st, n)) fill_matrices(sample);
    return sample;
}

VolumeEstimate estimate_volume(const RegionDescriptor& region, long long proposals, uint64_t seed) {
    region.validate();
    if (proposals <= 0) throw std::invalid_argument("estimate_volume: need proposals > 0");
    const double cap = density_cap(region);
    const auto& st = region.st;
    Rng rng(seed, 0x766f6c);
    std::vector<double> c(st.dim);
    long long k = 0;
    for (long long t = 0; t < proposals; ++t) {
        for (int d = 0; d < st.dim; ++d) c[d] = rng.uniform(region.lo[d], region.hi[d]);
        Event e{st.kind, c};
        if (!region_contains(region, e)) continue;
        if (rng.uniform() * cap > volume_density(st, e)) continue;
        ++k;
    }
    const double scale = region.box_volume() * cap;
    const double p = static_cast<double>(k) / static_cast<double>(proposals);
    VolumeEstimate est;
    est.value = scale * p;
    est.stderr_ = scale * std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(proposals)));
    est.proposals = proposals;
    est.accepted = k;
    return est;
}

void write_samples(std::ostream& os, const CausalSample& sample) {
    nlohmann::json header;
    header["format"] = "causal_sample";
    header["spacetime"] = sample.st;
    header["n"] = sample.n();
    header["seed"] = sample.seed;
    os << header.dump() << "\n";
    for (int i = 0; i < sample.n(); ++i) {
        nlohmann::json row;
        row["coords"] = sample.events[i].coords;
        row["weight"] = sample.weights[i];
        os << row.dump() << "\n";
    }
}

void write_samples_file(const std::string& path, const CausalSample& sample) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_samples(os, sample);
}

CausalSample read_samples(std::istream& is, bool want_matrices) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("sample stream: missing header line");
    const auto header = nlohmann::json::parse(line);
    if (header.value("format", "") != "causal_sample")
        throw std::runtime_error("sample stream: unexpected format tag");
    CausalSample sample;
    sample.st = header.at("spacetime").get<SpacetimeDescriptor>();
    sample.seed = header.value("seed", 0ULL);
    const int n = header.at("n").get<int>();
    sample.events.reserve(n);
    sample.weights.reserve(n);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto row = nlohmann::json::parse(line);
        sample.events.push_back(sample.st.event(row.at("coords").get<std::vector<double>>()));
        sample.weights.push_back(row.at("weight").get<double>());
    }
    if (sample.n() != n) throw std::runtime_error("sample stream: row count mismatch with header");
    if (want_matrices && matrices_supported(sample.st, sample.n())) fill_matrices(sample);
    return sample;
}

CausalSample read_samples_file(const std::string& path, bool want_matrices) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_samples(is, want_matrices);
}

} // namespace lorot
