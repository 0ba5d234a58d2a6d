#include "lorot/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "lorot/distortion.hpp"

namespace lorot {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool point_like(SetKind k) {
    return k == SetKind::point || k == SetKind::tau_level || k == SetKind::hyperboloid;
}

double schwarzschild_r_from_tau(double m, double target) {
    double lo = 2.0 * m * 1e-15;
    double hi = 2.0 * m * (1.0 - 1e-15);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (schwarzschild_tau_to_singularity(m, mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

double transverse_label(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                        const Event& x) {
    switch (V.kind) {
        case SetKind::point:
        case SetKind::tau_level:
        case SetKind::hyperboloid: {
            const auto q = V.center_or_origin(st);
            const double dt = x.coords[st.dim - 1] - q[st.dim - 1];
            if (dt == 0.0) return kNaN;
            const double u = (x.coords[0] - q[0]) / dt;
            if (!(std::fabs(u) < 1.0)) return kNaN;
            return std::atanh(u);
        }
        case SetKind::coordinate_slice:
        case SetKind::singular_set:
            return x.coords[0];
    }
    return kNaN;
}

Event RayDecomposition::ray_point(int alpha, double s) const {
    const Ray& ray = rays.at(alpha);
    if (point_like(V.kind)) {
        auto c = V.center_or_origin(st);
        const double reach = (V.kind == SetKind::point ? 0.0 : V.level) + s;
        c[0] += reach * std::sinh(ray.label);
        c[st.dim - 1] += reach * std::cosh(ray.label);
        return st.event(c);
    }
    if (V.kind == SetKind::coordinate_slice) {
        if (st.kind == Chart::minkowski || st.kind == Chart::cone) {
            std::vector<double> c(st.dim, 0.0);
            c[0] = ray.label;
            c[st.dim - 1] = V.value + s;
            return st.event(c);
        }
        if (st.kind == Chart::warped) return st.event({ray.label, V.value + s});
        const double target = schwarzschild_tau_to_singularity(st.mass, V.value) - s;
        return st.event({ray.label, schwarzschild_r_from_tau(st.mass, target), 1.5707963267948966, 0.0});
    }
    // singular_set: s is negative, -s of proper time left to the boundary
    return st.event({ray.label, schwarzschild_r_from_tau(st.mass, -s), 1.5707963267948966, 0.0});
}

nlohmann::json RayDecomposition::to_json() const {
    nlohmann::json j;
    j["cells"] = cells;
    j["bins"] = bins;
    j["s_range"] = {s_lo, s_hi};
    j["bin_width"] = bin_width;
    j["total_volume"] = total_volume;
    j["unassigned_fraction"] = unassigned_fraction;
    auto arr = nlohmann::json::array();
    for (const auto& r : rays) {
        nlohmann::json rj;
        rj["label"] = r.label;
        rj["label_range"] = {r.label_lo, r.label_hi};
        rj["q"] = r.q;
        rj["s"] = r.bin_centers;
        rj["h"] = r.h;
        rj["h_stderr"] = r.h_stderr;
        rj["counts"] = r.counts;
        arr.push_back(std::move(rj));
    }
    j["rays"] = std::move(arr);
    return j;
}

RayDecomposition build_ray_decomposition(const CausalSample& sample,
                                         const AchronalSetDescriptor& V, int cells, int bins,
                                         double s_lo, double s_hi) {
    V.validate(sample.st);
    if (bins < 2) throw std::invalid_argument("ray decomposition: need at least 2 bins");
    const int n = sample.n();
    if (n == 0) throw std::invalid_argument("ray decomposition: empty sample");

    std::vector<double> s(n), lab(n);
    for (int i = 0; i < n; ++i) {
        s[i] = tau_signed_from_set(sample.st, V, sample.events[i]);
        lab[i] = transverse_label(sample.st, V, sample.events[i]);
    }

    if (std::isnan(s_lo) || std::isnan(s_hi)) {
        double smax = -std::numeric_limits<double>::infinity();
        double smin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            if (std::isfinite(s[i])) {
                smax = std::max(smax, s[i]);
                smin = std::min(smin, s[i]);
            }
        if (V.kind == SetKind::singular_set) {
            // everything lies in the past of the singular boundary
            if (std::isnan(s_lo)) s_lo = smin;
            if (std::isnan(s_hi)) s_hi = 0.0;
        } else if (std::isnan(s_lo) && !std::isnan(s_hi) && s_hi <= 0.0) {
            // a nonpositive upper end selects the past side of V
            s_lo = smin;
        } else {
            if (std::isnan(s_lo)) s_lo = 0.0;
            if (std::isnan(s_hi)) s_hi = smax;
        }
        if (!(s_hi > s_lo)) throw std::invalid_argument("ray decomposition: empty time range");
    }

    std::vector<int> used;
    double unassigned_w = 0.0;
    double total_w = 0.0;
    for (int i = 0; i < n; ++i) {
        total_w += sample.weights[i];
        const bool in_range = s[i] > s_lo && s[i] <= s_hi;
        if (std::fabs(s[i]) <= 1e-12 || (in_range && std::isnan(lab[i]))) {
            unassigned_w += sample.weights[i];
            continue;
        }
        if (in_range) used.push_back(i);
    }
    if (used.empty()) throw std::invalid_argument("ray decomposition: no usable points in the s-range");

    RayDecomposition d;
    d.st = sample.st;
    d.V = V;
    d.bins = bins;
    d.s_lo = s_lo;
    d.s_hi = s_hi;
    d.bin_width = (s_hi - s_lo) / bins;
    d.unassigned_fraction = unassigned_w / total_w;

    if (cells <= 0)
        cells = std::max(1, std::min(16, static_cast<int>(std::floor(std::sqrt(double(used.size()))))));
    d.cells = cells;

    std::sort(used.begin(), used.end(), [&](int a, int b) {
        if (lab[a] != lab[b]) return lab[a] < lab[b];
        if (s[a] != s[b]) return s[a] < s[b];
        return a < b;
    });

    double w_used = 0.0;
    for (int i : used) w_used += sample.weights[i];
    d.total_volume = w_used;

    d.rays.assign(cells, Ray{});
    for (auto& r : d.rays) {
        r.bin_centers.resize(bins);
        for (int b = 0; b < bins; ++b) r.bin_centers[b] = s_lo + (b + 0.5) * d.bin_width;
        r.h.assign(bins, 0.0);
        r.h_stderr.assign(bins, 0.0);
        r.counts.assign(bins, 0);
    }

    // equal-mass contiguous cells in the transverse coordinate
    double cum = 0.0;
    std::size_t pos = 0;
    for (int a = 0; a < cells; ++a) {
        Ray& r = d.rays[a];
        const double target = w_used * (a + 1) / cells;
        std::vector<int> members;
        while (pos < used.size() && (cum < target - 1e-15 * w_used || a == cells - 1)) {
            members.push_back(used[pos]);
            cum += sample.weights[used[pos]];
            ++pos;
        }
        if (members.empty()) throw std::runtime_error("ray decomposition: empty quotient cell");
        r.label_lo = lab[members.front()];
        r.label_hi = lab[members.back()];
        r.label = lab[members[members.size() / 2]];
        double w_cell = 0.0;
        for (int i : members) w_cell += sample.weights[i];
        r.q = w_cell / w_used;
        std::vector<double> w2(bins, 0.0);
        for (int i : members) {
            int b = static_cast<int>((s[i] - s_lo) / d.bin_width);
            b = std::min(std::max(b, 0), bins - 1);
            r.h[b] += sample.weights[i];
            w2[b] += sample.weights[i] * sample.weights[i];
            ++r.counts[b];
        }
        const double norm = r.q * d.bin_width;
        for (int b = 0; b < bins; ++b) {
            r.h[b] /= norm;
            r.h_stderr[b] = std::sqrt(w2[b]) / norm;
        }
    }
    return d;
}

DensityCheck check_cd_density(const RayDecomposition& d, double K, double N, double tol,
                              double min_fraction) {
    if (!(N > 1.0)) throw std::invalid_argument("cd density check: need N > 1");
    DensityCheck res;
    const double dx = d.bin_width;
    for (const auto& ray : d.rays) {
        const int B = d.bins;
        std::vector<double> lg(B, kNaN);
        for (int b = 0; b < B; ++b)
            if (ray.counts[b] >= 5 && ray.h[b] > 0.0) lg[b] = std::log(ray.h[b]);
        std::vector<double> sm(B, kNaN);
        for (int b = 0; b < B; ++b) {
            if (std::isnan(lg[b])) continue;
            // boundary bins take the value at the endpoint of a linear fit
            // through the nearest three bins; a truncated window average
            // there is shifted by half a bin
            if (b == 0 && B >= 3 && !std::isnan(lg[1]) && !std::isnan(lg[2])) {
                sm[b] = (5.0 * lg[0] + 2.0 * lg[1] - lg[2]) / 6.0;
                continue;
            }
            if (b == B - 1 && B >= 3 && !std::isnan(lg[B - 2]) && !std::isnan(lg[B - 3])) {
                sm[b] = (5.0 * lg[B - 1] + 2.0 * lg[B - 2] - lg[B - 3]) / 6.0;
                continue;
            }
            double acc = 0.0;
            int cnt = 0;
            for (int j = std::max(0, b - 1); j <= std::min(B - 1, b + 1); ++j)
                if (!std::isnan(lg[j])) {
                    acc += lg[j];
                    ++cnt;
                }
            sm[b] = acc / cnt;
        }
        for (int b = 1; b + 1 < B; ++b) {
            if (std::isnan(sm[b - 1]) || std::isnan(sm[b]) || std::isnan(sm[b + 1])) continue;
            const double d1 = (sm[b + 1] - sm[b - 1]) / (2.0 * dx);
            const double d2 = (sm[b + 1] - 2.0 * sm[b] + sm[b - 1]) / (dx * dx);
            ++res.tested;
            if (d2 + d1 * d1 / (N - 1.0) <= -K + tol) ++res.satisfied;
        }
    }
    res.fraction = res.tested == 0 ? 0.0 : double(res.satisfied) / double(res.tested);
    res.ok = res.tested > 0 && res.fraction >= min_fraction;
    return res;
}

DensityCheck check_mcp_bound(const RayDecomposition& d, double K, double N, double a, double b,
                             double stderr_mult, double min_fraction) {
    if (!(N > 1.0)) throw std::invalid_argument("mcp check: need N > 1");
    const double kappa = K / (N - 1.0);
    const bool b_finite = std::isfinite(b);
    if (!b_finite && K > 0.0)
        throw std::invalid_argument("mcp check: K > 0 requires a bounded ray domain");
    DensityCheck res;
    for (const auto& ray : d.rays) {
        for (int k = 0; k + 1 < d.bins; ++k) {
            if (ray.counts[k] < 5 || ray.counts[k + 1] < 5) continue;
            const double s0 = ray.bin_centers[k];
            const double s1 = ray.bin_centers[k + 1];
            if (!(s0 > a) || (b_finite && !(s1 < b))) continue;
            const double h0 = ray.h[k];
            const double h1 = ray.h[k + 1];
            if (!(h0 > 0.0) || !(h1 > 0.0)) continue;
            const double upper = std::pow(sin_kappa(kappa, s1 - a) / sin_kappa(kappa, s0 - a), N - 1.0);
            double lower;
            if (b_finite)
                lower = std::pow(sin_kappa(kappa, b - s1) / sin_kappa(kappa, b - s0), N - 1.0);
            else if (K < 0.0)
                lower = std::exp(-std::sqrt(-kappa) * (s1 - s0) * (N - 1.0));
            else
                lower = 1.0;
            const double ratio = h1 / h0;
            const double e0 = ray.h_stderr[k] / h0;
            const double e1 = ray.h_stderr[k + 1] / h1;
            const double slackf = 1.0 + stderr_mult * std::sqrt(e0 * e0 + e1 * e1);
            ++res.tested;
            if (ratio <= upper * slackf && ratio >= lower / slackf) ++res.satisfied;
        }
    }
    res.fraction = res.tested == 0 ? 0.0 : double(res.satisfied) / double(res.tested);
    res.ok = res.tested > 0 && res.fraction >= min_fraction;
    return res;
}

ExponentFit fit_density_exponent(const RayDecomposition& d) {
    ExponentFit fit;
    std::vector<double> qs;
    for (const auto& ray : d.rays) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int b = 0; b < d.bins; ++b) {
            if (ray.counts[b] < 5 || !(ray.h[b] > 0.0) || !(ray.bin_centers[b] > 0.0)) continue;
            const double x = std::log(ray.bin_centers[b]);
            const double y = std::log(ray.h[b]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
        if (m < 3) continue;
        const double det = m * sxx - sx * sx;
        if (std::fabs(det) < 1e-30) continue;
        fit.per_ray.push_back((m * sxy - sx * sy) / det);
        qs.push_back(ray.q);
    }
    if (fit.per_ray.empty()) throw std::runtime_error("exponent fit: no ray has enough filled bins");
    double wsum = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        wsum += qs[i];
        mean += qs[i] * fit.per_ray[i];
    }
    mean /= wsum;
    double var = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i)
        var += qs[i] * (fit.per_ray[i] - mean) * (fit.per_ray[i] - mean);
    fit.exponent = mean;
    fit.spread = std::sqrt(var / wsum);
    return fit;
}

LocalizationResult localize_zero_mean(const CausalSample& sample, const std::vector<double>& f,
                                      double p) {
    const int n = sample.n();
    if (static_cast<int>(f.size()) != n)
        throw std::invalid_argument("localize_zero_mean: f must have one value per event");
    std::vector<double> signed_mass(n);
    double pos = 0.0, neg = 0.0;
    for (int i = 0; i < n; ++i) {
        signed_mass[i] = sample.weights[i] * f[i];
        if (signed_mass[i] > 0) pos += signed_mass[i];
        else neg -= signed_mass[i];
    }
    if (!(pos > 0.0) || !(neg > 0.0))
        throw std::invalid_argument("localize_zero_mean: f must change sign");
    if (std::fabs(pos - neg) > 1e-9 * std::max(pos, neg))
        throw std::invalid_argument("localize_zero_mean: f is not zero-mean");

    DiscreteMeasure mu, nu;
    for (int i = 0; i < n; ++i) {
        if (signed_mass[i] > 0) {
            mu.support.push_back(i);
            mu.masses.push_back(signed_mass[i] / pos);
        } else if (signed_mass[i] < 0) {
            nu.support.push_back(i);
            nu.masses.push_back(-signed_mass[i] / neg);
        }
    }

    LocalizationResult out;
    out.plan = solve_lp_optimal(sample, mu, nu, p);
    if (!out.plan.feasible)
        throw std::runtime_error("localize_zero_mean: the signed parts admit no causal coupling");

    UnionFind uf(n);
    for (const auto& e : out.plan.entries) uf.unite(e.src, e.dst);
    std::map<int, LocalizationRay> comps;
    for (const auto& e : out.plan.entries) {
        comps[uf.find(e.src)].mass += e.mass;
        (void)comps[uf.find(e.dst)];
    }
    std::vector<uint8_t> seen(n, 0);
    for (const auto& e : out.plan.entries) {
        for (int idx : {e.src, e.dst}) {
            if (seen[idx]) continue;
            seen[idx] = 1;
            auto& comp = comps[uf.find(idx)];
            comp.indices.push_back(idx);
            comp.imbalance += signed_mass[idx] / (signed_mass[idx] > 0 ? pos : neg);
        }
    }
    const int t_ax = sample.st.time_axis();
    const bool r_time = sample.st.kind == Chart::schwarzschild_interior;
    out.all_balanced = true;
    for (auto& [root, comp] : comps) {
        std::sort(comp.indices.begin(), comp.indices.end(), [&](int aa, int bb) {
            const double ka = r_time ? -sample.events[aa].coords[1] : sample.events[aa].coords[t_ax];
            const double kb = r_time ? -sample.events[bb].coords[1] : sample.events[bb].coords[t_ax];
            return ka != kb ? ka < kb : aa < bb;
        });
        comp.imbalance = std::fabs(comp.imbalance);
        comp.balanced = comp.imbalance <= 1e-9 * comp.mass;
        out.all_balanced = out.all_balanced && comp.balanced;
        out.rays.push_back(std::move(comp));
    }
    return out;
}

} // namespace lorot
