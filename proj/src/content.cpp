#include "lorot/content.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "lorot/serde.hpp"

namespace lorot {

namespace {

ContentEstimate shell_content(const SpacetimeDescriptor& st, const AchronalSetDescriptor& A,
                              const RegionDescriptor& U, const std::vector<double>& eps_grid,
                              long long n_per_eps, uint64_t seed, double sign) {
    A.validate(st);
    U.validate();
    if (eps_grid.empty()) throw std::invalid_argument("content: empty eps grid");
    for (double e : eps_grid)
        if (!(e > 0.0)) throw std::invalid_argument("content: eps values must be positive");

    ContentEstimate est;
    est.window = U;
    est.eps_grid = eps_grid;
    std::vector<double> sorted_eps = eps_grid;
    std::sort(sorted_eps.begin(), sorted_eps.end());

    const auto base_extra = U.extra;
    int k = 0;
    for (double eps : sorted_eps) {
        RegionDescriptor shell = U;
        shell.extra = [&st, &A, base_extra, eps, sign](const Event& x) {
            if (base_extra && !base_extra(x)) return false;
            const double u = sign * tau_signed_from_set(st, A, x);
            return u > 0.0 && u < eps;
        };
        const auto vol = estimate_volume(shell, n_per_eps, seed + 1000003ULL * k);
        est.per_eps.push_back({eps, vol.value / eps, vol.stderr_ / eps});
        ++k;
    }

    // consistent-trend flag: sign changes of consecutive differences beyond
    // twice the combined noise
    int dir = 0;
    for (std::size_t i = 0; i + 1 < est.per_eps.size(); ++i) {
        const auto& a = est.per_eps[i];
        const auto& b = est.per_eps[i + 1];
        const double d = b.value - a.value;
        const double noise = 2.0 * std::hypot(a.stderr_, b.stderr_);
        if (std::fabs(d) <= noise) continue;
        const int s = d > 0 ? 1 : -1;
        if (dir == 0) dir = s;
        else if (dir != s) est.monotone_trend = false;
    }

    if (est.per_eps.size() == 1) {
        est.value = est.per_eps[0].value;
        est.stderr_ = est.per_eps[0].stderr_;
    } else {
        const auto& p1 = est.per_eps[0];
        const auto& p2 = est.per_eps[1];
        const double w = p1.eps / (p2.eps - p1.eps);
        est.value = (1.0 + w) * p1.value - w * p2.value;
        est.stderr_ = std::hypot((1.0 + w) * p1.stderr_, w * p2.stderr_);
    }
    return est;
}

} // namespace

nlohmann::json ContentEstimate::to_json() const {
    nlohmann::json j;
    j["value"] = value;
    j["stderr"] = stderr_;
    j["eps_grid"] = eps_grid;
    j["monotone_trend"] = monotone_trend;
    auto table = nlohmann::json::array();
    for (const auto& p : per_eps) table.push_back({{"eps", p.eps}, {"value", p.value}, {"stderr", p.stderr_}});
    j["per_eps"] = std::move(table);
    nlohmann::json w;
    w["kind"] = region_kind_name(window.kind);
    w["spacetime"] = window.st;
    w["lo"] = window.lo;
    w["hi"] = window.hi;
    j["window"] = std::move(w);
    return j;
}

ContentEstimate future_content(const SpacetimeDescriptor& st, const AchronalSetDescriptor& A,
                               const RegionDescriptor& U, const std::vector<double>& eps_grid,
                               long long n_per_eps, uint64_t seed) {
    return shell_content(st, A, U, eps_grid, n_per_eps, seed, +1.0);
}

ContentEstimate past_content(const SpacetimeDescriptor& st, const AchronalSetDescriptor& A,
                             const RegionDescriptor& U, const std::vector<double>& eps_grid,
                             long long n_per_eps, uint64_t seed) {
    return shell_content(st, A, U, eps_grid, n_per_eps, seed, -1.0);
}

double one_d_content(const std::vector<double>& s_nodes, const std::vector<double>& h_values,
                     const std::vector<double>& h_stderr, double s0, Side side,
                     double* stderr_out) {
    if (s_nodes.size() != h_values.size())
        throw std::invalid_argument("one_d_content: node/value length mismatch");
    if (!h_stderr.empty() && h_stderr.size() != s_nodes.size())
        throw std::invalid_argument("one_d_content: node/stderr length mismatch");
    int best = -1, second = -1;
    for (std::size_t i = 0; i < s_nodes.size(); ++i) {
        const double d = side == Side::future ? s_nodes[i] - s0 : s0 - s_nodes[i];
        if (!(d > 0.0)) continue;
        if (best < 0 || d < (side == Side::future ? s_nodes[best] - s0 : s0 - s_nodes[best])) {
            second = best;
            best = static_cast<int>(i);
        } else if (second < 0 ||
                   d < (side == Side::future ? s_nodes[second] - s0 : s0 - s_nodes[second])) {
            second = static_cast<int>(i);
        }
    }
    if (best < 0)
        throw std::invalid_argument("one_d_content: no nodes on the requested side of s0");
    const double e1 = h_stderr.empty() ? 0.0 : h_stderr[best];
    if (second < 0) {
        if (stderr_out) *stderr_out = e1;
        return h_values[best];
    }
    const double s1 = s_nodes[best], s2 = s_nodes[second];
    const double w = (s0 - s1) / (s2 - s1);
    if (stderr_out) {
        const double e2 = h_stderr.empty() ? 0.0 : h_stderr[second];
        *stderr_out = std::hypot((1.0 - w) * e1, w * e2);
    }
    return h_values[best] + (h_values[second] - h_values[best]) * w;
}

double one_d_content(const std::vector<double>& s_nodes, const std::vector<double>& h_values,
                     double s0, Side side) {
    return one_d_content(s_nodes, h_values, {}, s0, side, nullptr);
}

double content_via_rays(const RayDecomposition& dec, const AchronalSetDescriptor& A,
                        double* stderr_out) {
    A.validate(dec.st);
    const bool past_side = dec.s_hi <= 0.0;
    double total = 0.0;
    double var = 0.0;
    for (std::size_t alpha = 0; alpha < dec.rays.size(); ++alpha) {
        const Ray& ray = dec.rays[alpha];
        auto g = [&](double s) {
            return tau_signed_from_set(dec.st, A, dec.ray_point(static_cast<int>(alpha), s));
        };
        // locate a sign change of tau_A along the ray over the binned domain
        const int probes = std::max(2 * dec.bins, 32);
        double s_prev = dec.s_lo + (dec.s_hi - dec.s_lo) * 1e-9;
        double g_prev = g(s_prev);
        double s_root = std::numeric_limits<double>::quiet_NaN();
        for (int i = 1; i <= probes; ++i) {
            const double s = dec.s_lo + (dec.s_hi - dec.s_lo) * i / probes;
            const double gv = g(s);
            if (gv == 0.0) {
                s_root = s;
                break;
            }
            if ((g_prev < 0.0) != (gv < 0.0)) {
                double lo = s_prev, hi = s;
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if ((g(mid) < 0.0) == (g_prev < 0.0)) lo = mid;
                    else hi = mid;
                }
                s_root = 0.5 * (lo + hi);
                break;
            }
            s_prev = s;
            g_prev = gv;
        }
        if (std::isnan(s_root)) continue;

        std::vector<double> nodes, values, errs;
        double data_reach = past_side ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
        for (int b = 0; b < dec.bins; ++b) {
            if (ray.counts[b] < 5 || !(ray.h[b] > 0.0)) continue;
            nodes.push_back(ray.bin_centers[b]);
            values.push_back(ray.h[b]);
            errs.push_back(ray.h_stderr[b]);
            data_reach = past_side ? std::min(data_reach, ray.bin_centers[b])
                                   : std::max(data_reach, ray.bin_centers[b]);
        }
        // rays whose data stops at or before the intersection do not count
        if (past_side ? !(data_reach < s_root) : !(data_reach > s_root)) continue;
        double h, err = 0.0;
        try {
            h = one_d_content(nodes, values, errs, s_root,
                              past_side ? Side::past : Side::future, &err);
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("content_via_rays: density data missing at an intersection");
        }
        total += ray.q * h;
        var += ray.q * err * ray.q * err;
    }
    if (stderr_out) *stderr_out = std::sqrt(var);
    return total;
}

RegionDescriptor thickened_window(const SpacetimeDescriptor& st, const AchronalSetDescriptor& A,
                                  double frac, int per_axis) {
    if (!(frac > 0.0)) throw std::invalid_argument("thickened_window: need frac > 0");
    auto pts = sample_set_points(st, A, per_axis);
    if (pts.empty()) throw std::runtime_error("thickened_window: the set misses the chart region");
    std::vector<double> lo(st.dim, std::numeric_limits<double>::infinity());
    std::vector<double> hi(st.dim, -std::numeric_limits<double>::infinity());
    for (const auto& p : pts)
        for (int k = 0; k < st.dim; ++k) {
            lo[k] = std::min(lo[k], p.coords[k]);
            hi[k] = std::max(hi[k], p.coords[k]);
        }
    double diam = 0.0;
    for (int k = 0; k < st.dim; ++k) diam += (hi[k] - lo[k]) * (hi[k] - lo[k]);
    diam = std::sqrt(diam);
    if (!(diam > 0.0)) diam = 1.0;
    const double pad = frac * diam;

    RegionDescriptor U;
    U.st = st;
    U.kind = RegionKind::box;
    U.lo = lo;
    U.hi = hi;
    for (int k = 0; k < st.dim; ++k) {
        U.lo[k] -= pad;
        U.hi[k] += pad;
    }
    auto shared = std::make_shared<std::vector<Event>>(std::move(pts));
    U.extra = [shared, pad](const Event& x) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : *shared) {
            double d = 0.0;
            for (std::size_t k = 0; k < x.coords.size(); ++k) {
                const double u = x.coords[k] - p.coords[k];
                d += u * u;
            }
            best = std::min(best, d);
            if (best < pad * pad) return true;
        }
        return false;
    };
    return U;
}

} // namespace lorot
