#include "lorot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "lorot/content.hpp"
#include "lorot/localization.hpp"
#include "lorot/model_forms.hpp"

namespace lorot {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

bool is_origin(const std::vector<double>& c) {
    return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

// {x : 0 < tau_V(x) <= tau_V at the S-crossing of x's ray, the ray meets S
// inside the chart}
std::function<bool(const Event&)> span_region_predicate(const SpacetimeDescriptor& st,
                                                        const AchronalSetDescriptor& V,
                                                        const AchronalSetDescriptor& S,
                                                        double sigma_max) {
    const bool v_origin = V.kind == SetKind::point && is_origin(V.center_or_origin(st));
    if (v_origin && (S.kind == SetKind::tau_level || S.kind == SetKind::hyperboloid) &&
        is_origin(S.center_or_origin(st)) && S.level > 0.0) {
        const double rho = S.level;
        return [&st, &V, rho](const Event& x) {
            const double u = tau_signed_from_set(st, V, x);
            return u > 0.0 && u <= rho;
        };
    }
    if (v_origin && S.kind == SetKind::coordinate_slice && st.kind == Chart::cone) {
        const double c = S.value;
        const double a = st.cone_aperture;
        return [&st, &V, c, a](const Event& x) {
            const double u = tau_signed_from_set(st, V, x);
            if (!(u > 0.0)) return false;
            const double t = x.coords[st.dim - 1];
            if (t > c) return false;
            double r2 = 0.0;
            for (int k = 0; k + 1 < st.dim; ++k) r2 += x.coords[k] * x.coords[k];
            return c * c * r2 <= a * a * t * t;
        };
    }
    if (V.kind != SetKind::point)
        throw std::invalid_argument("isoperimetric check: generic spans need a point V");
    const auto q = V.center_or_origin(st);
    return [&st, &V, &S, q, sigma_max](const Event& x) {
        const double s = tau_signed_from_set(st, V, x);
        if (!(s > 0.0)) return false;
        if (tau_signed_from_set(st, S, x) > 0.0) return false;
        std::vector<double> dir(st.dim);
        for (int k = 0; k < st.dim; ++k) dir[k] = (x.coords[k] - q[k]) / s;
        const int steps = 64;
        for (int i = 0; i <= steps; ++i) {
            const double sigma = s + (sigma_max - s) * i / steps;
            std::vector<double> c(st.dim);
            for (int k = 0; k < st.dim; ++k) c[k] = q[k] + sigma * dir[k];
            Event y{st.kind, std::move(c)};
            if (!chart_contains(st, y)) return false;
            if (tau_signed_from_set(st, S, y) >= 0.0) return true;
        }
        return false;
    };
}

} // namespace

VerificationReport check_isoperimetric(const SpacetimeDescriptor& st,
                                       const AchronalSetDescriptor& V,
                                       const AchronalSetDescriptor& S,
                                       const CurvatureParams& params, long long n, uint64_t seed) {
    V.validate(st);
    S.validate(st);
    params.validate();

    const auto pts = sample_set_points(st, S, st.dim == 2 ? 64 : 12);
    if (pts.empty()) throw std::invalid_argument("isoperimetric check: S misses the chart region");
    for (const auto& y : pts)
        if (!(tau_signed_from_set(st, V, y) > 0.0))
            throw std::invalid_argument("isoperimetric check: S must lie in I+(V)");

    const double d = dist_to_set(st, V, S);
    if (!(d > 0.0)) throw std::invalid_argument("isoperimetric check: dist(V, S) must be positive");
    const double D = profile_D(params, d);

    std::vector<double> lo(st.dim, std::numeric_limits<double>::infinity());
    std::vector<double> hi(st.dim, -std::numeric_limits<double>::infinity());
    for (const auto& y : pts)
        for (int k = 0; k < st.dim; ++k) {
            lo[k] = std::min(lo[k], y.coords[k]);
            hi[k] = std::max(hi[k], y.coords[k]);
        }
    const auto vc = V.center_or_origin(st);
    double span = d;
    for (int k = 0; k < st.dim; ++k) span = std::max(span, hi[k] - lo[k]);

    RegionDescriptor window;
    window.st = st;
    window.kind = RegionKind::box;
    window.lo = lo;
    window.hi = hi;
    const double pad = 0.15 * span;
    for (int k = 0; k < st.dim; ++k) {
        window.lo[k] -= pad;
        window.hi[k] += pad;
    }
    const std::vector<double> eps_grid = {0.025 * d, 0.05 * d};
    const auto content = future_content(st, S, window, eps_grid, n, seed);

    RegionDescriptor span_region;
    span_region.st = st;
    span_region.kind = RegionKind::box;
    span_region.lo = lo;
    span_region.hi = hi;
    for (int k = 0; k < st.dim; ++k) {
        span_region.lo[k] = std::min(span_region.lo[k], vc[k]) - 1e-9;
        span_region.hi[k] = std::max(span_region.hi[k], vc[k]) + 1e-9;
    }
    span_region.extra = span_region_predicate(st, V, S, 4.0 * span + 4.0 * d);
    const auto vol = estimate_volume(span_region, n, seed + 999331ULL);

    VerificationReport rep;
    rep.name = "isoperimetric";
    rep.lhs = content.value * D;
    rep.rhs = vol.value;
    rep.slack = rep.rhs - rep.lhs;
    rep.stderr_ = std::hypot(D * content.stderr_, vol.stderr_);
    rep.tolerance = 4.0 * rep.stderr_;
    rep.metadata["chart"] = chart_name(st.kind);
    rep.metadata["K"] = fmt(params.K);
    rep.metadata["N"] = fmt(params.N);
    rep.metadata["dist"] = fmt(d);
    rep.metadata["n"] = std::to_string(n);
    rep.metadata["seed"] = std::to_string(seed);
    rep.finalize();
    return rep;
}

std::vector<VerificationReport> check_monotonicity(const RegionDescriptor& region,
                                                   const AchronalSetDescriptor& V,
                                                   const CurvatureParams& params,
                                                   const std::vector<double>& t_grid, int n,
                                                   uint64_t seed) {
    region.validate();
    V.validate(region.st);
    params.validate();
    if (t_grid.empty()) throw std::invalid_argument("monotonicity check: empty grid");
    for (std::size_t k = 0; k + 1 < t_grid.size(); ++k)
        if (!(t_grid[k] < t_grid[k + 1]))
            throw std::invalid_argument("monotonicity check: grid must be strictly increasing");
    const bool future = t_grid.front() > 0.0;
    const bool past = t_grid.back() < 0.0;
    if (!future && !past)
        throw std::invalid_argument("monotonicity check: grid must be one-sided in time");

    std::vector<VerificationReport> out;
    if (t_grid.size() == 1) {
        VerificationReport rep;
        rep.name = "monotonicity";
        rep.metadata["note"] = "single grid point, vacuous";
        rep.finalize();
        out.push_back(rep);
        return out;
    }

    const auto sample = sprinkle(region, n, seed, 4, false);
    const double nan = std::nan("");
    const auto dec = build_ray_decomposition(sample, V, 0, 25, future ? 0.0 : nan,
                                             future ? nan : 0.0);

    const double kappa = params.N > 1.0 ? params.K / (params.N - 1.0) : 0.0;
    std::vector<double> ratio(t_grid.size()), err(t_grid.size());
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        AchronalSetDescriptor level;
        if (V.kind == SetKind::coordinate_slice) {
            level.kind = SetKind::coordinate_slice;
            level.axis = V.axis;
            level.value = V.value + t_grid[k];
        } else {
            level.kind = SetKind::tau_level;
            level.center = V.center;
            level.level = t_grid[k];
        }
        double se = 0.0;
        const double m = content_via_rays(dec, level, &se);
        const double denom = std::pow(sin_kappa(kappa, std::fabs(t_grid[k])), params.N - 1.0);
        ratio[k] = m / denom;
        err[k] = se / denom;
    }

    for (std::size_t k = 0; k + 1 < t_grid.size(); ++k) {
        VerificationReport rep;
        rep.name = "monotonicity[" + std::to_string(k) + "]";
        if (future) {
            rep.lhs = ratio[k + 1];
            rep.rhs = ratio[k];
        } else {
            rep.lhs = ratio[k];
            rep.rhs = ratio[k + 1];
        }
        rep.slack = rep.rhs - rep.lhs;
        rep.stderr_ = std::hypot(err[k], err[k + 1]);
        rep.tolerance = 4.0 * rep.stderr_;
        rep.metadata["t_lo"] = fmt(t_grid[k]);
        rep.metadata["t_hi"] = fmt(t_grid[k + 1]);
        rep.metadata["K"] = fmt(params.K);
        rep.metadata["N"] = fmt(params.N);
        rep.metadata["n"] = std::to_string(n);
        rep.metadata["seed"] = std::to_string(seed);
        rep.finalize();
        out.push_back(std::move(rep));
    }
    return out;
}

VerificationReport check_claim_sharp_identity(int n, double a) {
    VerificationReport rep;
    rep.name = "sharp_identity";
    rep.lhs = cone_sharp_integral(n, a);
    rep.rhs = cone_sharp_rhs(n, a);
    rep.slack = -std::fabs(rep.lhs - rep.rhs);
    rep.tolerance = 1e-8;
    rep.stderr_ = 0.0;
    rep.metadata["n"] = std::to_string(n);
    rep.metadata["a"] = fmt(a);
    rep.finalize();
    return rep;
}

std::vector<VerificationReport> check_schwarzschild_bound(double m, double a, double b,
                                                          const std::vector<double>& r0_grid) {
    if (!(m > 0.0) || !(a < b))
        throw std::invalid_argument("schwarzschild bound: need m > 0 and a < b");
    std::vector<VerificationReport> out;
    for (std::size_t k = 0; k < r0_grid.size(); ++k) {
        const double r0 = r0_grid[k];
        VerificationReport rep;
        rep.name = "schwarzschild_bound[" + std::to_string(k) + "]";
        rep.lhs = schwarzschild_slice_area(m, r0, a, b) * schwarzschild_tau_to_singularity(m, r0);
        rep.rhs = 128.0 * kPi * m * m * m * (b - a) / 3.0;
        rep.slack = rep.rhs - rep.lhs;
        rep.tolerance = 1e-12;
        rep.stderr_ = 0.0;
        rep.metadata["m"] = fmt(m);
        rep.metadata["r0"] = fmt(r0);
        rep.metadata["slab"] = fmt(a) + ":" + fmt(b);
        rep.finalize();
        out.push_back(std::move(rep));
    }
    return out;
}

VerificationReport check_brunn_minkowski(const CausalSample& sample, const std::vector<int>& A0,
                                         const std::vector<int>& A1, double t,
                                         const CurvatureParams& params, double p) {
    params.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("brunn-minkowski: need t in [0, 1]");
    for (int i : A0)
        if (i < 0 || i >= sample.n()) throw std::invalid_argument("brunn-minkowski: bad A0 index");
    for (int j : A1)
        if (j < 0 || j >= sample.n()) throw std::invalid_argument("brunn-minkowski: bad A1 index");

    VerificationReport rep;
    rep.name = "brunn_minkowski";
    rep.metadata["t"] = fmt(t);
    rep.metadata["K"] = fmt(params.K);
    rep.metadata["N"] = fmt(params.N);
    rep.metadata["p"] = fmt(p);

    if (A0.size() <= 1 && A1.size() <= 1) {
        rep.metadata["note"] = "degenerate endpoint sets, zero-volume convention";
        rep.finalize();
        return rep;
    }

    double theta_inf = std::numeric_limits<double>::infinity();
    double theta_sup = 0.0;
    for (int i : A0)
        for (int j : A1) {
            const double tv = sample.tau_at(i, j);
            if (!(tv > 0.0))
                throw std::invalid_argument(
                    "brunn-minkowski: endpoint sets are not pairwise chronological");
            theta_inf = std::min(theta_inf, tv);
            theta_sup = std::max(theta_sup, tv);
        }
    const double theta = params.K >= 0.0 ? theta_inf : theta_sup;

    const int dim = sample.st.dim;
    const double eps = std::pow(sample.weights[0], 1.0 / dim);
    std::unordered_set<std::string> cells;
    cells.reserve(A0.size() * A1.size());
    std::string key;
    for (int i : A0)
        for (int j : A1) {
            const Event z = geodesic_point(sample.st, sample.events[i], sample.events[j], t);
            key.clear();
            for (int k = 0; k < dim; ++k) {
                key += std::to_string(static_cast<long long>(std::floor(z.coords[k] / eps)));
                key += ',';
            }
            cells.insert(key);
        }
    const double vol_t = static_cast<double>(cells.size()) * std::pow(eps, dim);

    const double W = sample.total_weight();
    auto mass_of = [&](const std::vector<int>& idx, double* se) {
        double m = 0.0;
        for (int i : idx) m += sample.weights[i];
        const double ph = static_cast<double>(idx.size()) / sample.n();
        *se = W * std::sqrt(std::max(0.0, ph * (1.0 - ph) / sample.n()));
        return m;
    };
    double se0 = 0.0, se1 = 0.0;
    const double m0 = mass_of(A0, &se0);
    const double m1 = mass_of(A1, &se1);

    const double N = params.N;
    const auto c0 = tau_coeff(params, 1.0 - t, theta);
    const auto c1 = tau_coeff(params, t, theta);

    rep.lhs = std::pow(vol_t, 1.0 / N);
    if (c0.infinite || c1.infinite) {
        rep.rhs = std::numeric_limits<double>::infinity();
        rep.slack = -std::numeric_limits<double>::infinity();
        rep.tolerance = 0.0;
        rep.metadata["note"] = "distortion coefficient degenerate (K theta^2 >= pi^2)";
        rep.finalize();
        return rep;
    }
    rep.rhs = c0.value * std::pow(m0, 1.0 / N) + c1.value * std::pow(m1, 1.0 / N);

    const double d0 = c0.value * std::pow(m0, 1.0 / N - 1.0) / N * se0;
    const double d1 = c1.value * std::pow(m1, 1.0 / N - 1.0) / N * se1;
    const double cover_se = cells.empty() ? 0.0 : vol_t / std::sqrt(double(cells.size()));
    const double dl = std::pow(std::max(vol_t, 1e-300), 1.0 / N - 1.0) / N * cover_se;
    rep.stderr_ = std::sqrt(d0 * d0 + d1 * d1 + dl * dl);
    rep.slack = rep.lhs - rep.rhs;
    rep.tolerance = 4.0 * rep.stderr_;
    rep.metadata["theta"] = fmt(theta);
    rep.metadata["eps"] = fmt(eps);
    rep.finalize();
    return rep;
}

} // namespace lorot
