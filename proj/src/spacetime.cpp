#include "lorot/spacetime.hpp"

#include <algorithm>
#include <cmath>

#include "lorot/quadrature.hpp"

namespace lorot {

namespace {

constexpr double kPi = 3.14159265358979323846;

double spatial_norm(const std::vector<double>& c, int dim) {
    double s = 0.0;
    for (int i = 0; i + 1 < dim; ++i) s += c[i] * c[i];
    return std::sqrt(s);
}

void require_same_chart(const SpacetimeDescriptor& st, const Event& x, const Event& y) {
    if (x.chart != st.kind || y.chart != st.kind)
        throw std::invalid_argument("event chart does not match the spacetime descriptor");
    if (static_cast<int>(x.coords.size()) != st.dim || static_cast<int>(y.coords.size()) != st.dim)
        throw std::invalid_argument("event dimension does not match the spacetime descriptor");
}

// Minkowski time separation with the cancellation-stable product form.
double minkowski_tau(const std::vector<double>& x, const std::vector<double>& y, int dim) {
    const double dt = y[dim - 1] - x[dim - 1];
    if (dt < 0.0) return 0.0;
    double d2 = 0.0;
    for (int i = 0; i + 1 < dim; ++i) {
        const double dxi = y[i] - x[i];
        d2 += dxi * dxi;
    }
    const double d = std::sqrt(d2);
    if (dt < d) return 0.0;
    return std::sqrt((dt - d) * (dt + d));
}

// Fiber displacement candidates; on a circle the geodesic may wind either way.
std::vector<double> fiber_deltas(const SpacetimeDescriptor& st, double y0, double y1) {
    if (st.fiber == FiberKind::line) return {y1 - y0};
    const double L = 2.0 * kPi * st.fiber_radius;
    std::vector<double> out;
    for (int k = -2; k <= 2; ++k) out.push_back(y1 - y0 + L * k);
    return out;
}

// Maximal fiber displacement reachable by a causal path from r0 to r1.
double fiber_null_range(const SpacetimeDescriptor& st, double r0, double r1) {
    if (st.profile == WarpProfile::unit) return r1 - r0;
    return std::log(r1 / r0);
}

// Exact proper time between (0, r0) and (delta, r1) for one fiber displacement.
double warped_tau_delta(const SpacetimeDescriptor& st, double r0, double r1, double delta) {
    if (r1 <= r0) return 0.0;
    if (std::abs(delta) > fiber_null_range(st, r0, r1)) return 0.0;
    if (st.profile == WarpProfile::unit) {
        const double dr = r1 - r0;
        return std::sqrt(std::max(0.0, (dr - std::abs(delta)) * (dr + std::abs(delta))));
    }
    // theta(r) = r maps to the interior of the Minkowski light cone via
    // (T, X) = (r cosh y, r sinh y); tau^2 = (r1-r0)^2 - 4 r0 r1 sinh^2(delta/2).
    const double sh = std::sinh(0.5 * delta);
    const double t2 = (r1 - r0) * (r1 - r0) - 4.0 * r0 * r1 * sh * sh;
    return t2 > 0.0 ? std::sqrt(t2) : 0.0;
}

double best_warped_delta(const SpacetimeDescriptor& st, const Event& x, const Event& y,
                         double* tau_out) {
    const double y0 = x.coords[0], r0 = x.coords[1];
    const double y1 = y.coords[0], r1 = y.coords[1];
    double best_tau = 0.0, best_delta = 0.0;
    bool found = false;
    for (double d : fiber_deltas(st, y0, y1)) {
        const double t = warped_tau_delta(st, r0, r1, d);
        if (!found || t > best_tau) {
            best_tau = t;
            best_delta = d;
            found = true;
        }
    }
    if (tau_out) *tau_out = best_tau;
    return best_delta;
}

double wrap_fiber(const SpacetimeDescriptor& st, double y) {
    if (st.fiber == FiberKind::line) return y;
    const double L = 2.0 * kPi * st.fiber_radius;
    double w = std::fmod(y, L);
    if (w < 0.0) w += L;
    return w;
}

double warp_at(const SpacetimeDescriptor& st, double r) {
    return st.profile == WarpProfile::unit ? 1.0 : r;
}

// Fiber displacement of the extremal path with conserved fiber momentum c,
// y'(r) = c / (W sqrt(W^2 + c^2)).
double momentum_displacement(const SpacetimeDescriptor& st, double r0, double r1, double c) {
    const auto f = [&](double r) {
        const double w = warp_at(st, r);
        return c / (w * std::hypot(w, c));
    };
    return integrate(f, r0, r1, 1e-13);
}

// Proper time of the same extremal path.
double momentum_tau(const SpacetimeDescriptor& st, double r0, double r1, double c) {
    const auto f = [&](double r) {
        return warp_at(st, r) / std::hypot(warp_at(st, r), c);
    };
    return integrate(f, r0, r1, 1e-13);
}

// Maximal proper time at a fixed endpoint fiber displacement, found by
// bisecting the momentum until the displacement matches.
double extremal_tau(const SpacetimeDescriptor& st, double r0, double r1, double delta) {
    const double target = std::abs(delta);
    if (target == 0.0) return r1 - r0;
    double c_hi = 1.0;
    for (int grow = 0; grow < 400 && momentum_displacement(st, r0, r1, c_hi) < target; ++grow)
        c_hi *= 2.0;
    if (momentum_displacement(st, r0, r1, c_hi) < target)
        return momentum_tau(st, r0, r1, c_hi);
    double c_lo = 0.0;
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (c_lo + c_hi);
        if (momentum_displacement(st, r0, r1, mid) < target)
            c_lo = mid;
        else
            c_hi = mid;
        if (c_hi - c_lo <= 1e-13 * (1.0 + c_hi)) break;
    }
    return momentum_tau(st, r0, r1, 0.5 * (c_lo + c_hi));
}

} // namespace

std::string chart_name(Chart c) {
    switch (c) {
        case Chart::minkowski: return "minkowski";
        case Chart::cone: return "cone";
        case Chart::warped: return "warped";
        case Chart::schwarzschild_interior: return "schwarzschild_interior";
    }
    throw std::logic_error("chart_name: unknown chart");
}

Chart chart_from_name(const std::string& name) {
    if (name == "minkowski") return Chart::minkowski;
    if (name == "cone") return Chart::cone;
    if (name == "warped") return Chart::warped;
    if (name == "schwarzschild_interior") return Chart::schwarzschild_interior;
    throw std::invalid_argument("unknown chart name: " + name);
}

void SpacetimeDescriptor::validate() const {
    switch (kind) {
        case Chart::minkowski:
            if (dim < 2) throw std::invalid_argument("minkowski: dim must be >= 2");
            break;
        case Chart::cone:
            if (dim < 2) throw std::invalid_argument("cone: dim must be >= 2");
            if (!(cone_aperture > 0.0)) throw std::invalid_argument("cone: aperture a must be > 0");
            break;
        case Chart::warped:
            if (dim != 2) throw std::invalid_argument("warped: only 1-dimensional fibers supported");
            if (!(r_min < r_max)) throw std::invalid_argument("warped: need r_min < r_max");
            if (profile == WarpProfile::linear && !(r_min >= 0.0))
                throw std::invalid_argument("warped linear profile: need r >= 0");
            if (fiber == FiberKind::circle && !(fiber_radius > 0.0))
                throw std::invalid_argument("warped circle fiber: radius must be > 0");
            break;
        case Chart::schwarzschild_interior:
            if (dim != 4) throw std::invalid_argument("schwarzschild_interior: dim must be 4");
            if (!(mass > 0.0)) throw std::invalid_argument("schwarzschild_interior: m must be > 0");
            if (!(slab_lo <= slab_hi)) throw std::invalid_argument("schwarzschild_interior: bad slab");
            break;
    }
}

Event SpacetimeDescriptor::event(std::vector<double> coords) const {
    if (static_cast<int>(coords.size()) != dim)
        throw std::invalid_argument("event: coordinate count does not match chart dimension");
    for (double c : coords)
        if (!std::isfinite(c)) throw std::invalid_argument("event: non-finite coordinate");
    if (kind == Chart::schwarzschild_interior) {
        const double r = coords[1];
        if (!(r > 0.0 && r < 2.0 * mass))
            throw std::invalid_argument("event: schwarzschild interior needs 0 < r < 2m");
    }
    return Event{kind, std::move(coords)};
}

int SpacetimeDescriptor::time_axis() const {
    return kind == Chart::schwarzschild_interior ? 1 : dim - 1;
}

double warp_theta(const SpacetimeDescriptor& st, double r) {
    return st.profile == WarpProfile::unit ? 1.0 : r;
}

bool chart_contains(const SpacetimeDescriptor& st, const Event& x, double tol) {
    switch (st.kind) {
        case Chart::minkowski:
            return true;
        case Chart::cone: {
            const double a = st.cone_aperture;
            const double rho = spatial_norm(x.coords, st.dim);
            const double t = x.coords[st.dim - 1];
            return rho <= a + tol && t >= rho * std::sqrt(1.0 + a * a) / a - tol;
        }
        case Chart::warped: {
            const double r = x.coords[1];
            if (!(r >= st.r_min - tol && r <= st.r_max + tol)) return false;
            return st.profile == WarpProfile::unit || r > 0.0;
        }
        case Chart::schwarzschild_interior: {
            const double t = x.coords[0], r = x.coords[1];
            return r > 0.0 && r < 2.0 * st.mass && t >= st.slab_lo - tol && t <= st.slab_hi + tol;
        }
    }
    return false;
}

double tau(const SpacetimeDescriptor& st, const Event& x, const Event& y) {
    require_same_chart(st, x, y);
    switch (st.kind) {
        case Chart::minkowski:
        case Chart::cone:
            return minkowski_tau(x.coords, y.coords, st.dim);
        case Chart::warped: {
            double t = 0.0;
            best_warped_delta(st, x, y, &t);
            return t;
        }
        case Chart::schwarzschild_interior:
            throw std::runtime_error(
                "tau: unsupported chart pair (schwarzschild interior two-point tau is out of scope)");
    }
    return 0.0;
}

bool causally_related(const SpacetimeDescriptor& st, const Event& x, const Event& y) {
    require_same_chart(st, x, y);
    switch (st.kind) {
        case Chart::minkowski:
        case Chart::cone: {
            const double dt = y.coords[st.dim - 1] - x.coords[st.dim - 1];
            if (dt < 0.0) return false;
            double d2 = 0.0;
            for (int i = 0; i + 1 < st.dim; ++i) {
                const double dxi = y.coords[i] - x.coords[i];
                d2 += dxi * dxi;
            }
            return dt * dt >= d2;
        }
        case Chart::warped: {
            const double r0 = x.coords[1], r1 = y.coords[1];
            if (r1 < r0) return false;
            if (r1 == r0) return x.coords[0] == y.coords[0];
            const double bound = fiber_null_range(st, r0, r1);
            for (double d : fiber_deltas(st, x.coords[0], y.coords[0]))
                if (std::abs(d) <= bound) return true;
            return false;
        }
        case Chart::schwarzschild_interior:
            throw std::runtime_error("causally_related: unsupported chart pair");
    }
    return false;
}

bool chronological(const SpacetimeDescriptor& st, const Event& x, const Event& y) {
    return tau(st, x, y) > 0.0;
}

Event geodesic_point(const SpacetimeDescriptor& st, const Event& x, const Event& y, double t) {
    require_same_chart(st, x, y);
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("geodesic_point: t must lie in [0,1]");
    switch (st.kind) {
        case Chart::minkowski:
        case Chart::cone: {
            if (!(minkowski_tau(x.coords, y.coords, st.dim) > 0.0))
                throw std::invalid_argument("geodesic_point: non-chronological pair");
            std::vector<double> z(st.dim);
            for (int i = 0; i < st.dim; ++i) z[i] = (1.0 - t) * x.coords[i] + t * y.coords[i];
            return Event{st.kind, std::move(z)};
        }
        case Chart::warped: {
            double tau_xy = 0.0;
            const double delta = best_warped_delta(st, x, y, &tau_xy);
            if (!(tau_xy > 0.0)) throw std::invalid_argument("geodesic_point: non-chronological pair");
            const double r0 = x.coords[1], r1 = y.coords[1];
            if (st.profile == WarpProfile::unit) {
                return Event{st.kind,
                             {wrap_fiber(st, x.coords[0] + t * delta), r0 + t * (r1 - r0)}};
            }
            // Interpolate in the (T, X) = (r cosh y, r sinh y) embedding.
            const double T0 = r0, X0 = 0.0;
            const double T1 = r1 * std::cosh(delta), X1 = r1 * std::sinh(delta);
            const double Tz = (1.0 - t) * T0 + t * T1;
            const double Xz = (1.0 - t) * X0 + t * X1;
            const double rz = std::sqrt((Tz - Xz) * (Tz + Xz));
            const double yz = x.coords[0] + std::atanh(Xz / Tz);
            return Event{st.kind, {wrap_fiber(st, yz), rz}};
        }
        case Chart::schwarzschild_interior:
            throw std::runtime_error("geodesic_point: unsupported chart pair");
    }
    throw std::logic_error("geodesic_point: unknown chart");
}

double volume_density(const SpacetimeDescriptor& st, const Event& x) {
    require_same_chart(st, x, x);
    switch (st.kind) {
        case Chart::minkowski:
        case Chart::cone:
            return 1.0;
        case Chart::warped:
            return warp_theta(st, x.coords[1]);
        case Chart::schwarzschild_interior: {
            const double r = x.coords[1], th = x.coords[2];
            return r * r * std::sin(th);
        }
    }
    return 1.0;
}

double schwarzschild_tau_to_singularity(double m, double r) {
    if (!(m > 0.0)) throw std::invalid_argument("schwarzschild_tau_to_singularity: m must be > 0");
    if (!(r > 0.0 && r <= 2.0 * m))
        throw std::invalid_argument("schwarzschild_tau_to_singularity: need 0 < r <= 2m");
    return kPi * m - std::sqrt(r * (2.0 * m - r)) - 2.0 * m * std::atan(std::sqrt((2.0 * m - r) / r));
}

double schwarzschild_slab_volume(double m, double a, double b) {
    if (!(b >= a)) throw std::invalid_argument("schwarzschild_slab_volume: need b >= a");
    return 32.0 * kPi * m * m * m * (b - a) / 3.0;
}

double schwarzschild_slice_area(double m, double r0, double a, double b) {
    if (!(r0 > 0.0 && r0 < 2.0 * m))
        throw std::invalid_argument("schwarzschild_slice_area: need 0 < r0 < 2m");
    return 4.0 * kPi * r0 * r0 * std::sqrt(2.0 * m / r0 - 1.0) * (b - a);
}

double maximize_warped_tau(const SpacetimeDescriptor& st, const Event& x, const Event& y) {
    require_same_chart(st, x, y);
    if (st.kind != Chart::warped) throw std::invalid_argument("maximize_warped_tau: warped chart only");
    const double r0 = x.coords[1], r1 = y.coords[1];
    if (r1 <= r0) return 0.0;
    double best = 0.0;
    for (double delta : fiber_deltas(st, x.coords[0], y.coords[0])) {
        if (std::abs(delta) >= fiber_null_range(st, r0, r1)) continue;
        best = std::max(best, extremal_tau(st, r0, r1, delta));
    }
    return best;
}

} // namespace lorot
