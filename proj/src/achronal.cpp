#include "lorot/achronal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace lorot {

namespace {

constexpr double kPi = 3.14159265358979323846;

double signed_tau_point(const SpacetimeDescriptor& st, const Event& p, const Event& x) {
    const double up = tau(st, p, x);
    if (up > 0.0) return up;
    const double dn = tau(st, x, p);
    if (dn > 0.0) return -dn;
    return 0.0;
}

// Half-width of the cone region's cross-section {t = c}.
double cone_cap_width(const SpacetimeDescriptor& st, double c) {
    const double a = st.cone_aperture;
    return std::min(a, c * a / std::sqrt(1.0 + a * a));
}

int resolved_axis(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V) {
    return V.axis < 0 ? st.time_axis() : V.axis;
}

bool is_level_kind(SetKind k) { return k == SetKind::tau_level || k == SetKind::hyperboloid; }

double spatial_norm_from(const std::vector<double>& c, const std::vector<double>& base, int dim) {
    double s = 0.0;
    for (int i = 0; i + 1 < dim; ++i) {
        const double d = c[i] - base[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Spatial unit directions for a parameter grid, dim = spacetime dimension.
std::vector<std::vector<double>> direction_grid(int dim, int per_axis) {
    std::vector<std::vector<double>> dirs;
    if (dim == 2) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
    } else if (dim == 3) {
        for (int i = 0; i < per_axis; ++i) {
            const double b = 2.0 * kPi * i / per_axis;
            dirs.push_back({std::cos(b), std::sin(b)});
        }
    } else if (dim == 4) {
        for (int i = 0; i < per_axis; ++i) {
            const double u = -1.0 + 2.0 * (i + 0.5) / per_axis;
            const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (int j = 0; j < per_axis; ++j) {
                const double b = 2.0 * kPi * j / per_axis;
                dirs.push_back({s * std::cos(b), s * std::sin(b), u});
            }
        }
    } else {
        throw std::invalid_argument("direction grid: only dimensions 2..4 supported");
    }
    return dirs;
}

} // namespace

std::string set_kind_name(SetKind k) {
    switch (k) {
        case SetKind::point: return "point";
        case SetKind::tau_level: return "tau_level";
        case SetKind::coordinate_slice: return "coordinate_slice";
        case SetKind::hyperboloid: return "hyperboloid";
        case SetKind::singular_set: return "singular_set";
    }
    throw std::logic_error("set_kind_name: unknown kind");
}

SetKind set_kind_from_name(const std::string& name) {
    if (name == "point") return SetKind::point;
    if (name == "tau_level") return SetKind::tau_level;
    if (name == "coordinate_slice") return SetKind::coordinate_slice;
    if (name == "hyperboloid") return SetKind::hyperboloid;
    if (name == "singular_set") return SetKind::singular_set;
    throw std::invalid_argument("unknown achronal set kind: " + name);
}

std::vector<double> AchronalSetDescriptor::center_or_origin(const SpacetimeDescriptor& st) const {
    if (center.empty()) return std::vector<double>(st.dim, 0.0);
    if (static_cast<int>(center.size()) != st.dim)
        throw std::invalid_argument("achronal set: center dimension mismatch");
    return center;
}

void AchronalSetDescriptor::validate(const SpacetimeDescriptor& st) const {
    st.validate();
    switch (kind) {
        case SetKind::point:
            if (st.kind == Chart::schwarzschild_interior)
                throw std::invalid_argument("point sets are unsupported in the schwarzschild chart");
            center_or_origin(st);
            return;
        case SetKind::tau_level:
        case SetKind::hyperboloid: {
            if (level == 0.0) throw std::invalid_argument("level set: level must be nonzero");
            if (st.kind == Chart::warped || st.kind == Chart::schwarzschild_interior)
                throw std::invalid_argument("level sets supported in minkowski/cone charts only");
            const auto q = center_or_origin(st);
            if (st.kind == Chart::cone)
                for (double c : q)
                    if (c != 0.0)
                        throw std::invalid_argument("cone-chart level sets must be centred at the apex");
            return;
        }
        case SetKind::coordinate_slice: {
            const int ax = resolved_axis(st, *this);
            if (st.kind == Chart::minkowski || st.kind == Chart::cone) {
                if (ax != st.time_axis())
                    throw std::invalid_argument("minkowski slices must be constant-time (achronality)");
                if (st.kind == Chart::cone && !(value > 0.0))
                    throw std::invalid_argument("cone slice: need t = value > 0");
            } else if (st.kind == Chart::warped) {
                if (ax != 1) throw std::invalid_argument("warped slices must be {r = value}");
                if (!(value > st.r_min && value < st.r_max))
                    throw std::invalid_argument("warped slice outside the r-range");
            } else {
                if (ax != 1) throw std::invalid_argument("schwarzschild slices must be {r = value}");
                if (!(value > 0.0 && value < 2.0 * st.mass))
                    throw std::invalid_argument("schwarzschild slice: need 0 < r0 < 2m");
            }
            return;
        }
        case SetKind::singular_set:
            if (st.kind != Chart::schwarzschild_interior)
                throw std::invalid_argument("singular_set requires the schwarzschild chart");
            return;
    }
}

double tau_signed_from_set(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                           const Event& x) {
    switch (V.kind) {
        case SetKind::point: {
            const Event p = st.event(V.center_or_origin(st));
            return signed_tau_point(st, p, x);
        }
        case SetKind::tau_level:
        case SetKind::hyperboloid: {
            // Radial surrogate, exact inside cone-type regions around the
            // center; the full-chart supremum over the set's null wings is
            // not modeled.
            const Event q = st.event(V.center_or_origin(st));
            return signed_tau_point(st, q, x) - V.level;
        }
        case SetKind::coordinate_slice: {
            const int ax = resolved_axis(st, V);
            if (st.kind == Chart::minkowski || st.kind == Chart::warped)
                return x.coords[ax] - V.value;
            if (st.kind == Chart::cone) {
                const double dt = x.coords[ax] - V.value;
                if (dt <= 0.0) return dt;
                const double w = cone_cap_width(st, V.value);
                const double d = std::max(0.0, spatial_norm_from(x.coords, std::vector<double>(st.dim, 0.0), st.dim) - w);
                if (dt <= d) return 0.0;
                return std::sqrt((dt - d) * (dt + d));
            }
            // schwarzschild {r = r0}: future is decreasing r
            return schwarzschild_tau_to_singularity(st.mass, V.value) -
                   schwarzschild_tau_to_singularity(st.mass, x.coords[1]);
        }
        case SetKind::singular_set:
            return -schwarzschild_tau_to_singularity(st.mass, x.coords[1]);
    }
    throw std::logic_error("tau_signed_from_set: unknown kind");
}

std::vector<Event> sample_set_points(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                                     int per_axis) {
    V.validate(st);
    std::vector<Event> out;
    switch (V.kind) {
        case SetKind::point:
            out.push_back(st.event(V.center_or_origin(st)));
            return out;
        case SetKind::tau_level:
        case SetKind::hyperboloid: {
            const auto q = V.center_or_origin(st);
            const auto dirs = direction_grid(st.dim, per_axis);
            for (const auto& dir : dirs) {
                for (int i = 0; i < per_axis; ++i) {
                    const double chi = V.rapidity_cap * (i + 0.5) / per_axis;
                    std::vector<double> c(q);
                    for (int k = 0; k + 1 < st.dim; ++k) c[k] += V.level * std::sinh(chi) * dir[k];
                    c[st.dim - 1] += V.level * std::cosh(chi);
                    Event e{st.kind, std::move(c)};
                    if (chart_contains(st, e)) out.push_back(std::move(e));
                }
            }
            return out;
        }
        case SetKind::coordinate_slice: {
            const int ax = resolved_axis(st, V);
            if (st.kind == Chart::minkowski || st.kind == Chart::cone) {
                const double R = st.kind == Chart::cone ? cone_cap_width(st, V.value) : V.radius_cap;
                std::vector<int> idx(st.dim - 1, 0);
                while (true) {
                    std::vector<double> c(st.dim);
                    for (int k = 0; k + 1 < st.dim; ++k)
                        c[k] = -R + 2.0 * R * (idx[k] + 0.5) / per_axis;
                    c[ax] = V.value;
                    Event e{st.kind, std::move(c)};
                    if (chart_contains(st, e)) out.push_back(std::move(e));
                    int k = 0;
                    for (; k + 1 < st.dim; ++k) {
                        if (++idx[k] < per_axis) break;
                        idx[k] = 0;
                    }
                    if (k + 1 >= st.dim) break;
                }
                return out;
            }
            if (st.kind == Chart::warped) {
                const double span = st.fiber == FiberKind::circle
                                        ? 2.0 * kPi * st.fiber_radius
                                        : 2.0 * V.radius_cap;
                const double lo = st.fiber == FiberKind::circle ? 0.0 : -V.radius_cap;
                for (int i = 0; i < per_axis; ++i)
                    out.push_back(st.event({lo + span * (i + 0.5) / per_axis, V.value}));
                return out;
            }
            for (int i = 0; i < per_axis; ++i)
                for (int j = 0; j < per_axis; ++j)
                    for (int k = 0; k < per_axis; ++k)
                        out.push_back(st.event({st.slab_lo + (st.slab_hi - st.slab_lo) * (i + 0.5) / per_axis,
                                                V.value,
                                                kPi * (j + 0.5) / per_axis,
                                                2.0 * kPi * (k + 0.5) / per_axis}));
            return out;
        }
        case SetKind::singular_set:
            throw std::invalid_argument("sample_set_points: singular set has no chart events");
    }
    throw std::logic_error("sample_set_points: unknown kind");
}

bool validate_achronality(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                          int samples) {
    V.validate(st);
    // r is a time function in the schwarzschild interior, so constant-r sets
    // (and the singular boundary) are achronal without sampling.
    if (st.kind == Chart::schwarzschild_interior) return true;
    const int param_dims = st.dim - 1;
    int per_axis = std::max(2, static_cast<int>(std::round(std::pow(double(samples), 1.0 / param_dims))));
    per_axis = std::min(per_axis, 40);
    auto pts = sample_set_points(st, V, per_axis);
    if (pts.size() > 1200) pts.resize(1200);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j && tau(st, pts[i], pts[j]) > 1e-12) return false;
    return true;
}

double dist_to_set(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                   const AchronalSetDescriptor& S) {
    V.validate(st);
    S.validate(st);

    const auto vc = V.center_or_origin(st);
    const bool v_origin_point =
        V.kind == SetKind::point &&
        std::all_of(vc.begin(), vc.end(), [](double c) { return c == 0.0; });

    // Closed forms for the model configurations.
    if (v_origin_point && is_level_kind(S.kind) && S.level > 0.0) {
        const auto q = S.center_or_origin(st);
        if (std::all_of(q.begin(), q.end(), [](double c) { return c == 0.0; })) return S.level;
    }
    if (v_origin_point && S.kind == SetKind::coordinate_slice && st.kind == Chart::cone) {
        const double c = S.value;
        const double w = cone_cap_width(st, c);
        return std::sqrt((c - w) * (c + w));
    }

    // Grid minimization over sampled points of S.
    const int per_axis = st.dim == 2 ? 4096 : (st.dim == 3 ? 128 : 48);
    const auto pts = sample_set_points(st, S, per_axis);
    if (pts.empty()) throw std::runtime_error("dist_to_set: no sample points of S in the chart region");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : pts) best = std::min(best, tau_signed_from_set(st, V, y));
    return best;
}

} // namespace lorot
