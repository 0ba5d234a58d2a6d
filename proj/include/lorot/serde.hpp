#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "lorot/achronal.hpp"
#include "lorot/distortion.hpp"
#include "lorot/sampling.hpp"
#include "lorot/spacetime.hpp"

namespace lorot {

inline void to_json(nlohmann::json& j, const SpacetimeDescriptor& st) {
    j = nlohmann::json{{"chart", chart_name(st.kind)}, {"dim", st.dim}};
    switch (st.kind) {
        case Chart::minkowski:
            break;
        case Chart::cone:
            j["aperture"] = st.cone_aperture;
            break;
        case Chart::warped:
            j["profile"] = st.profile == WarpProfile::unit ? "unit" : "linear";
            j["fiber"] = st.fiber == FiberKind::line ? "line" : "circle";
            if (st.fiber == FiberKind::circle) j["fiber_radius"] = st.fiber_radius;
            j["r_range"] = {st.r_min, st.r_max};
            break;
        case Chart::schwarzschild_interior:
            j["mass"] = st.mass;
            j["slab"] = {st.slab_lo, st.slab_hi};
            break;
    }
}

inline void from_json(const nlohmann::json& j, SpacetimeDescriptor& st) {
    st = SpacetimeDescriptor{};
    st.kind = chart_from_name(j.at("chart").get<std::string>());
    st.dim = j.value("dim", st.kind == Chart::warped ? 2 : (st.kind == Chart::schwarzschild_interior ? 4 : 2));
    if (j.contains("aperture")) st.cone_aperture = j["aperture"].get<double>();
    if (j.contains("profile")) {
        const auto p = j["profile"].get<std::string>();
        if (p == "unit") st.profile = WarpProfile::unit;
        else if (p == "linear") st.profile = WarpProfile::linear;
        else throw std::invalid_argument("unknown warp profile: " + p);
    }
    if (j.contains("fiber")) {
        const auto f = j["fiber"].get<std::string>();
        if (f == "line") st.fiber = FiberKind::line;
        else if (f == "circle") st.fiber = FiberKind::circle;
        else throw std::invalid_argument("unknown fiber kind: " + f);
    }
    if (j.contains("fiber_radius")) st.fiber_radius = j["fiber_radius"].get<double>();
    if (j.contains("r_range")) {
        st.r_min = j["r_range"].at(0).get<double>();
        st.r_max = j["r_range"].at(1).get<double>();
    }
    if (j.contains("mass")) st.mass = j["mass"].get<double>();
    if (j.contains("slab")) {
        st.slab_lo = j["slab"].at(0).get<double>();
        st.slab_hi = j["slab"].at(1).get<double>();
    }
    st.validate();
}

inline void to_json(nlohmann::json& j, const AchronalSetDescriptor& V) {
    j = nlohmann::json{{"kind", set_kind_name(V.kind)}};
    if (!V.center.empty()) j["center"] = V.center;
    if (V.kind == SetKind::tau_level || V.kind == SetKind::hyperboloid) j["level"] = V.level;
    if (V.kind == SetKind::coordinate_slice) {
        if (V.axis >= 0) j["axis"] = V.axis;
        j["value"] = V.value;
    }
    j["rapidity_cap"] = V.rapidity_cap;
    j["radius_cap"] = V.radius_cap;
}

inline void from_json(const nlohmann::json& j, AchronalSetDescriptor& V) {
    V = AchronalSetDescriptor{};
    V.kind = set_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("center")) V.center = j["center"].get<std::vector<double>>();
    V.level = j.value("level", V.level);
    V.axis = j.value("axis", V.axis);
    V.value = j.value("value", V.value);
    V.rapidity_cap = j.value("rapidity_cap", V.rapidity_cap);
    V.radius_cap = j.value("radius_cap", V.radius_cap);
}

inline void to_json(nlohmann::json& j, const CurvatureParams& p) {
    j = nlohmann::json{{"K", p.K}, {"N", p.N}};
}

inline void from_json(const nlohmann::json& j, CurvatureParams& p) {
    p = CurvatureParams{};
    p.K = j.value("K", p.K);
    p.N = j.value("N", p.N);
    p.validate();
}

// The runtime-only extra predicate is not represented.
inline void to_json(nlohmann::json& j, const RegionDescriptor& r) {
    j = nlohmann::json{{"kind", region_kind_name(r.kind)},
                       {"spacetime", r.st},
                       {"lo", r.lo},
                       {"hi", r.hi}};
    if (r.kind == RegionKind::slope_cone) {
        j["slope_a"] = r.slope_a;
        if (r.radius > 0.0) j["radius"] = r.radius;
    }
    if (r.kind == RegionKind::near_set) j["eps"] = r.eps;
    if (r.has_V) j["V"] = r.V;
    if (r.has_S) j["S"] = r.S;
}

inline void from_json(const nlohmann::json& j, RegionDescriptor& r) {
    r = RegionDescriptor{};
    r.st = j.at("spacetime").get<SpacetimeDescriptor>();
    r.kind = region_kind_from_name(j.value("kind", "box"));
    r.lo = j.at("lo").get<std::vector<double>>();
    r.hi = j.at("hi").get<std::vector<double>>();
    r.slope_a = j.value("slope_a", r.slope_a);
    r.radius = j.value("radius", r.radius);
    r.eps = j.value("eps", r.eps);
    if (j.contains("V")) {
        r.V = j["V"].get<AchronalSetDescriptor>();
        r.has_V = true;
    }
    if (j.contains("S")) {
        r.S = j["S"].get<AchronalSetDescriptor>();
        r.has_S = true;
    }
    r.validate();
}

} // namespace lorot
