#pragma once
// Achronal set descriptors and the signed time separation tau_V.

#include <cstdint>
#include <vector>

#include "lorot/spacetime.hpp"

namespace lorot {

enum class SetKind { point, tau_level, coordinate_slice, hyperboloid, singular_set };

std::string set_kind_name(SetKind k);
SetKind set_kind_from_name(const std::string& name);

// Supported sets:
//   point:            a single event at `center`
//   tau_level:        {tau(center, .) = level}, the future level set of a point
//   hyperboloid:      the same surface, kept as its own tag ({t^2 - ||x||^2 = level^2})
//   coordinate_slice: {coords[axis] = value}; axis = -1 means the chart time axis
//   singular_set:     {r = 0} in the Schwarzschild interior
struct AchronalSetDescriptor {
    SetKind kind = SetKind::point;
    std::vector<double> center; // empty means the chart origin
    double level = 1.0;
    int axis = -1;
    double value = 0.0;

    // Parameter caps used when sampling points of unbounded sets (rapidity of
    // level sets, spatial radius of slices) for validation and minimization.
    double rapidity_cap = 3.0;
    double radius_cap = 10.0;

    void validate(const SpacetimeDescriptor& st) const;
    std::vector<double> center_or_origin(const SpacetimeDescriptor& st) const;
};

// Signed time separation: sup_{y in V} tau(y, x) on I+(V), -sup tau(x, .) on
// I-(V), 0 otherwise; closed form for every supported descriptor.
double tau_signed_from_set(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                           const Event& x);

// Deterministic parameter-grid sample of the set, clipped to the chart region.
std::vector<Event> sample_set_points(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                                     int per_axis);

// No two sampled points chronologically related (grid sampling; exact charts).
bool validate_achronality(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                          int samples = 1000);

// dist(V, S) = inf over S of tau_V; closed form where available, otherwise a
// parameter grid plus local zoom refinement (relative tolerance ~1e-6).
double dist_to_set(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                   const AchronalSetDescriptor& S);

} // namespace lorot
