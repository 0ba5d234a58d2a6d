#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lorot/achronal.hpp"
#include "lorot/spacetime.hpp"

namespace lorot {

enum class RegionKind {
    box,        // axis-aligned box intersected with the chart region
    cone,       // alias for box on the cone chart
    slope_cone, // {t >= sqrt(a) * |x|} on a minkowski chart, optional tau-ball cut
    cone_vs,    // between an achronal set V and a set S: tau_V >= 0 and tau_S <= 0
    slab,       // alias for box on warped / schwarzschild charts
    diamond,    // chronological diamond between two point sets V and S
    near_set,   // {|tau_V| < eps}
};

std::string region_kind_name(RegionKind k);
RegionKind region_kind_from_name(const std::string& name);

struct RegionDescriptor {
    SpacetimeDescriptor st;
    RegionKind kind = RegionKind::box;
    std::vector<double> lo;
    std::vector<double> hi;
    double slope_a = 2.0; // slope_cone: t >= sqrt(slope_a) * |x|
    double radius = 0.0;  // slope_cone: keep tau(0, x) <= radius when > 0
    double eps = 0.0;     // near_set half-width
    bool has_V = false;
    bool has_S = false;
    AchronalSetDescriptor V;
    AchronalSetDescriptor S;
    // Extra predicate composed with the region; runtime only, not serialized.
    std::function<bool(const Event&)> extra;

    void validate() const;
    double box_volume() const;
};

bool region_contains(const RegionDescriptor& region, const Event& x);

// Upper bound for the chart volume density over the region's box.
double density_cap(const RegionDescriptor& region);

struct CausalSample {
    SpacetimeDescriptor st;
    std::vector<Event> events;
    std::vector<double> weights; // each weight = estimated region volume / n
    uint64_t seed = 0;
    bool has_matrices = false;
    std::vector<double> tau_mat;      // row-major n*n, filled iff has_matrices
    std::vector<uint8_t> causal_mat;  // row-major n*n, filled iff has_matrices

    int n() const { return static_cast<int>(events.size()); }
    double total_weight() const;
    double tau_at(int i, int j) const;
    bool causal_at(int i, int j) const;
};

// Poisson-style uniform rejection sample of the region with respect to the
// chart volume measure. Point i is drawn from substream (seed, i), so results
// do not depend on the worker count.
CausalSample sprinkle(const RegionDescriptor& region, int n, uint64_t seed, int workers = 1,
                      bool want_matrices = true);

struct VolumeEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    long long proposals = 0;
    long long accepted = 0;
};

// Unbiased Monte Carlo volume of the region using a fixed proposal count.
VolumeEstimate estimate_volume(const RegionDescriptor& region, long long proposals, uint64_t seed);

void write_samples(std::ostream& os, const CausalSample& sample);
void write_samples_file(const std::string& path, const CausalSample& sample);
CausalSample read_samples(std::istream& is, bool want_matrices = true);
CausalSample read_samples_file(const std::string& path, bool want_matrices = true);

} // namespace lorot
