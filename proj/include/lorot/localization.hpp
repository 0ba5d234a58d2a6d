#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "lorot/achronal.hpp"
#include "lorot/sampling.hpp"
#include "lorot/transport.hpp"

namespace lorot {

struct Ray {
    double label = 0.0; // representative transverse coordinate of the cell
    double label_lo = 0.0;
    double label_hi = 0.0;
    double q = 0.0; // normalized quotient weight of the cell
    std::vector<double> bin_centers;
    std::vector<double> h;
    std::vector<double> h_stderr;
    std::vector<long long> counts;
};

// Disintegration of a sampled region over the rays emanating from an achronal
// set V: cells are equal-mass slabs of the transverse coordinate, and h(a, s)
// is the one-dimensional density along s = signed time separation from V,
// normalized so that sum_a q_a * integral h(a, s) ds recovers the sampled
// volume of the s-range.
struct RayDecomposition {
    SpacetimeDescriptor st;
    AchronalSetDescriptor V;
    int cells = 0;
    int bins = 0;
    double s_lo = 0.0;
    double s_hi = 0.0;
    double bin_width = 0.0;
    double total_volume = 0.0;
    double unassigned_fraction = 0.0;
    std::vector<Ray> rays;

    // Point on the representative geodesic of cell alpha at parameter s.
    Event ray_point(int alpha, double s) const;
    nlohmann::json to_json() const;
};

// Transverse cell coordinate of x relative to V; NaN when x is not on any ray.
double transverse_label(const SpacetimeDescriptor& st, const AchronalSetDescriptor& V,
                        const Event& x);

// cells = 0 picks min(floor(sqrt(n)), 16). NaN range bounds default to
// (0, max s] over the sample.
RayDecomposition build_ray_decomposition(const CausalSample& sample,
                                         const AchronalSetDescriptor& V, int cells = 0,
                                         int bins = 10, double s_lo = std::nan(""),
                                         double s_hi = std::nan(""));

struct DensityCheck {
    bool ok = false;
    double fraction = 0.0;
    long long tested = 0;
    long long satisfied = 0;
};

// Second-order density inequality: (log h)'' + (log h)'^2 / (N-1) <= -K + tol
// per (ray, interior bin), on 3-bin moving-average smoothed log h. Passes when
// at least min_fraction of the tested pairs satisfy it.
DensityCheck check_cd_density(const RayDecomposition& d, double K, double N, double tol,
                              double min_fraction = 0.95);

// Two-sided measure-contraction bounds for consecutive bins on the ray domain
// (a, b): (s_k(b-s1)/s_k(b-s0))^(N-1) <= h1/h0 <= (s_k(s1-a)/s_k(s0-a))^(N-1)
// with k = K/(N-1), up to a multiplicative 1 + stderr_mult * relative stderr.
// b may be +infinity when K <= 0.
DensityCheck check_mcp_bound(const RayDecomposition& d, double K, double N, double a, double b,
                             double stderr_mult = 5.0, double min_fraction = 0.95);

struct ExponentFit {
    double exponent = 0.0; // q-weighted mean of per-ray slopes of log h vs log s
    double spread = 0.0;   // weighted standard deviation across rays
    std::vector<double> per_ray;
};

ExponentFit fit_density_exponent(const RayDecomposition& d);

struct LocalizationRay {
    std::vector<int> indices; // sample indices on this transport ray, time-ordered
    double mass = 0.0;        // coupled mass (normalized units)
    double imbalance = 0.0;   // |sum of f * weight| over the ray, normalized
    bool balanced = false;
};

struct LocalizationResult {
    TransportPlan plan;
    std::vector<LocalizationRay> rays;
    bool all_balanced = false;
};

// Splits a zero-mean f into its positive and negative parts, couples them with
// the p-optimal causal plan, and reports the balance of every connected
// component of the plan support. Throws when the pair cannot be coupled.
LocalizationResult localize_zero_mean(const CausalSample& sample, const std::vector<double>& f,
                                      double p = 1.0);

} // namespace lorot
