#pragma once

#include <cstdint>
#include <vector>

#include "lorot/achronal.hpp"
#include "lorot/distortion.hpp"
#include "lorot/report.hpp"
#include "lorot/sampling.hpp"
#include "lorot/transport.hpp"

namespace lorot {

// Area-to-volume comparison: future_content(S) * profile_D(dist(V, S)) must
// not exceed the volume of the region spanned by the V-to-S rays, within four
// combined standard errors.
VerificationReport check_isoperimetric(const SpacetimeDescriptor& st,
                                       const AchronalSetDescriptor& V,
                                       const AchronalSetDescriptor& S,
                                       const CurvatureParams& params, long long n, uint64_t seed);

// Level-set content normalized by the model factor must be non-increasing in
// t (future grids) and non-decreasing on past grids. One report per
// consecutive grid pair.
std::vector<VerificationReport> check_monotonicity(const RegionDescriptor& region,
                                                   const AchronalSetDescriptor& V,
                                                   const CurvatureParams& params,
                                                   const std::vector<double>& t_grid, int n,
                                                   uint64_t seed);

// Quadrature check of the cone area = (n+1) * volume identity in its integral
// form, tolerance 1e-8.
VerificationReport check_claim_sharp_identity(int n, double a);

// Closed-form slice bound in the schwarzschild interior slab [a, b]:
// area(r0) * tau_to_singularity(r0) <= 128 pi m^3 (b-a) / 3.
std::vector<VerificationReport> check_schwarzschild_bound(double m, double a, double b,
                                                          const std::vector<double>& r0_grid);

// Interpolation inequality between the sampled sets A0, A1 (index sets into
// the sample): covered volume of the t-intermediate set, to the power 1/N,
// dominates the distortion-weighted combination of the endpoint masses.
VerificationReport check_brunn_minkowski(const CausalSample& sample, const std::vector<int>& A0,
                                         const std::vector<int>& A1, double t,
                                         const CurvatureParams& params, double p = 1.0);

} // namespace lorot
