#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "lorot/achronal.hpp"
#include "lorot/localization.hpp"
#include "lorot/sampling.hpp"

namespace lorot {

struct ContentEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    struct PerEps {
        double eps = 0.0;
        double value = 0.0; // vol({0 < tau_A < eps} within the window) / eps
        double stderr_ = 0.0;
    };
    std::vector<double> eps_grid;
    std::vector<PerEps> per_eps;
    bool monotone_trend = true; // per-eps values ordered consistently within noise
    RegionDescriptor window;

    nlohmann::json to_json() const;
};

// Shell-volume limit vol({x in U : 0 < tau_A(x) < eps}) / eps as eps -> 0,
// extrapolated linearly from the two smallest grid values.
ContentEstimate future_content(const SpacetimeDescriptor& st, const AchronalSetDescriptor& A,
                               const RegionDescriptor& U, const std::vector<double>& eps_grid,
                               long long n_per_eps, uint64_t seed);

// Mirror with the shell {-eps < tau_A < 0}.
ContentEstimate past_content(const SpacetimeDescriptor& st, const AchronalSetDescriptor& A,
                             const RegionDescriptor& U, const std::vector<double>& eps_grid,
                             long long n_per_eps, uint64_t seed);

enum class Side { future, past };

// One-sided density value of a sampled 1D density at s0: linear interpolation
// through the two nodes nearest to s0 strictly on the stated side.
double one_d_content(const std::vector<double>& s_nodes, const std::vector<double>& h_values,
                     double s0, Side side);

// Same value, plus the standard error propagated through the interpolation
// weights. h_stderr may be empty for exact node values.
double one_d_content(const std::vector<double>& s_nodes, const std::vector<double>& h_values,
                     const std::vector<double>& h_stderr, double s0, Side side,
                     double* stderr_out);

// Sum of q_a * h(a, s_a) over rays whose data extends strictly past their
// intersection parameter s_a with A.
double content_via_rays(const RayDecomposition& dec, const AchronalSetDescriptor& A,
                        double* stderr_out = nullptr);

// Euclidean eps'-thickening of A in chart coordinates, eps' = frac * diameter
// of A's sampled points; the canonical shrinking-window family uses
// frac in {0.2, 0.1, 0.05}.
RegionDescriptor thickened_window(const SpacetimeDescriptor& st, const AchronalSetDescriptor& A,
                                  double frac, int per_axis = 32);

} // namespace lorot
