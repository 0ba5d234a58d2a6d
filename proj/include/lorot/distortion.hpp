#pragma once
// Distortion coefficients of constant-curvature comparison spaces and the
// model isoperimetric profile.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lorot {

struct CurvatureParams {
    double K = 0.0; // timelike Ricci lower bound
    double N = 2.0; // dimension bound, N >= 1

    void validate() const {
        if (!(N >= 1.0)) throw std::invalid_argument("CurvatureParams: N must be >= 1");
        if (!std::isfinite(K) || !std::isfinite(N))
            throw std::invalid_argument("CurvatureParams: K, N must be finite");
    }
};

// Real value or a +infinity marker (the degenerate regime of sigma).
struct ExtendedReal {
    double value = 0.0;
    bool infinite = false;

    static ExtendedReal finite(double v) { return {v, false}; }
    static ExtendedReal infinity() { return {std::numeric_limits<double>::infinity(), true}; }
};

// s_kappa(theta): sin(sqrt(k) th)/sqrt(k) for k>0, th for k=0, sinh analogue for k<0.
double sin_kappa(double kappa, double theta);

// sigma_kappa^(t)(theta): s_kappa(t th)/s_kappa(th); t when kappa th^2 = 0;
// +infinity when kappa th^2 >= pi^2.
ExtendedReal sigma(double kappa, double t, double theta);

// tau_{K/N}^(t)(theta) = t^(1/N) sigma_{K/N}^(t)(theta)^((N-1)/N).
ExtendedReal tau_coeff(const CurvatureParams& params, double t, double theta);

// Upper end of the profile domain: pi sqrt((N-1)/K) for K>0, +infinity otherwise.
double profile_domain_limit(const CurvatureParams& params);

// D_{K,N}(t) = (1/s_{K/(N-1)}(t)^{N-1}) * integral_0^t s_{K/(N-1)}(s)^{N-1} ds,
// strictly increasing on (0, T_{K,N}); equals t/N when K = 0.
double profile_D(const CurvatureParams& params, double t);

} // namespace lorot
