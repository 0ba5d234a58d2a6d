#include "lorot/distortion.hpp"

#include <cmath>

#include "lorot/quadrature.hpp"

namespace lorot {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Below this value of |kappa| theta^2 the ratio s_k(t th)/s_k(th) is evaluated
// by series to stay continuous through kappa = 0 in floating point.
constexpr double kSeriesCutoff = 1e-8;

// Four-term Maclaurin series of s_kappa(theta) = sum (-kappa)^m theta^(2m+1)/(2m+1)!.
double sin_kappa_series(double kappa, double theta) {
    const double u = kappa * theta * theta;
    return theta * (1.0 - u / 6.0 * (1.0 - u / 20.0 * (1.0 - u / 42.0)));
}

} // namespace

double sin_kappa(double kappa, double theta) {
    if (theta < 0.0) throw std::invalid_argument("sin_kappa: theta must be >= 0");
    const double u = kappa * theta * theta;
    if (std::abs(u) < kSeriesCutoff) return sin_kappa_series(kappa, theta);
    if (kappa > 0.0) {
        const double rk = std::sqrt(kappa);
        return std::sin(rk * theta) / rk;
    }
    const double rk = std::sqrt(-kappa);
    return std::sinh(rk * theta) / rk;
}

ExtendedReal sigma(double kappa, double t, double theta) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("sigma: t must lie in [0,1]");
    if (theta < 0.0) throw std::invalid_argument("sigma: theta must be >= 0");
    const double u = kappa * theta * theta;
    if (u >= kPi * kPi) return ExtendedReal::infinity();
    if (u == 0.0) return ExtendedReal::finite(t);
    if (std::abs(u) < kSeriesCutoff)
        return ExtendedReal::finite(sin_kappa_series(kappa, t * theta) / sin_kappa_series(kappa, theta));
    return ExtendedReal::finite(sin_kappa(kappa, t * theta) / sin_kappa(kappa, theta));
}

ExtendedReal tau_coeff(const CurvatureParams& params, double t, double theta) {
    params.validate();
    const ExtendedReal s = sigma(params.K / params.N, t, theta);
    const double expo = (params.N - 1.0) / params.N;
    if (s.infinite) return expo > 0.0 ? ExtendedReal::infinity() : ExtendedReal::finite(t);
    return ExtendedReal::finite(std::pow(t, 1.0 / params.N) * std::pow(s.value, expo));
}

double profile_domain_limit(const CurvatureParams& params) {
    params.validate();
    if (params.K > 0.0 && params.N > 1.0) return kPi * std::sqrt((params.N - 1.0) / params.K);
    return std::numeric_limits<double>::infinity();
}

double profile_D(const CurvatureParams& params, double t) {
    params.validate();
    if (!(t > 0.0)) throw std::domain_error("profile_D: t must be > 0");
    if (params.N == 1.0) return t; // integrand s^(N-1) is identically 1
    if (params.K == 0.0) return t / params.N;
    if (t >= profile_domain_limit(params))
        throw std::domain_error("profile_D: t outside (0, T_{K,N})");
    const double kappa = params.K / (params.N - 1.0);
    const double expo = params.N - 1.0;
    const double numerator = integrate(
        [&](double s) { return std::pow(sin_kappa(kappa, s), expo); }, 0.0, t, 1e-10);
    return numerator / std::pow(sin_kappa(kappa, t), expo);
}

} // namespace lorot
