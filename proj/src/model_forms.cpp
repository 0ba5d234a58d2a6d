#include "lorot/model_forms.hpp"

#include <cmath>
#include <stdexcept>

#include "lorot/quadrature.hpp"

namespace lorot {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

double unit_ball_volume(int n) {
    require(n >= 0, "unit_ball_volume: need n >= 0");
    return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double cone_level_area(int n, double a, double rho) {
    require(n >= 1, "cone_level_area: need n >= 1");
    require(a > 0.0 && rho > 0.0, "cone_level_area: need a, rho > 0");
    const double integral =
        integrate([n](double r) { return std::pow(r, n - 1) / std::sqrt(1.0 + r * r); }, 0.0, a, 1e-13);
    return std::pow(rho, n) * n * unit_ball_volume(n) * integral;
}

double cone_level_volume(int n, double a, double rho) {
    require(n >= 1, "cone_level_volume: need n >= 1");
    require(a > 0.0 && rho > 0.0, "cone_level_volume: need a, rho > 0");
    const double top = std::sqrt(1.0 + a * a);
    const double omega = unit_ball_volume(n);
    const double cap = integrate([n](double x) { return std::pow(x * x - 1.0, n / 2.0); }, 1.0, top, 1e-13);
    return std::pow(rho, n + 1) * (top * std::pow(a, n) * omega / (n + 1) - omega * cap);
}

double cone_sharp_integral(int n, double a) {
    require(n >= 2, "cone_sharp_integral: need n >= 2");
    require(a > 0.0, "cone_sharp_integral: need a > 0");
    const double top = std::sqrt(1.0 + a * a);
    return integrate(
        [n](double x) {
            const double u = x * x - 1.0;
            return n * std::pow(u, (n - 2) / 2.0) + (n + 1) * std::pow(u, n / 2.0);
        },
        1.0, top, 1e-12);
}

double cone_sharp_rhs(int n, double a) {
    return std::pow(a, n) * std::sqrt(1.0 + a * a);
}

double slope_cone_rapidity_bound(double a) {
    require(a > 1.0, "slope_cone_rapidity_bound: need a > 1");
    return std::atanh(1.0 / std::sqrt(a));
}

double slope_cone_level_content(int dim, double a, double t) {
    require(dim >= 2, "slope_cone_level_content: need dim >= 2");
    require(t > 0.0, "slope_cone_level_content: need t > 0");
    const int n = dim - 1;
    const double phi = slope_cone_rapidity_bound(a);
    const double integral =
        integrate([n](double chi) { return std::pow(std::sinh(chi), n - 1); }, 0.0, phi, 1e-13);
    return std::pow(t, n) * n * unit_ball_volume(n) * integral;
}

double slope_cone_ball_volume(int dim, double a, double R) {
    return slope_cone_level_content(dim, a, R) * R / dim;
}

} // namespace lorot
