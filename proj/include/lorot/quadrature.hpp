#pragma once
// Adaptive Gauss-Kronrod 7/15 quadrature with an absolute-error budget.

#include <cmath>
#include <stdexcept>

namespace lorot {

namespace detail {

// Kronrod-15 abscissae on [0,1] side of the symmetric rule; odd entries are
// the embedded Gauss-7 nodes (QUADPACK dqk15 constants).
inline constexpr double kGk15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
};
inline constexpr double kGk15Weights[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
};
inline constexpr double kGauss7Weights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694,
};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGk15Nodes[i]);
        fv[14 - i] = f(c + h * kGk15Nodes[i]);
    }
    fv[7] = f(c);
    double kronrod = kGk15Weights[7] * fv[7];
    double gauss = kGauss7Weights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kronrod += kGk15Weights[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * (fv[i] + fv[14 - i]);
    }
    value = kronrod * h;
    err = std::abs((kronrod - gauss) * h);
}

template <class F>
double integrate_rec(const F& f, double a, double b, double tol, int depth) {
    double value, err;
    gk15(f, a, b, value, err);
    if (err <= tol || depth <= 0) return value;
    const double c = 0.5 * (a + b);
    return integrate_rec(f, a, c, 0.5 * tol, depth - 1) +
           integrate_rec(f, c, b, 0.5 * tol, depth - 1);
}

} // namespace detail

// Integral of f over [a, b] to absolute tolerance abs_tol.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-10, int max_depth = 40) {
    if (!(a <= b)) throw std::invalid_argument("integrate: reversed interval");
    if (a == b) return 0.0;
    return detail::integrate_rec(f, a, b, abs_tol, max_depth);
}

} // namespace lorot
