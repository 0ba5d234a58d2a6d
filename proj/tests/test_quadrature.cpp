#include <doctest.h>

#include <cmath>

#include "lorot/quadrature.hpp"

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("quadrature") {

TEST_CASE("polynomials are exact") {
    const double v = lorot::integrate([](double x) { return x * x * x; }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(v - 0.25) < 1e-14);
    const double w =
        lorot::integrate([](double x) { return 5.0 * std::pow(x, 4) - 2.0 * x; }, -1.0, 2.0, 1e-12);
    CHECK(std::abs(w - (std::pow(2.0, 5) + 1.0 - (4.0 - 1.0))) < 1e-12);
}

TEST_CASE("transcendental oracles") {
    const double s = lorot::integrate([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12);
    CHECK(std::abs(s - 2.0) < 1e-12);
    const double at =
        lorot::integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(at - kPi / 4.0) < 1e-12);
    const double e = lorot::integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(e - (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("integrable endpoint singularity") {
    const double v = lorot::integrate([](double x) { return std::log(x); }, 0.0, 1.0, 1e-9, 60);
    CHECK(std::abs(v - (-1.0)) < 1e-8);
}

TEST_CASE("interval conventions") {
    CHECK(lorot::integrate([](double) { return 7.0; }, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(lorot::integrate([](double) { return 1.0; }, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("absolute tolerance is honored on a spiky integrand") {
    auto f = [](double x) { return 1.0 / (1e-4 + (x - 0.3) * (x - 0.3)); };
    const double exact = (std::atan((1.0 - 0.3) / 1e-2) + std::atan(0.3 / 1e-2)) / 1e-2;
    const double v = lorot::integrate(f, 0.0, 1.0, 1e-9, 50);
    CHECK(std::abs(v - exact) < 1e-7);
}

} // TEST_SUITE
