#pragma once
// Analytic model spacetimes: exact time separation, causal relations, geodesic
// interpolation, and volume densities in chart coordinates.
//
// Coordinate convention: the time coordinate comes last, so a Minkowski event
// is (x_1, ..., x_{n}, t). The Schwarzschild interior chart keeps its usual
// (t, r, theta, phi) order; there the time function is r with the future
// pointing toward decreasing r. Warped charts are (y, r) with r the time
// coordinate and future = increasing r.

#include <stdexcept>
#include <string>
#include <vector>

namespace lorot {

enum class Chart { minkowski, cone, warped, schwarzschild_interior };

std::string chart_name(Chart c);
Chart chart_from_name(const std::string& name);

struct Event {
    Chart chart = Chart::minkowski;
    std::vector<double> coords;
};

enum class WarpProfile { unit, linear }; // theta(r) = 1 and theta(r) = r
enum class FiberKind { line, circle };

struct SpacetimeDescriptor {
    Chart kind = Chart::minkowski;
    int dim = 2;

    // cone chart (and optional aperture on minkowski): region
    // {t >= ||x|| sqrt(1+a^2)/a, ||x|| <= a}
    double cone_aperture = 1.0;

    // warped chart, metric -dr^2 + theta(r)^2 dy^2 on (r_min, r_max) x fiber
    WarpProfile profile = WarpProfile::unit;
    FiberKind fiber = FiberKind::line;
    double fiber_radius = 1.0; // circle: y is arclength in [0, 2 pi fiber_radius)
    double r_min = 0.0;
    double r_max = 10.0;

    // schwarzschild interior, 0 < r < 2m, slab t in [slab_lo, slab_hi]
    double mass = 1.0;
    double slab_lo = 0.0;
    double slab_hi = 1.0;

    void validate() const;
    Event event(std::vector<double> coords) const;
    int time_axis() const; // index of the time coordinate in this chart
};

// Warp factor theta(r).
double warp_theta(const SpacetimeDescriptor& st, double r);

// True when the chart's coordinate domain (cone region, warped r-range,
// Schwarzschild slab) contains x; plain Minkowski always does.
bool chart_contains(const SpacetimeDescriptor& st, const Event& x, double tol = 1e-12);

// Time separation tau(x, y): supremal proper time from x to y, 0 when x <= y
// fails. Exact closed forms for minkowski/cone and for both warped profiles.
double tau(const SpacetimeDescriptor& st, const Event& x, const Event& y);

bool causally_related(const SpacetimeDescriptor& st, const Event& x, const Event& y);  // x <= y
bool chronological(const SpacetimeDescriptor& st, const Event& x, const Event& y);     // x << y

// t-intermediate point of the maximizing geodesic from x to y; requires
// tau(x, y) > 0. Affine in minkowski/cone; closed-form geodesic in warped charts.
Event geodesic_point(const SpacetimeDescriptor& st, const Event& x, const Event& y, double t);

// Lebesgue density of the volume measure in chart coordinates.
double volume_density(const SpacetimeDescriptor& st, const Event& x);

// Proper time from r to the singularity r = 0 along the radial free fall:
// pi m - sqrt(2 m r - r^2) - 2 m atan(sqrt((2m - r)/r)).
double schwarzschild_tau_to_singularity(double m, double r);

// Volume of the interior slab {t in [a, b]}: 32 pi m^3 (b - a) / 3.
double schwarzschild_slab_volume(double m, double a, double b);

// Induced area of {r = r0, t in [a, b]}: 4 pi r0^2 sqrt(2m/r0 - 1) (b - a).
double schwarzschild_slice_area(double m, double r0, double a, double b);

// Maximal proper time between x and y, maximized per fiber winding by
// bisecting the conserved fiber momentum of the extremal path and
// integrating displacement and proper time along it.
// Returns 0 when no causal path exists.
double maximize_warped_tau(const SpacetimeDescriptor& st, const Event& x, const Event& y);

} // namespace lorot
