#pragma once
// Closed forms for the two explicit cone families used in the verification
// suite: the unit-aperture truncated cone spanned from the origin by a flat
// spatial disc, and the steep coordinate cone {t >= sqrt(a) |x|}.

namespace lorot {

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

// Area of the time separation level set {tau(0, .) = rho} inside the cone
// spanned by the origin and the disc {t = sqrt(1+a^2), |x| <= a}, spatial
// dimension n: rho^n * n * omega_n * integral_0^a r^(n-1)/sqrt(1+r^2) dr.
double cone_level_area(int n, double a, double rho);

// Volume of the region between the origin and that level set.
double cone_level_volume(int n, double a, double rho);

// Both sides of the identity
// integral_1^sqrt(1+a^2) [n (x^2-1)^((n-2)/2) + (n+1)(x^2-1)^(n/2)] dx
//   = a^n sqrt(1+a^2),
// which encodes area = (n+1) * volume for the family above.
double cone_sharp_integral(int n, double a);
double cone_sharp_rhs(int n, double a);

// Rapidity half-width artanh(1/sqrt(a)) of the steep cone {t >= sqrt(a)|x|}.
double slope_cone_rapidity_bound(double a);

// Area of {tau = t} inside the steep cone, spacetime dimension dim:
// t^(dim-1) * (dim-1) * omega_{dim-1} * integral_0^phi sinh^(dim-2).
double slope_cone_level_content(int dim, double a, double t);

// Volume of the steep cone truncated at tau <= R.
double slope_cone_ball_volume(int dim, double a, double R);

} // namespace lorot
