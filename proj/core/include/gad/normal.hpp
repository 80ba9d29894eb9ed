#pragma once

namespace gad {

inline constexpr double kPi = 3.14159265358979323846;

double normal_pdf(double z);
/// Φ(z), accurate in both tails (erfc based).
double normal_cdf(double z);
/// 2·Φ(−|z|): probability a standard normal is at least |z| from zero.
double two_sided_tail(double z);

/// P(U > h, V > k) for a standard bivariate normal with correlation rho.
/// Genz's BVNU algorithm (Drezner–Wesolowsky with Gauss–Legendre rules of
/// 6/12/20 points); absolute error below 1e-14 over the whole domain.
double bvn_upper(double h, double k, double rho);

/// P(|U| < a, |V| < b), the centred rectangle probability, for a, b >= 0.
double bvn_central_rectangle(double a, double b, double rho);

/// P(|U| >= a, |V| >= b): the mass in the four unbounded corners beyond
/// (±a, ±b), for a, b >= 0. Computed as 2·[Q(a,b,ρ) + Q(a,b,−ρ)] where Q is the
/// upper orthant, which keeps relative accuracy deep in the tails.
double bvn_corner_mass(double a, double b, double rho);

}  // namespace gad
