#pragma once

namespace autoconv {

/// Bessel function of the first kind J_nu(z) for real nu > -1/2 and z >= 0.
///
/// Routes by argument:
///   z <= 25        ascending power series, accumulated in double-double
///   25 < z <= 100  Mehler-Sonine integral by tanh-sinh quadrature
///   z > 100        Hankel asymptotic expansion
/// Neighbouring routes agree to better than 1e-13 across each switch point for
/// |nu| <= 1/2. The quadrature route loses about (z/2)^nu / Gamma(nu + 1/2)
/// ulps to cancellation, which matters only for larger orders.
double bessel_j(double nu, double z);

inline constexpr double kBesselSeriesLimit = 25.0;
inline constexpr double kBesselAsymptoticStart = 100.0;

/// sum_j (-1)^j (z/2)^{2j+nu} / (j! Gamma(j+nu+1)).
double bessel_j_series(double nu, double z);

/// (z/2)^nu / (Gamma(nu+1/2) sqrt(pi)) int_{-1}^{1} cos(zs) (1-s^2)^{nu-1/2} ds.
double bessel_j_integral(double nu, double z);

/// sqrt(2/(pi z)) (P cos w - Q sin w), w = z - (nu/2 + 1/4) pi, summed until
/// the terms stop decreasing.
double bessel_j_asymptotic(double nu, double z);

}  // namespace autoconv
