#pragma once

#include <cstddef>
#include <functional>

namespace nomasel {

/// Euler-Mascheroni constant.
double euler_gamma();

/// Principal-value exponential integral Ei(x) for real x != 0.
///
/// x > 0: power series up to 40, asymptotic expansion above.
/// x < 0: Ei(x) = -E1(-x), with the E1 series for -x <= 1 and a Lentz
/// continued fraction beyond. Throws std::domain_error at x == 0.
double exp_integral_ei(double x);

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // summed 61- vs 31-point disagreement
  bool converged = false;  // abs_error <= requested tolerance
};

/// Integral of f over [0, inf).
///
/// `scale` is the length over which f decays (e.g. 1/Omega for an
/// exponential density). The half-line is split geometrically around it and
/// each piece is integrated with adaptive Gauss-Kronrod; integration stops
/// once the remaining tail contributes below 1e-14 of the running total.
/// `fine_scale`, when smaller, extends the geometric grid toward zero.
QuadratureResult integrate_half_line(const std::function<double(double)>& f, double scale,
                                     double abs_tol = 1e-8, double fine_scale = 0.0);

/// Average rate E[log2(1 + b rho X)] for X with density `pdf` (decay length
/// `scale`), evaluated by quadrature.
QuadratureResult quadrature_rate(const std::function<double(double)>& pdf, double b, double rho,
                                 double scale);

}  // namespace nomasel
