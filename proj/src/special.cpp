#include "nomasel/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nomasel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// E1(y) = -gamma - ln y - sum_{k>=1} (-y)^k / (k k!), y in (0, 1].
double e1_series(double y) {
  double sum = 0.0;
  double fact = 1.0;  // (-y)^k / k!
  for (int k = 1; k < 100; ++k) {
    fact *= -y / k;
    const double term = fact / k;
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return -std::numbers::egamma - std::log(y) - sum;
}

// Modified Lentz evaluation of the E1 continued fraction, y > 1.
double e1_continued_fraction(double y) {
  constexpr double kTiny = 1e-300;
  double b = y + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-y);
}

double ei_series(double x) {
  double sum = 0.0;
  double fact = 1.0;  // x^k / k!
  for (int k = 1; k < 500; ++k) {
    fact *= x / k;
    const double term = fact / k;
    sum += term;
    if (term < kEps * sum) break;
  }
  return std::numbers::egamma + std::log(x) + sum;
}

// e^x/x * sum_k k!/x^k, truncated at the smallest term.
double ei_asymptotic(double x) {
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < kEps * sum) break;
  }
  return std::exp(x) / x * sum;
}

}  // namespace

double euler_gamma() { return std::numbers::egamma; }

double exp_integral_ei(double x) {
  if (x == 0.0 || std::isnan(x)) throw std::domain_error("Ei is undefined at 0");
  if (x < 0.0) {
    const double y = -x;
    return -(y <= 1.0 ? e1_series(y) : e1_continued_fraction(y));
  }
  return x <= 40.0 ? ei_series(x) : ei_asymptotic(x);
}

namespace {

using Gk61 = boost::math::quadrature::gauss_kronrod<double, 61>;
using Gk31 = boost::math::quadrature::gauss_kronrod<double, 31>;

// Bisects until the 61- and 31-point rules agree. Returns the 61-point value;
// `err` collects |v61 - v31| of the accepted pieces.
double bisect(const std::function<double(double)>& f, double a, double b, double rel_tol,
              double abs_floor, unsigned depth, double& err) {
  const double v61 = Gk61::integrate(f, a, b, 0, 0.0);
  const double v31 = Gk31::integrate(f, a, b, 0, 0.0);
  const double d = std::abs(v61 - v31);
  if (d <= std::max(rel_tol * std::abs(v61), abs_floor) || depth == 0 || !std::isfinite(v61)) {
    err += d;
    return v61;
  }
  const double mid = 0.5 * (a + b);
  return bisect(f, a, mid, rel_tol, 0.5 * abs_floor, depth - 1, err) +
         bisect(f, mid, b, rel_tol, 0.5 * abs_floor, depth - 1, err);
}

}  // namespace

QuadratureResult integrate_half_line(const std::function<double(double)>& f, double scale,
                                     double abs_tol, double fine_scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("integrate_half_line: scale must be positive");
  }
  if (!(fine_scale > 0.0)) fine_scale = scale;
  constexpr unsigned kMaxDepth = 10;
  constexpr double kRelTol = 1e-13;

  QuadratureResult out;
  auto piece = [&](double a, double b) {
    // the floor keeps tiny leading pieces from bisecting on roundoff
    const double floor = 1e-3 * abs_tol * (b - a) / scale;
    const double v = bisect(f, a, b, kRelTol, floor, kMaxDepth, out.abs_error);
    out.value += v;
    return v;
  };

  // [0, lo] is negligible for any bounded integrand but integrated anyway;
  // then doubling segments until the tail goes quiet.
  double lo = std::min(fine_scale, scale) * 0x1.0p-40;
  piece(0.0, lo);
  int quiet = 0;
  while (lo < scale * 0x1.0p+30) {
    const double hi = 2.0 * lo;
    const double v = piece(lo, hi);
    lo = hi;
    if (lo > 32.0 * scale) {
      quiet = std::abs(v) <= 1e-14 * std::abs(out.value) ? quiet + 1 : 0;
      if (quiet >= 3) break;
    }
  }
  out.converged = out.abs_error <= abs_tol && std::isfinite(out.value);
  return out;
}

QuadratureResult quadrature_rate(const std::function<double(double)>& pdf, double b, double rho,
                                 double scale) {
  if (!(b > 0.0) || !(rho > 0.0)) throw std::invalid_argument("quadrature_rate: b, rho > 0");
  auto integrand = [&](double x) { return std::log2(1.0 + b * rho * x) * pdf(x); };
  // The log has a kink near 1/(b rho); resolve it as well as the density.
  return integrate_half_line(integrand, scale, 1e-8, 1.0 / (b * rho));
}

}  // namespace nomasel
