#include "nomasel/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nomasel {

namespace {

void require_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be > 0");
}

// Rate of the user decoded against the other's interference.
double interference_limited(double gain, PowerSplit s, double rho) {
  return std::log2(1.0 + s.a * gain / (s.b * gain + 1.0 / rho));
}

double interference_free(double gain, double share, double rho) {
  return std::log2(1.0 + rho * share * gain);
}

RatePair split_rates(double h, double g, PowerSplit s, double rho) {
  if (channel_order(h, g) == 1) {
    return {interference_free(h, s.b, rho), interference_limited(g, s, rho)};
  }
  return {interference_limited(h, s, rho), interference_free(g, s.b, rho)};
}

}  // namespace

PowerSplit PowerSplit::from_strong_share(double b) {
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("power share b must lie in [0,1]");
  return {1.0 - b, b};
}

PowerSplit PowerSplit::fixed(double b) {
  if (!(b > 0.0 && b <= 0.5)) {
    throw std::invalid_argument("fixed allocation needs 0 < b <= 1/2");
  }
  return from_strong_share(b);
}

int channel_order(double h, double g) { return h >= g ? 1 : 0; }

RatePair fnoma_pair_rates(double h, double g, PowerSplit split, double rho) {
  require_rho(rho);
  return split_rates(h, g, split, rho);
}

double fnoma_sum_rate(double gamma_s, double gamma_w, double b, double rho) {
  require_rho(rho);
  if (gamma_s < gamma_w) throw std::invalid_argument("fnoma_sum_rate: gamma_s < gamma_w");
  if (gamma_w < 0.0) throw std::invalid_argument("fnoma_sum_rate: negative gain");
  const PowerSplit s = PowerSplit::fixed(b);
  return interference_free(gamma_s, s.b, rho) + interference_limited(gamma_w, s, rho);
}

double jain_fairness(double r1, double r2) {
  if (r1 < 0.0 || r2 < 0.0) throw std::invalid_argument("jain_fairness: negative rate");
  const double den = 2.0 * (r1 * r1 + r2 * r2);
  if (den == 0.0) return 1.0;
  return (r1 + r2) * (r1 + r2) / den;
}

double qos_epsilon(double r_th) {
  if (!(r_th >= 0.0) || !std::isfinite(r_th)) throw std::invalid_argument("r_th must be >= 0");
  return std::exp2(r_th) - 1.0;
}

PowerSplit cr_power_split(double h, double g, double rho, double r_th, CrMode mode) {
  require_rho(rho);
  const double eps = qos_epsilon(r_th);
  double b;
  if (channel_order(h, g) == 0) {
    // UE2 strong: interference-free primary needs rho*b*g = eps.
    b = eps / (rho * g);
    if (mode == CrMode::kExact) b = std::min(b, 1.0);
  } else {
    // UE2 weak: a*g/(b*g + 1/rho) = eps.
    b = (rho * g - eps) / (rho * g * (eps + 1.0));
    if (mode == CrMode::kExact) b = std::max(b, 0.0);
  }
  return {1.0 - b, b};
}

RatePair cr_rates(double h, double g, double rho, double r_th, CrMode mode) {
  const PowerSplit split = cr_power_split(h, g, rho, r_th, mode);
  const int delta = channel_order(h, g);
  const bool feasible = delta == 1 ? split.b > 0.0 : split.b < 1.0;

  if (mode == CrMode::kExact) {
    RatePair r = split_rates(h, g, split, rho);
    if (!feasible) r.r1 = 0.0;
    return r;
  }

  const PowerSplit clipped = PowerSplit::from_strong_share(std::clamp(split.b, 0.0, 1.0));
  RatePair r = split_rates(h, g, clipped, rho);
  if (!feasible || split.b < 0.0 || split.b > 1.0) {
    r.r1 = 0.0;
    return r;
  }
  const double eps = qos_epsilon(r_th);
  const double r1 = delta == 1 ? std::log2(rho * h / (eps + 1.0))
                               : std::log2(rho * h * g / (eps * h + g));
  r.r1 = std::max(r1, 0.0);
  return r;
}

RatePair oma_pair_rates(double h_best, double g_best, double rho) {
  require_rho(rho);
  if (h_best < 0.0 || g_best < 0.0) throw std::invalid_argument("oma_pair_rates: negative gain");
  return {0.5 * std::log2(1.0 + rho * h_best), 0.5 * std::log2(1.0 + rho * g_best)};
}

}  // namespace nomasel
