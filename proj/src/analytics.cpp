#include "nomasel/analytics.hpp"

#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nomasel/rates.hpp"

namespace nomasel {

namespace {

// Alternating binomial sums cancel by many orders of magnitude (C(NM,i)^2
// reaches 1e16 at NM = 30), so they are accumulated with 50 digits.
using Real = boost::multiprecision::cpp_bin_float_50;

const double kLn2 = std::numbers::ln2;
const double kGamma = std::numbers::egamma;

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// mu_{i,n} = (-1)^i C(n,i) for i = 0..n, exact below kMaxBinomialOrder.
std::vector<Real> signed_binomials(std::size_t n) {
  if (n > kMaxBinomialOrder) {
    throw std::overflow_error("binomial series order " + std::to_string(n) +
                              " exceeds supported maximum " +
                              std::to_string(kMaxBinomialOrder));
  }
  std::vector<Real> mu(n + 1);
  unsigned __int128 c = 1;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i > 0) c = c * (n - i + 1) / i;
    const Real v(static_cast<std::uint64_t>(c));
    mu[i] = (i % 2 == 0) ? v : Real(-v);
  }
  return mu;
}

std::vector<double> signed_binomials_double(std::size_t n) {
  const auto mu = signed_binomials(n);
  std::vector<double> out(mu.size());
  std::transform(mu.begin(), mu.end(), out.begin(),
                 [](const Real& v) { return static_cast<double>(v); });
  return out;
}

// Secondary-rate series shared by PU-AS (I = M, J = NK) and SU-AS
// (I = NM, J = K):
//   sum_{i,j} mu_{i,I} mu_{j,J} [ v/(u-v) ln((v+w)/(u+w)) - ln(u/rho) - C ] / ln 2
// with u = i Oh, v = eps j Og, w = j Og. The first term is rewritten as
// -v/(u-v) log1p((u-v)/(v+w)), whose limit at u = v is -v/(v+w).
AnalyticResult secondary_series(std::size_t upper_i, std::size_t upper_j,
                                const AnalyticConfig& cfg) {
  const auto mu_i = signed_binomials(upper_i);
  const auto mu_j = signed_binomials(upper_j);
  const Real oh(cfg.omega_h), og(cfg.omega_g), eps(cfg.epsilon), rho(cfg.rho), gamma(kGamma);
  Real acc = 0;
  for (std::size_t i = 1; i <= upper_i; ++i) {
    const Real u = Real(i) * oh;
    const Real base = -log(u / rho) - gamma;
    for (std::size_t j = 1; j <= upper_j; ++j) {
      const Real w = Real(j) * og;
      const Real v = eps * w;
      Real crossing = 0;
      if (v != 0) {
        const Real d = u - v;
        crossing = (d == 0) ? Real(-v / (v + w))
                            : Real(-v / d * boost::math::log1p(Real(d / (v + w))));
      }
      acc += mu_i[i] * mu_j[j] * (crossing + base);
    }
  }
  return {static_cast<double>(acc) / kLn2, upper_i * upper_j};
}

double chi(double x, double b_rho) { return kGamma + std::log(x / b_rho); }

}  // namespace

void AnalyticConfig::validate() const {
  if (n_bs == 0 || m_ue1 == 0 || k_ue2 == 0) throw std::invalid_argument("counts must be >= 1");
  if (!(omega_h > 0.0) || !(omega_g > 0.0)) throw std::invalid_argument("omegas must be > 0");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be > 0");
  if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("b must lie in (0,1)");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
}

AnalyticConfig AnalyticConfig::from_fading(const FadingConfig& f, double b, double r_th) {
  f.validate();
  AnalyticConfig c;
  c.n_bs = f.n_bs;
  c.m_ue1 = f.m_ue1;
  c.k_ue2 = f.k_ue2;
  c.omega_h = f.omega_h();
  c.omega_g = f.omega_g();
  c.rho = f.rho();
  c.b = b;
  c.epsilon = qos_epsilon(r_th);
  return c;
}

AnalyticResult a3_avg_sum_rate(const AnalyticConfig& cfg) {
  cfg.validate();
  const std::size_t nm = cfg.n_bs * cfg.m_ue1;
  const std::size_t nk = cfg.n_bs * cfg.k_ue2;
  const auto mu_i = signed_binomials(nm);
  const auto mu_j = signed_binomials(nk);
  const Real oh(cfg.omega_h), og(cfg.omega_g);
  Real acc = 0;
  for (std::size_t i = 1; i <= nm; ++i) {
    const Real a = Real(i) * oh;
    for (std::size_t j = 1; j <= nk; ++j) {
      const Real c = Real(j) * og;
      acc += mu_i[i] * mu_j[j] * log((a + c) / (a * c));
    }
  }
  const double value = (std::log(cfg.rho) - kGamma + static_cast<double>(acc)) / kLn2;
  return {value, nm * nk};
}

double AiaStrongDensity::composition_count(std::size_t n_bs, std::size_t m_ue1,
                                           std::size_t k_ue2) {
  // C(N-1+MK, MK)
  const double n = static_cast<double>(n_bs - 1 + m_ue1 * k_ue2);
  const double k = static_cast<double>(m_ue1 * k_ue2);
  return std::round(std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)));
}

AiaStrongDensity::AiaStrongDensity(const AnalyticConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const std::size_t cells = cfg.m_ue1 * cfg.k_ue2;
  const double count = composition_count(cfg.n_bs, cfg.m_ue1, cfg.k_ue2);
  if (count > static_cast<double>(kMaxCompositions)) {
    throw std::length_error("AIA density needs " + std::to_string(count) +
                            " compositions, above the cap of " +
                            std::to_string(kMaxCompositions));
  }
  mu_m_ = signed_binomials_double(cfg.m_ue1);
  mu_k_ = signed_binomials_double(cfg.k_ue2);
  const auto& mu_m = mu_m_;
  const auto& mu_k = mu_k_;

  // Per cell (i,j): base -mu_i mu_j and exponent i Oh + j Og.
  std::vector<double> base(cells), rate(cells);
  for (std::size_t i = 1; i <= cfg.m_ue1; ++i) {
    for (std::size_t j = 1; j <= cfg.k_ue2; ++j) {
      const std::size_t c = (i - 1) * cfg.k_ue2 + (j - 1);
      base[c] = -mu_m[i] * mu_k[j];
      rate[c] = static_cast<double>(i) * cfg.omega_h + static_cast<double>(j) * cfg.omega_g;
    }
  }

  const std::size_t total = cfg.n_bs - 1;
  std::vector<double> log_fact(total + 1, 0.0);
  for (std::size_t i = 1; i <= total; ++i) log_fact[i] = log_fact[i - 1] + std::log(double(i));

  terms_.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> parts(cells, 0);
  // Depth-first walk over (l_11, ..., l_MK) with l_0 = total - sum.
  auto recurse = [&](auto&& self, std::size_t cell, std::size_t remaining) -> void {
    if (cell == cells) {
      double log_c = log_fact[total] - log_fact[remaining];
      double t = 1.0;
      double xi = 0.0;
      for (std::size_t c = 0; c < cells; ++c) {
        log_c -= log_fact[parts[c]];
        t *= std::pow(base[c], static_cast<double>(parts[c]));
        xi += rate[c] * static_cast<double>(parts[c]);
      }
      terms_.push_back({std::round(std::exp(log_c)) * t, xi});
      return;
    }
    for (std::size_t l = 0; l <= remaining; ++l) {
      parts[cell] = l;
      self(self, cell + 1, remaining - l);
    }
    parts[cell] = 0;
  };
  recurse(recurse, 0, total);
}

double AiaStrongDensity::operator()(double x) const {
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("density argument must be >= 0");
  const auto& mu_m = mu_m_;
  const auto& mu_k = mu_k_;
  const double n = static_cast<double>(cfg_.n_bs);
  CompensatedSum acc;
  for (std::size_t i = 1; i <= cfg_.m_ue1; ++i) {
    const double ti = static_cast<double>(i) * cfg_.omega_h;
    const double ei = std::exp(-ti * x);
    for (std::size_t j = 1; j <= cfg_.k_ue2; ++j) {
      const double tj = static_cast<double>(j) * cfg_.omega_g;
      const double ej = std::exp(-tj * x);
      const double zeta = n * ti * tj * mu_m[i] * mu_k[j];
      for (const Term& term : terms_) {
        // e^{-a x} (1 - e^{-(c + xi) x}) / (c + xi) for both user orders.
        const double pj = tj + term.xi;
        const double pi = ti + term.xi;
        const double v = ei * -std::expm1(-pj * x) / pj + ej * -std::expm1(-pi * x) / pi;
        acc.add(term.coef * zeta * v);
      }
    }
  }
  return acc.value();
}

AnalyticResult AiaStrongDensity::avg_sum_rate() const {
  const auto& mu_m = mu_m_;
  const auto& mu_k = mu_k_;
  const double n = static_cast<double>(cfg_.n_bs);
  const double b_rho = cfg_.b * cfg_.rho;
  CompensatedSum acc;
  std::size_t count = 0;
  for (std::size_t i = 1; i <= cfg_.m_ue1; ++i) {
    const double ti = static_cast<double>(i) * cfg_.omega_h;
    for (std::size_t j = 1; j <= cfg_.k_ue2; ++j) {
      const double tj = static_cast<double>(j) * cfg_.omega_g;
      const double zeta_t = n * mu_m[i] * mu_k[j];
      const double zeta = zeta_t * ti * tj;
      const double chi_i = chi(ti, b_rho);
      const double chi_j = chi(tj, b_rho);
      for (const Term& term : terms_) {
        const double xi = term.xi;
        const double phi_i = ti + xi;
        const double phi_j = tj + xi;
        const double phi_1 = ti + tj + xi;
        const double phi_2 = ti + tj + 2.0 * xi;
        const double t1 = xi * zeta_t / phi_i * chi_j;
        const double t2 = xi * zeta_t / phi_j * chi_i;
        const double t3 = zeta * phi_2 * chi(phi_1, b_rho) / (phi_i * phi_j * phi_1);
        acc.add(term.coef * (t1 + t2 + t3));
        ++count;
      }
      // The remaining term does not depend on the composition, so it carries
      // the factor sum_l C_l t_l = F(0)^{N-1}, which is 1 for N = 1 and 0
      // otherwise.
      if (cfg_.n_bs == 1) acc.add(-zeta_t * (chi_i + chi_j));
    }
  }
  return {std::log2(1.0 / cfg_.b) + acc.value() / kLn2, count};
}

double aia_strong_pdf(double x, const AnalyticConfig& cfg) { return AiaStrongDensity(cfg)(x); }

AnalyticResult aia_avg_sum_rate(const AnalyticConfig& cfg) {
  return AiaStrongDensity(cfg).avg_sum_rate();
}

double prob_h_ge_g(const AnalyticConfig& cfg) {
  cfg.validate();
  const std::size_t nm = cfg.n_bs * cfg.m_ue1;
  const std::size_t nk = cfg.n_bs * cfg.k_ue2;
  const auto mu_i = signed_binomials(nm);
  const auto mu_j = signed_binomials(nk);
  const Real oh(cfg.omega_h), og(cfg.omega_g);
  // sum mu mu j Og/(i Oh + j Og) = 1/2 + 1/2 sum mu mu (j Og - i Oh)/(i Oh + j Og),
  // using sum mu mu = 1; the antisymmetric form is exactly 1/2 for
  // exchangeable maxima.
  Real acc = 0;
  for (std::size_t i = 1; i <= nm; ++i) {
    const Real a = Real(i) * oh;
    for (std::size_t j = 1; j <= nk; ++j) {
      const Real c = Real(j) * og;
      acc += mu_i[i] * mu_j[j] * (c - a) / (a + c);
    }
  }
  const double p = static_cast<double>(Real(0.5) + acc / 2);
  return std::clamp(p, 0.0, 1.0);
}

AnalyticResult pu_avg_secondary_rate(const AnalyticConfig& cfg) {
  cfg.validate();
  return secondary_series(cfg.m_ue1, cfg.n_bs * cfg.k_ue2, cfg);
}

AnalyticResult su_avg_secondary_rate(const AnalyticConfig& cfg) {
  cfg.validate();
  return secondary_series(cfg.n_bs * cfg.m_ue1, cfg.k_ue2, cfg);
}

AnalyticResult mcg_avg_secondary_rate(const AnalyticConfig& cfg) {
  const double p_su = prob_h_ge_g(cfg);
  const AnalyticResult pu = pu_avg_secondary_rate(cfg);
  const AnalyticResult su = su_avg_secondary_rate(cfg);
  return {(1.0 - p_su) * pu.value + p_su * su.value, pu.terms + su.terms};
}

}  // namespace nomasel
