#pragma once

#include <cstddef>
#include <vector>

#include "nomasel/channel.hpp"

namespace nomasel {

/// Statistical parameters for the closed-form high-SNR rate expressions.
struct AnalyticConfig {
  std::size_t n_bs = 2;
  std::size_t m_ue1 = 2;
  std::size_t k_ue2 = 2;
  double omega_h = 1.0;  // rate of each h entry (mean 1/omega_h)
  double omega_g = 1.0;
  double rho = 1.0;
  double b = 0.4;        // fixed-allocation strong-user share
  double epsilon = 0.0;  // 2^R_th - 1, CR only

  void validate() const;

  static AnalyticConfig from_fading(const FadingConfig& f, double b, double r_th);
};

struct AnalyticResult {
  double value = 0.0;
  std::size_t terms = 0;  // series summands evaluated
};

/// Largest NM (or NK) handled by the alternating binomial series. The
/// series run in 50-digit arithmetic; beyond this even that loses accuracy.
inline constexpr std::size_t kMaxBinomialOrder = 60;

/// Largest number of multinomial compositions the AIA density expands.
inline constexpr std::size_t kMaxCompositions = 1'000'000;

/// Average A3 sum rate for rho -> inf. Independent of b.
AnalyticResult a3_avg_sum_rate(const AnalyticConfig& cfg);

/// Density of the strong-user gain selected by AIA-AS.
///
/// Sum over i <= M, j <= K and the multinomial compositions of N-1 of the
/// CDF of the best competing row, [1 - sum mu_i mu_j e^{-(i Oh + j Og)x}]^{N-1}.
/// The composition table is built once on construction.
class AiaStrongDensity {
 public:
  /// Throws std::length_error when the composition count exceeds
  /// kMaxCompositions.
  explicit AiaStrongDensity(const AnalyticConfig& cfg);

  /// Throws std::domain_error for x < 0.
  double operator()(double x) const;

  /// High-SNR average of log2(1 + b rho X) + log2(1/b), X with this density.
  AnalyticResult avg_sum_rate() const;

  std::size_t compositions() const { return terms_.size(); }

  /// Number of C(N-1+MK, MK) compositions, without building them.
  static double composition_count(std::size_t n_bs, std::size_t m_ue1, std::size_t k_ue2);

 private:
  struct Term {
    double coef;  // multinomial coefficient times the signed product t
    double xi;    // exponent of the best-competitor CDF term
  };
  AnalyticConfig cfg_;
  std::vector<double> mu_m_;  // (-1)^i C(M,i)
  std::vector<double> mu_k_;
  std::vector<Term> terms_;
};

/// Convenience wrapper; rebuilds the composition table each call.
double aia_strong_pdf(double x, const AnalyticConfig& cfg);

/// Average AIA sum rate for rho -> inf.
AnalyticResult aia_avg_sum_rate(const AnalyticConfig& cfg);

/// Pr(max H >= max G) for i.i.d. exponential entries.
double prob_h_ge_g(const AnalyticConfig& cfg);

/// Average secondary rate of PU-AS (best G entry, then best H on its row).
AnalyticResult pu_avg_secondary_rate(const AnalyticConfig& cfg);

/// Average secondary rate of SU-AS (best H entry, then best G on its row).
AnalyticResult su_avg_secondary_rate(const AnalyticConfig& cfg);

/// Mixture of the PU and SU averages weighted by which matrix holds the
/// overall maximum.
AnalyticResult mcg_avg_secondary_rate(const AnalyticConfig& cfg);

}  // namespace nomasel
