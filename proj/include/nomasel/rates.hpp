#pragma once

namespace nomasel {

/// Power coefficients of the superposed signal. `b` is the share of the
/// instantaneous strong user, `a = 1 - b` that of the weak user.
struct PowerSplit {
  double a = 0.6;
  double b = 0.4;

  /// Throws std::invalid_argument unless 0 <= b <= 1.
  static PowerSplit from_strong_share(double b);

  /// Fixed-allocation mode additionally requires the weak user to get at
  /// least half the power (0 < b <= 1/2).
  static PowerSplit fixed(double b);
};

struct RatePair {
  double r1 = 0.0;  // UE1 [bit/s/Hz]
  double r2 = 0.0;  // UE2 [bit/s/Hz]

  double sum() const { return r1 + r2; }
};

enum class CrMode { kExact, kAsymptotic };

/// 1 when UE1 is the strong user (h >= g), 0 otherwise.
int channel_order(double h, double g);

/// Achievable rates with SIC at the strong user under a fixed split.
RatePair fnoma_pair_rates(double h, double g, PowerSplit split, double rho);

/// Sum rate from ordered gains. Throws std::invalid_argument if
/// gamma_s < gamma_w or b is outside (0, 1/2].
double fnoma_sum_rate(double gamma_s, double gamma_w, double b, double rho);

/// Jain's index for two users; (0, 0) is treated as perfectly fair.
double jain_fairness(double r1, double r2);

/// QoS threshold R_th expressed as an SINR target 2^R_th - 1.
double qos_epsilon(double r_th);

/// Channel-dependent split that holds UE2 (primary) exactly at R_th.
///
/// Exact mode clips b into [0,1]; asymptotic mode returns the unclipped
/// high-SNR value, which lies outside [0,1] when the target is infeasible.
PowerSplit cr_power_split(double h, double g, double rho, double r_th, CrMode mode);

/// r1 = secondary (UE1) rate, r2 = primary (UE2) rate under the CR split.
/// r1 is 0 whenever the primary target cannot be met.
RatePair cr_rates(double h, double g, double rho, double r_th, CrMode mode);

/// Equal-time TDMA baseline, each user at full power on its best antenna.
RatePair oma_pair_rates(double h_best, double g_best, double rho);

}  // namespace nomasel
