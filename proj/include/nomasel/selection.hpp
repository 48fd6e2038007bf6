#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "nomasel/channel.hpp"
#include "nomasel/rates.hpp"

namespace nomasel {

/// Outcome of one antenna-selection policy on one realization.
///
/// Indices are zero-based. Ties anywhere resolve to the lowest row-major
/// index. `eval_count` is the number of pairwise gain comparisons plus
/// candidate-rate evaluations the policy performed.
struct Selection {
  std::size_t n_star = 0;      // BS antenna serving UE1 (and UE2 for NOMA)
  std::size_t m_star = 0;      // UE1 receive antenna
  std::size_t k_star = 0;      // UE2 receive antenna
  std::size_t n_star_ue2 = 0;  // BS antenna serving UE2; differs from n_star only for OMA
  int delta = 1;               // 1 when h[n*,m*] >= g[n*,k*]
  double gamma_s = 0.0;        // strong-user gain
  double gamma_w = 0.0;        // weak-user gain
  std::optional<PowerSplit> split;  // unset for policies without a NOMA split
  std::uint64_t eval_count = 0;

  double h(const ChannelRealization& ch) const { return ch.h(n_star, m_star); }
  double g(const ChannelRealization& ch) const { return ch.g(n_star_ue2, k_star); }
};

// Exhaustive search over all N*M*K triples.
Selection es_fnoma(const ChannelRealization& ch, PowerSplit split, double rho);
Selection es_crnoma(const ChannelRealization& ch, double rho, double r_th);

/// Max-max-max: maximize the strong user's gain, then give the weak user the
/// best antenna on the same BS row.
Selection a3_as(const ChannelRealization& ch, PowerSplit split, double rho);

/// Max-min-max: maximize the weak user's gain over rows of row-maxima.
Selection aia_as(const ChannelRealization& ch, PowerSplit split, double rho);

/// Largest gain across both matrices, then the same-row companion. The split
/// is the high-SNR CR split clipped to [0,1].
Selection mcg_as(const ChannelRealization& ch, double rho, double r_th);

/// Primary-first: global best of G, then best of H on that row.
Selection pu_as(const ChannelRealization& ch, double rho, double r_th);

/// Secondary-first: global best of H, then best of G on that row.
Selection su_as(const ChannelRealization& ch, double rho, double r_th);

/// Independent uniform indices, deterministic in `seed`.
Selection random_as(const ChannelRealization& ch, std::uint64_t seed);

/// OMA baseline: each user independently takes its global best link.
Selection oma_es(const ChannelRealization& ch, double rho);

}  // namespace nomasel
