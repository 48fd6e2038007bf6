#include "nomasel/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nomasel {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void fill_exponential(const Philox4x32& rng, std::uint64_t first_index, double omega,
                      std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = -std::log(rng.uniform(first_index + i)) / omega;
  }
}

}  // namespace

void FadingConfig::validate() const {
  if (n_bs == 0 || m_ue1 == 0 || k_ue2 == 0) {
    throw std::invalid_argument("antenna counts must be >= 1");
  }
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw std::invalid_argument("distances must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("path-loss exponent must be > 0");
  if (!std::isfinite(ps_dbm) || !std::isfinite(sigma2_dbm)) {
    throw std::invalid_argument("power levels must be finite");
  }
}

double FadingConfig::omega_h() const { return omega_from_distance(d1, alpha); }
double FadingConfig::omega_g() const { return omega_from_distance(d2, alpha); }
double FadingConfig::rho() const { return transmit_snr(ps_dbm, sigma2_dbm); }

double omega_from_distance(double d, double alpha) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw std::invalid_argument("distance must be positive, got " + std::to_string(d));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("path-loss exponent must be positive, got " +
                                std::to_string(alpha));
  }
  return std::pow(d, alpha);
}

double transmit_snr(double ps_dbm, double sigma2_dbm) {
  if (!std::isfinite(ps_dbm) || !std::isfinite(sigma2_dbm)) {
    throw std::invalid_argument("transmit_snr: non-finite input");
  }
  return std::pow(10.0, (ps_dbm - sigma2_dbm) / 10.0);
}

GainMatrix::GainMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("GainMatrix: data size does not match shape");
  }
}

Philox4x32::Block Philox4x32::block(Block ctr) const {
  std::uint32_t k0 = key_[0];
  std::uint32_t k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return ctr;
}

std::uint64_t Philox4x32::bits(std::uint64_t index) const {
  // Each block yields two 64-bit words; index selects block and half.
  const std::uint64_t blk = index >> 1;
  const Block out = block({static_cast<std::uint32_t>(blk),
                           static_cast<std::uint32_t>(blk >> 32), 0u, 0u});
  const std::size_t half = static_cast<std::size_t>(index & 1u) * 2;
  return (static_cast<std::uint64_t>(out[half + 1]) << 32) | out[half];
}

double Philox4x32::uniform(std::uint64_t index) const {
  constexpr double kUnit = 0x1.0p-53;
  const std::uint64_t m = bits(index) >> 11;
  return m == 0 ? kUnit : static_cast<double>(m) * kUnit;
}

std::uint64_t Philox4x32::below(std::uint64_t index, std::uint64_t n) const {
  const unsigned __int128 p = static_cast<unsigned __int128>(bits(index)) * n;
  return static_cast<std::uint64_t>(p >> 64);
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t trial_index, Stream stream) {
  std::uint64_t z = mix64(seed);
  z = mix64(z ^ trial_index);
  return mix64(z ^ (static_cast<std::uint64_t>(stream) << 56 | 0x5A17ull));
}

ChannelRealization sample_channels(const FadingConfig& cfg, std::uint64_t seed,
                                   std::uint64_t trial_index) {
  cfg.validate();
  const Philox4x32 rng(derive_key(seed, trial_index, Stream::kChannel));
  ChannelRealization ch{GainMatrix(cfg.n_bs, cfg.m_ue1), GainMatrix(cfg.n_bs, cfg.k_ue2)};
  // h occupies stream positions [0, NM), g follows.
  fill_exponential(rng, 0, cfg.omega_h(), ch.h.values());
  fill_exponential(rng, ch.h.size(), cfg.omega_g(), ch.g.values());
  return ch;
}

}  // namespace nomasel
