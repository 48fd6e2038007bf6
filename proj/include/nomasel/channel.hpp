#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nomasel {

/// Physical description of one two-user downlink scenario.
///
/// Gains are squared Rayleigh magnitudes, i.e. exponential with rate
/// Omega = distance^alpha (mean gain distance^-alpha).
struct FadingConfig {
  std::size_t n_bs = 2;   // BS antennas (N)
  std::size_t m_ue1 = 2;  // UE1 antennas (M)
  std::size_t k_ue2 = 2;  // UE2 antennas (K)
  double d1 = 80.0;       // BS-UE1 distance [m]
  double d2 = 200.0;      // BS-UE2 distance [m]
  double alpha = 3.0;     // path-loss exponent
  double ps_dbm = 30.0;   // transmit power [dBm]
  double sigma2_dbm = -110.0;  // noise power [dBm]

  /// Throws std::invalid_argument on zero counts or non-positive geometry.
  void validate() const;

  double omega_h() const;
  double omega_g() const;
  double rho() const;
};

/// Returns d^alpha. Throws std::invalid_argument unless d > 0 and alpha > 0.
double omega_from_distance(double d, double alpha);

/// Linear transmit SNR 10^((ps - sigma2)/10).
double transmit_snr(double ps_dbm, double sigma2_dbm);

/// Dense row-major matrix of nonnegative channel gains.
class GainMatrix {
 public:
  GainMatrix() = default;
  GainMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  GainMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  bool operator==(const GainMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One draw of the BS->UE1 (h, N x M) and BS->UE2 (g, N x K) gains.
struct ChannelRealization {
  GainMatrix h;
  GainMatrix g;

  std::size_t n_bs() const { return h.rows(); }
  std::size_t m_ue1() const { return h.cols(); }
  std::size_t k_ue2() const { return g.cols(); }

  bool operator==(const ChannelRealization&) const = default;
};

/// Counter-based generator: Philox4x32-10 keyed by a 64-bit key.
///
/// block(c) is a pure function of (key, c); there is no hidden state, so any
/// worker can reproduce any position of the stream.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t key)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

  Block block(Block counter) const;

  /// 64 random bits at position `index`.
  std::uint64_t bits(std::uint64_t index) const;

  /// Uniform on (0,1) with 53 random bits; an all-zero draw maps to 2^-53.
  double uniform(std::uint64_t index) const;

  /// Uniform integer in [0, n), n >= 1, by 128-bit multiply-shift.
  std::uint64_t below(std::uint64_t index, std::uint64_t n) const;

 private:
  std::array<std::uint32_t, 2> key_;
};

/// Substream ids, so channel draws and random selections never share bits.
enum class Stream : std::uint32_t { kChannel = 0, kRandomSelection = 1 };

/// Mixes (seed, trial_index, stream) into a 64-bit Philox key.
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t trial_index, Stream stream);

/// Draws one realization. Pure function of (cfg, seed, trial_index).
ChannelRealization sample_channels(const FadingConfig& cfg, std::uint64_t seed,
                                   std::uint64_t trial_index);

}  // namespace nomasel
