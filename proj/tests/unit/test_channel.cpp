#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nomasel/channel.hpp"

using namespace nomasel;

TEST_CASE("omega from distance") {
  CHECK(omega_from_distance(1.0, 3.0) == 1.0);
  CHECK(omega_from_distance(80.0, 3.0) == doctest::Approx(512000.0).epsilon(1e-15));
  CHECK(omega_from_distance(200.0, 3.0) == doctest::Approx(8.0e6).epsilon(1e-15));
  CHECK_THROWS_AS(omega_from_distance(0.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(omega_from_distance(-5.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(omega_from_distance(10.0, 0.0), std::invalid_argument);
}

TEST_CASE("transmit snr") {
  CHECK(transmit_snr(-110.0, -110.0) == 1.0);
  CHECK(transmit_snr(10.0, -110.0) == doctest::Approx(1.0e12).epsilon(1e-14));
  CHECK(transmit_snr(20.0, -110.0) == doctest::Approx(1.0e13).epsilon(1e-14));
  CHECK_THROWS(transmit_snr(NAN, -110.0));
}

TEST_CASE("fading config validation") {
  FadingConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.omega_h() == doctest::Approx(512000.0));
  CHECK(c.rho() == doctest::Approx(1e14));
  c.n_bs = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.d2 = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.alpha = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("gain matrix shape checks") {
  CHECK_THROWS_AS(GainMatrix(2, 2, std::vector<double>{1, 2, 3}), std::invalid_argument);
  const GainMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(m(1, 0) == 4);
  CHECK(m.row(1)[2] == 6);
}

// Published known-answer vectors for Philox4x32-10.
TEST_CASE("philox known answers") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32(0).block(B{0, 0, 0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32(~0ull).block(B{~0u, ~0u, ~0u, ~0u}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32(0x299f31d0a4093822ull)
            .block(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("philox uniform and below") {
  const Philox4x32 rng(42);
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = rng.uniform(i);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(rng.below(i, 7) < 7);
  }
  CHECK(rng.below(3, 1) == 0);
  CHECK(rng.bits(5) == Philox4x32(42).bits(5));
  CHECK(rng.bits(5) != rng.bits(6));
}

TEST_CASE("derived keys separate streams") {
  CHECK(derive_key(1, 0, Stream::kChannel) != derive_key(1, 1, Stream::kChannel));
  CHECK(derive_key(1, 0, Stream::kChannel) != derive_key(2, 0, Stream::kChannel));
  CHECK(derive_key(1, 0, Stream::kChannel) != derive_key(1, 0, Stream::kRandomSelection));
}

TEST_CASE("sampling is a pure function of seed and trial") {
  FadingConfig c;
  c.n_bs = 3;
  const auto a = sample_channels(c, 7, 11);
  const auto b = sample_channels(c, 7, 11);
  CHECK(a == b);
  CHECK(a.n_bs() == 3);
  CHECK(a.m_ue1() == 2);
  CHECK(a.k_ue2() == 2);
  CHECK_FALSE(a == sample_channels(c, 7, 12));
  CHECK_FALSE(a == sample_channels(c, 8, 11));
  // Order of generation does not matter.
  std::vector<ChannelRealization> fwd, rev;
  for (int t = 0; t < 20; ++t) fwd.push_back(sample_channels(c, 3, t));
  for (int t = 19; t >= 0; --t) rev.push_back(sample_channels(c, 3, t));
  std::reverse(rev.begin(), rev.end());
  CHECK(fwd == rev);
}

TEST_CASE("entries are strictly positive and finite") {
  FadingConfig c;
  c.n_bs = 4;
  for (int t = 0; t < 2000; ++t) {
    const auto ch = sample_channels(c, 5, t);
    for (double v : ch.h.values()) REQUIRE((v > 0.0 && std::isfinite(v)));
    for (double v : ch.g.values()) REQUIRE((v > 0.0 && std::isfinite(v)));
  }
}

TEST_CASE("exponential marginals: mean, KS statistic, independence") {
  FadingConfig c;  // d1 = 80, d2 = 200, alpha = 3
  const int n_mean = 1'000'000;
  double sum_h = 0.0, sum_g = 0.0;
  for (int t = 0; t < n_mean; ++t) {
    const auto ch = sample_channels(c, 99, t);
    sum_h += ch.h(0, 0);
    sum_g += ch.g(1, 1);
  }
  CHECK(sum_h / n_mean * 512000.0 == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sum_g / n_mean * 8.0e6 == doctest::Approx(1.0).epsilon(0.01));

  const int n_ks = 100'000;
  std::vector<double> xs(n_ks);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int t = 0; t < n_ks; ++t) {
    const auto ch = sample_channels(c, 1234, t);
    xs[t] = ch.h(0, 0);
    const double x = ch.h(0, 0), y = ch.h(0, 1);
    sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
  }
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (int i = 0; i < n_ks; ++i) {
    const double f = -std::expm1(-512000.0 * xs[i]);
    d = std::max({d, std::abs(f - double(i) / n_ks), std::abs(f - double(i + 1) / n_ks)});
  }
  CHECK(d < 0.01);

  const double cov = sxy / n_ks - (sx / n_ks) * (sy / n_ks);
  const double var_x = sxx / n_ks - (sx / n_ks) * (sx / n_ks);
  const double var_y = syy / n_ks - (sy / n_ks) * (sy / n_ks);
  CHECK(std::abs(cov / std::sqrt(var_x * var_y)) < 0.01);
}
