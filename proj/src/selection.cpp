#include "nomasel/selection.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace nomasel {

namespace {

struct ArgMax {
  std::size_t index = 0;
  double value = 0.0;
};

// Lowest index wins ties; n - 1 comparisons.
ArgMax argmax(std::span<const double> v, std::uint64_t& comparisons) {
  ArgMax best{0, v[0]};
  for (std::size_t i = 1; i < v.size(); ++i) {
    ++comparisons;
    if (v[i] > best.value) best = {i, v[i]};
  }
  return best;
}

std::vector<ArgMax> row_maxima(const GainMatrix& m, std::uint64_t& comparisons) {
  std::vector<ArgMax> out;
  out.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(argmax(m.row(r), comparisons));
  return out;
}

struct GlobalMax {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

GlobalMax global_max_from_rows(const std::vector<ArgMax>& rows, std::uint64_t& comparisons) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    ++comparisons;
    if (rows[r].value > rows[best].value) best = r;
  }
  return {best, rows[best].index, rows[best].value};
}

GlobalMax global_max(const GainMatrix& m, std::uint64_t& comparisons) {
  const ArgMax a = argmax(m.values(), comparisons);
  return {a.index / m.cols(), a.index % m.cols(), a.value};
}

void require_shape(const ChannelRealization& ch) {
  if (ch.h.rows() == 0 || ch.h.cols() == 0 || ch.g.cols() == 0 || ch.h.rows() != ch.g.rows()) {
    throw std::invalid_argument("channel matrices must be non-empty with equal row counts");
  }
}

Selection make_selection(const ChannelRealization& ch, std::size_t n, std::size_t m,
                         std::size_t k) {
  Selection s;
  s.n_star = n;
  s.n_star_ue2 = n;
  s.m_star = m;
  s.k_star = k;
  const double h = ch.h(n, m);
  const double g = ch.g(n, k);
  s.delta = channel_order(h, g);
  s.gamma_s = std::max(h, g);
  s.gamma_w = std::min(h, g);
  return s;
}

Selection with_cr_split(Selection s, const ChannelRealization& ch, double rho, double r_th) {
  const PowerSplit raw = cr_power_split(s.h(ch), s.g(ch), rho, r_th, CrMode::kAsymptotic);
  s.split = PowerSplit::from_strong_share(std::clamp(raw.b, 0.0, 1.0));
  return s;
}

}  // namespace

Selection es_fnoma(const ChannelRealization& ch, PowerSplit split, double rho) {
  require_shape(ch);
  const std::size_t n_bs = ch.n_bs(), m_ue1 = ch.m_ue1(), k_ue2 = ch.k_ue2();
  double best = -1.0;
  std::size_t bn = 0, bm = 0, bk = 0;
  std::uint64_t evals = 0;
  for (std::size_t n = 0; n < n_bs; ++n) {
    for (std::size_t m = 0; m < m_ue1; ++m) {
      for (std::size_t k = 0; k < k_ue2; ++k) {
        ++evals;
        const double v = fnoma_pair_rates(ch.h(n, m), ch.g(n, k), split, rho).sum();
        if (v > best) {
          best = v;
          bn = n, bm = m, bk = k;
        }
      }
    }
  }
  Selection s = make_selection(ch, bn, bm, bk);
  s.split = split;
  s.eval_count = evals;
  return s;
}

Selection es_crnoma(const ChannelRealization& ch, double rho, double r_th) {
  require_shape(ch);
  const std::size_t n_bs = ch.n_bs(), m_ue1 = ch.m_ue1(), k_ue2 = ch.k_ue2();
  double best = -1.0;
  std::size_t bn = 0, bm = 0, bk = 0;
  std::uint64_t evals = 0;
  for (std::size_t n = 0; n < n_bs; ++n) {
    for (std::size_t m = 0; m < m_ue1; ++m) {
      for (std::size_t k = 0; k < k_ue2; ++k) {
        ++evals;
        // Infeasible triples score 0 rather than being excluded.
        const double v = cr_rates(ch.h(n, m), ch.g(n, k), rho, r_th, CrMode::kExact).r1;
        if (v > best) {
          best = v;
          bn = n, bm = m, bk = k;
        }
      }
    }
  }
  Selection s = make_selection(ch, bn, bm, bk);
  s.split = cr_power_split(s.h(ch), s.g(ch), rho, r_th, CrMode::kExact);
  s.eval_count = evals;
  return s;
}

Selection a3_as(const ChannelRealization& ch, PowerSplit split, double /*rho*/) {
  require_shape(ch);
  std::uint64_t cmp = 0;
  const auto hmax = row_maxima(ch.h, cmp);
  const auto gmax = row_maxima(ch.g, cmp);
  std::vector<double> strong(ch.n_bs());
  for (std::size_t n = 0; n < strong.size(); ++n) {
    ++cmp;
    strong[n] = hmax[n].value >= gmax[n].value ? hmax[n].value : gmax[n].value;
  }
  const std::size_t n = argmax(strong, cmp).index;
  Selection s = make_selection(ch, n, hmax[n].index, gmax[n].index);
  s.split = split;
  s.eval_count = cmp;
  return s;
}

Selection aia_as(const ChannelRealization& ch, PowerSplit split, double /*rho*/) {
  require_shape(ch);
  std::uint64_t cmp = 0;
  const auto hmax = row_maxima(ch.h, cmp);
  const auto gmax = row_maxima(ch.g, cmp);
  std::vector<double> weak(ch.n_bs());
  for (std::size_t n = 0; n < weak.size(); ++n) {
    ++cmp;
    weak[n] = hmax[n].value >= gmax[n].value ? gmax[n].value : hmax[n].value;
  }
  const std::size_t n = argmax(weak, cmp).index;
  Selection s = make_selection(ch, n, hmax[n].index, gmax[n].index);
  s.split = split;
  s.eval_count = cmp;
  return s;
}

Selection mcg_as(const ChannelRealization& ch, double rho, double r_th) {
  require_shape(ch);
  std::uint64_t cmp = 0;
  // Row maxima are kept so the Stage 3 companion lookup costs nothing.
  const auto hrows = row_maxima(ch.h, cmp);
  const auto grows = row_maxima(ch.g, cmp);
  const GlobalMax hbest = global_max_from_rows(hrows, cmp);
  const GlobalMax gbest = global_max_from_rows(grows, cmp);
  ++cmp;
  Selection s;
  if (hbest.value >= gbest.value) {
    s = make_selection(ch, hbest.row, hbest.col, grows[hbest.row].index);
  } else {
    s = make_selection(ch, gbest.row, hrows[gbest.row].index, gbest.col);
  }
  s = with_cr_split(s, ch, rho, r_th);
  s.eval_count = cmp;
  return s;
}

Selection pu_as(const ChannelRealization& ch, double rho, double r_th) {
  require_shape(ch);
  std::uint64_t cmp = 0;
  const GlobalMax gbest = global_max(ch.g, cmp);
  const ArgMax hrow = argmax(ch.h.row(gbest.row), cmp);
  Selection s = with_cr_split(make_selection(ch, gbest.row, hrow.index, gbest.col), ch, rho, r_th);
  s.eval_count = cmp;
  return s;
}

Selection su_as(const ChannelRealization& ch, double rho, double r_th) {
  require_shape(ch);
  std::uint64_t cmp = 0;
  const GlobalMax hbest = global_max(ch.h, cmp);
  const ArgMax grow = argmax(ch.g.row(hbest.row), cmp);
  Selection s = with_cr_split(make_selection(ch, hbest.row, hbest.col, grow.index), ch, rho, r_th);
  s.eval_count = cmp;
  return s;
}

Selection random_as(const ChannelRealization& ch, std::uint64_t seed) {
  require_shape(ch);
  const Philox4x32 rng(derive_key(seed, 0, Stream::kRandomSelection));
  return make_selection(ch, rng.below(0, ch.n_bs()), rng.below(1, ch.m_ue1()),
                        rng.below(2, ch.k_ue2()));
}

Selection oma_es(const ChannelRealization& ch, double /*rho*/) {
  require_shape(ch);
  std::uint64_t cmp = 0;
  const GlobalMax hbest = global_max(ch.h, cmp);
  const GlobalMax gbest = global_max(ch.g, cmp);
  Selection s;
  s.n_star = hbest.row;
  s.m_star = hbest.col;
  s.n_star_ue2 = gbest.row;
  s.k_star = gbest.col;
  s.delta = channel_order(hbest.value, gbest.value);
  s.gamma_s = std::max(hbest.value, gbest.value);
  s.gamma_w = std::min(hbest.value, gbest.value);
  s.eval_count = cmp;
  return s;
}

}  // namespace nomasel
