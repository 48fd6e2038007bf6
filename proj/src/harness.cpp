#include "nomasel/harness.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "nomasel/analytics.hpp"

namespace nomasel {

namespace {

template <class E, std::size_t N>
struct NameTable {
  std::array<std::pair<E, std::string_view>, N> entries;

  std::string_view name(E e) const {
    for (const auto& [v, s] : entries) {
      if (v == e) return s;
    }
    return "?";
  }
  E parse(std::string_view s, std::string_view what) const {
    for (const auto& [v, n] : entries) {
      if (n == s) return v;
    }
    throw ConfigError(fmt::format("unknown {} '{}'", what, s));
  }
};

constexpr NameTable<Mode, 3> kModes{{{
    {Mode::kFnoma, "fnoma"},
    {Mode::kCrnoma, "crnoma"},
    {Mode::kOma, "oma"},
}}};

constexpr NameTable<Policy, 8> kPolicies{{{
    {Policy::kEs, "es"},
    {Policy::kA3, "a3"},
    {Policy::kAia, "aia"},
    {Policy::kMcg, "mcg"},
    {Policy::kPu, "pu"},
    {Policy::kSu, "su"},
    {Policy::kRandom, "random"},
    {Policy::kOmaEs, "oma_es"},
}}};

constexpr NameTable<Axis, 6> kAxes{{{
    {Axis::kPsDbm, "ps_dbm"},
    {Axis::kNBs, "n_bs"},
    {Axis::kD1, "d1"},
    {Axis::kD2, "d2"},
    {Axis::kB, "b"},
    {Axis::kRth, "r_th"},
}}};

bool compatible(Mode m, Policy p) {
  switch (m) {
    case Mode::kFnoma:
      return p == Policy::kEs || p == Policy::kA3 || p == Policy::kAia || p == Policy::kRandom;
    case Mode::kCrnoma:
      return p == Policy::kEs || p == Policy::kMcg || p == Policy::kPu || p == Policy::kSu ||
             p == Policy::kRandom;
    case Mode::kOma:
      return p == Policy::kOmaEs;
  }
  return false;
}

// Scenario with the per-scenario constants hoisted out of the trial loop.
struct Prepared {
  const Scenario& scn;
  double rho;
  PowerSplit split;

  explicit Prepared(const Scenario& s)
      : scn(s),
        rho(s.fading.rho()),
        split(s.mode == Mode::kFnoma ? PowerSplit::fixed(s.b) : PowerSplit{}) {}

  TrialOutcome run(std::uint64_t t) const {
    const ChannelRealization ch = sample_channels(scn.fading, scn.seed, t);
    TrialOutcome out;
    out.selection = select(ch, t);
    const double h = out.selection.h(ch);
    const double g = out.selection.g(ch);
    switch (scn.mode) {
      case Mode::kFnoma: out.rates = fnoma_pair_rates(h, g, split, rho); break;
      case Mode::kCrnoma: out.rates = cr_rates(h, g, rho, scn.r_th, CrMode::kExact); break;
      case Mode::kOma: out.rates = oma_pair_rates(h, g, rho); break;
    }
    out.fairness = jain_fairness(out.rates.r1, out.rates.r2);
    return out;
  }

  Selection select(const ChannelRealization& ch, std::uint64_t t) const {
    const bool cr = scn.mode == Mode::kCrnoma;
    switch (scn.policy) {
      case Policy::kEs: return cr ? es_crnoma(ch, rho, scn.r_th) : es_fnoma(ch, split, rho);
      case Policy::kA3: return a3_as(ch, split, rho);
      case Policy::kAia: return aia_as(ch, split, rho);
      case Policy::kMcg: return mcg_as(ch, rho, scn.r_th);
      case Policy::kPu: return pu_as(ch, rho, scn.r_th);
      case Policy::kSu: return su_as(ch, rho, scn.r_th);
      case Policy::kRandom:
        return random_as(ch, derive_key(scn.seed, t, Stream::kRandomSelection));
      case Policy::kOmaEs: return oma_es(ch, rho);
    }
    throw ConfigError("unhandled policy");
  }
};

double metric_of(const RatePair& r, double fairness, Metric m) {
  switch (m) {
    case Metric::kR1: return r.r1;
    case Metric::kR2: return r.r2;
    case Metric::kSum: return r.sum();
    case Metric::kFairness: return fairness;
  }
  return 0.0;
}

constexpr std::uint64_t kBlockTrials = 1024;

template <std::size_t K>
using MomentSet = std::array<Moments, K>;

template <std::size_t K>
MomentSet<K> tree_merge(const std::vector<MomentSet<K>>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  const MomentSet<K> a = tree_merge(blocks, lo, mid);
  const MomentSet<K> b = tree_merge(blocks, mid, hi);
  MomentSet<K> out;
  for (std::size_t k = 0; k < K; ++k) out[k] = Moments::merge(a[k], b[k]);
  return out;
}

// Runs fn(t) for t in [0, trials). Block boundaries and the merge tree depend
// only on `trials`, never on which worker handled a block.
template <std::size_t K, class F>
MomentSet<K> reduce_trials(std::uint64_t trials, unsigned workers, const F& fn) {
  const std::uint64_t n_blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<MomentSet<K>> blocks(n_blocks);
  auto do_block = [&](std::uint64_t bi) {
    MomentSet<K>& acc = blocks[bi];
    const std::uint64_t end = std::min(trials, (bi + 1) * kBlockTrials);
    for (std::uint64_t t = bi * kBlockTrials; t < end; ++t) {
      const std::array<double, K> v = fn(t);
      for (std::size_t k = 0; k < K; ++k) acc[k].add(v[k]);
    }
  };

  const auto n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(workers, 1u), n_blocks));
  if (n_threads <= 1) {
    for (std::uint64_t bi = 0; bi < n_blocks; ++bi) do_block(bi);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
      try {
        for (std::uint64_t bi = next++; bi < n_blocks; bi = next++) do_block(bi);
      } catch (...) {
        const std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = n_blocks;
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  return tree_merge(blocks, 0, blocks.size());
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
  }
  return out;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: expected a nonnegative integer, got '{}'", key, v));
  }
  return out;
}

// Applies one `key = value` line; returns false for keys it does not own.
bool apply_key(Scenario& s, std::string_view key, std::string_view v) {
  if (key == "n_bs") s.fading.n_bs = parse_uint(key, v);
  else if (key == "m_ue1") s.fading.m_ue1 = parse_uint(key, v);
  else if (key == "k_ue2") s.fading.k_ue2 = parse_uint(key, v);
  else if (key == "d1") s.fading.d1 = parse_double(key, v);
  else if (key == "d2") s.fading.d2 = parse_double(key, v);
  else if (key == "alpha") s.fading.alpha = parse_double(key, v);
  else if (key == "ps_dbm") s.fading.ps_dbm = parse_double(key, v);
  else if (key == "sigma2_dbm") s.fading.sigma2_dbm = parse_double(key, v);
  else if (key == "mode") s.mode = parse_mode(v);
  else if (key == "policy") s.policy = parse_policy(v);
  else if (key == "b") s.b = parse_double(key, v);
  else if (key == "r_th") s.r_th = parse_double(key, v);
  else if (key == "trials") s.trials = parse_uint(key, v);
  else if (key == "seed") s.seed = parse_uint(key, v);
  else return false;
  return true;
}

struct KeyValue {
  std::size_t line;
  std::string_view key;
  std::string_view value;
};

// Splits into blocks of key/value pairs at `---` lines.
std::vector<std::vector<KeyValue>> tokenize(std::string_view text) {
  std::vector<std::vector<KeyValue>> blocks(1);
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "---") {
      blocks.emplace_back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    blocks.back().push_back({line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  std::erase_if(blocks, [](const auto& b) { return b.empty(); });
  return blocks;
}

Scenario scenario_from(const std::vector<KeyValue>& kvs, double* tolerance) {
  Scenario s;
  for (const auto& kv : kvs) {
    if (apply_key(s, kv.key, kv.value)) continue;
    if (tolerance != nullptr && kv.key == "tolerance") {
      *tolerance = parse_double(kv.key, kv.value);
      continue;
    }
    throw ConfigError(fmt::format("line {}: unknown key '{}'", kv.line, kv.key));
  }
  s.validate();
  return s;
}

// One plotted curve of a figure.
struct Curve {
  std::string name;
  Mode mode;
  Policy policy;
  bool analytic = false;
  double d1 = 0.0;  // placement override, 0 keeps the base
  double d2 = 0.0;
};

struct FigureSpec {
  Scenario base;
  Axis axis;
  std::vector<double> values;
  Metric metric;
  std::vector<Curve> curves;
};

std::vector<double> linspace(double lo, double hi, double step) {
  std::vector<double> v;
  const auto n = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) v.push_back(lo + step * i);
  return v;
}

std::vector<Curve> fnoma_curves(bool analytic) {
  std::vector<Curve> c{{"fnoma_es", Mode::kFnoma, Policy::kEs},
                       {"a3_sim", Mode::kFnoma, Policy::kA3}};
  if (analytic) c.push_back({"a3_analytic", Mode::kFnoma, Policy::kA3, true});
  c.push_back({"aia_sim", Mode::kFnoma, Policy::kAia});
  if (analytic) c.push_back({"aia_analytic", Mode::kFnoma, Policy::kAia, true});
  c.push_back({"fnoma_ra", Mode::kFnoma, Policy::kRandom});
  c.push_back({"oma_es", Mode::kOma, Policy::kOmaEs});
  return c;
}

// CR curves for one placement; `suffix` tags columns when a figure shows two.
void append_cr_curves(std::vector<Curve>& out, const std::string& suffix, double d1, double d2) {
  const std::pair<std::string, Policy> sims[] = {
      {"cr_es", Policy::kEs}, {"mcg", Policy::kMcg}, {"pu", Policy::kPu}, {"su", Policy::kSu}};
  for (const auto& [name, pol] : sims) {
    const bool heuristic = pol != Policy::kEs;
    out.push_back({name + (heuristic ? "_sim" : "") + suffix, Mode::kCrnoma, pol, false, d1, d2});
    if (heuristic) {
      out.push_back({name + "_analytic" + suffix, Mode::kCrnoma, pol, true, d1, d2});
    }
  }
  out.push_back({"cr_ra" + suffix, Mode::kCrnoma, Policy::kRandom, false, d1, d2});
}

std::vector<Curve> cr_two_placements() {
  std::vector<Curve> c;
  append_cr_curves(c, "_ue1_near", 80.0, 200.0);
  append_cr_curves(c, "_ue2_near", 200.0, 80.0);
  return c;
}

FigureSpec figure_spec(int id) {
  FigureSpec f;
  f.base.fading.m_ue1 = 2;
  f.base.fading.k_ue2 = 2;
  f.base.fading.d1 = 80.0;
  f.base.fading.d2 = 200.0;
  f.base.b = 0.4;
  f.base.r_th = 5.0;
  switch (id) {
    case 1:
      f.base.fading.n_bs = 2;
      f.axis = Axis::kPsDbm;
      f.values = linspace(0.0, 40.0, 5.0);
      f.metric = Metric::kSum;
      f.curves = fnoma_curves(true);
      break;
    case 2:
      f.base.fading.ps_dbm = 10.0;
      f.axis = Axis::kNBs;
      f.values = linspace(1.0, 8.0, 1.0);
      f.metric = Metric::kSum;
      f.curves = fnoma_curves(true);
      break;
    case 3:
      f.base.fading.n_bs = 2;
      f.base.fading.ps_dbm = 10.0;
      f.axis = Axis::kD2;
      f.values = linspace(100.0, 400.0, 50.0);
      f.metric = Metric::kSum;
      f.curves = fnoma_curves(true);
      break;
    case 4:
      f.base.fading.n_bs = 2;
      f.base.fading.ps_dbm = 10.0;
      f.axis = Axis::kB;
      f.values = linspace(0.1, 0.5, 0.05);
      f.metric = Metric::kSum;
      f.curves = fnoma_curves(true);
      break;
    case 5:
      f.base.fading.n_bs = 4;
      f.base.fading.ps_dbm = 20.0;
      f.axis = Axis::kB;
      f.values = linspace(0.1, 0.5, 0.05);
      f.metric = Metric::kFairness;
      f.curves = fnoma_curves(false);
      break;
    case 6:
      f.base.fading.n_bs = 4;
      f.base.fading.ps_dbm = 20.0;
      f.axis = Axis::kD1;
      f.values = {50, 80, 100, 125, 150, 175, 200, 225, 250, 275, 300, 350, 400};
      f.metric = Metric::kR1;
      append_cr_curves(f.curves, "", 0.0, 0.0);
      break;
    case 7:
      f.base.fading.n_bs = 4;
      f.axis = Axis::kPsDbm;
      f.values = linspace(0.0, 40.0, 5.0);
      f.metric = Metric::kR1;
      f.curves = cr_two_placements();
      break;
    case 8:
      f.base.fading.ps_dbm = 20.0;
      f.axis = Axis::kNBs;
      f.values = linspace(1.0, 8.0, 1.0);
      f.metric = Metric::kR1;
      f.curves = cr_two_placements();
      break;
    case 9:
      f.base.fading.n_bs = 4;
      f.base.fading.ps_dbm = 20.0;
      f.axis = Axis::kRth;
      f.values = linspace(1.0, 10.0, 1.0);
      f.metric = Metric::kR1;
      f.curves = cr_two_placements();
      break;
    default:
      throw ConfigError(fmt::format("figure id must be 1-9, got {}", id));
  }
  return f;
}

}  // namespace

std::string_view to_string(Mode m) { return kModes.name(m); }
std::string_view to_string(Policy p) { return kPolicies.name(p); }
std::string_view to_string(Axis a) { return kAxes.name(a); }
Mode parse_mode(std::string_view s) { return kModes.parse(s, "mode"); }
Policy parse_policy(std::string_view s) { return kPolicies.parse(s, "policy"); }
Axis parse_axis(std::string_view s) { return kAxes.parse(s, "axis"); }

void Scenario::validate() const {
  try {
    fading.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!compatible(mode, policy)) {
    throw ConfigError(fmt::format("policy '{}' is not available in mode '{}'", to_string(policy),
                                  to_string(mode)));
  }
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (mode == Mode::kFnoma && !(b > 0.0 && b <= 0.5)) {
    throw ConfigError(fmt::format("b must lie in (0, 0.5], got {}", b));
  }
  if (mode == Mode::kCrnoma && !(r_th >= 0.0 && std::isfinite(r_th))) {
    throw ConfigError(fmt::format("r_th must be finite and nonnegative, got {}", r_th));
  }
}

void Moments::add(double x) {
  ++count;
  const double d = x - mean;
  mean += d / static_cast<double>(count);
  m2 += d * (x - mean);
}

Moments Moments::merge(const Moments& a, const Moments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Moments out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = static_cast<double>(out.count);
  const double d = b.mean - a.mean;
  out.mean = a.mean + d * (nb / n);
  out.m2 = a.m2 + b.m2 + d * d * (na * nb / n);
  return out;
}

double Moments::variance() const {
  return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
}

double Moments::std_err() const {
  return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

double RateReport::mean(Metric m) const {
  switch (m) {
    case Metric::kR1: return mean_r1;
    case Metric::kR2: return mean_r2;
    case Metric::kSum: return mean_sum;
    case Metric::kFairness: return mean_fairness;
  }
  return 0.0;
}

double RateReport::std_err(Metric m) const {
  switch (m) {
    case Metric::kR1: return se_r1;
    case Metric::kR2: return se_r2;
    case Metric::kSum: return se_sum;
    case Metric::kFairness: return se_fairness;
  }
  return 0.0;
}

TrialOutcome evaluate_trial(const Scenario& scn, std::uint64_t trial_index) {
  scn.validate();
  return Prepared(scn).run(trial_index);
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NOMA_SIM_WORKERS"); env != nullptr && *env != '\0') {
    const std::uint64_t v = parse_uint("NOMA_SIM_WORKERS", trim(env));
    if (v == 0 || v > 4096) throw ConfigError("NOMA_SIM_WORKERS must be in [1, 4096]");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RateReport run_trials(const Scenario& scn, unsigned workers) {
  scn.validate();
  const Prepared prep(scn);
  const auto m = reduce_trials<5>(scn.trials, resolve_workers(workers), [&](std::uint64_t t) {
    const TrialOutcome o = prep.run(t);
    return std::array<double, 5>{o.rates.r1, o.rates.r2, o.rates.sum(), o.fairness,
                                 static_cast<double>(o.selection.eval_count)};
  });
  RateReport r;
  r.mean_r1 = m[0].mean;
  r.mean_r2 = m[1].mean;
  r.mean_sum = m[2].mean;
  r.mean_fairness = m[3].mean;
  r.se_r1 = m[0].std_err();
  r.se_r2 = m[1].std_err();
  r.se_sum = m[2].std_err();
  r.se_fairness = m[3].std_err();
  r.trials_used = m[0].count;
  r.mean_eval_count = m[4].mean;
  return r;
}

PairedDifference paired_difference(const Scenario& a, const Scenario& b, Metric metric,
                                   unsigned workers) {
  a.validate();
  b.validate();
  if (a.seed != b.seed || a.trials != b.trials) {
    throw ConfigError("paired scenarios must share seed and trials");
  }
  const Prepared pa(a);
  const Prepared pb(b);
  const auto m = reduce_trials<1>(a.trials, resolve_workers(workers), [&](std::uint64_t t) {
    const TrialOutcome oa = pa.run(t);
    const TrialOutcome ob = pb.run(t);
    return std::array<double, 1>{metric_of(oa.rates, oa.fairness, metric) -
                                 metric_of(ob.rates, ob.fairness, metric)};
  });
  return {m[0].mean, m[0].std_err()};
}

Scenario with_axis(Scenario base, Axis axis, double value) {
  switch (axis) {
    case Axis::kPsDbm: base.fading.ps_dbm = value; break;
    case Axis::kNBs:
      if (!(value >= 1.0) || value != std::floor(value) || value > 1e6) {
        throw ConfigError(fmt::format("n_bs must be a positive integer, got {}", value));
      }
      base.fading.n_bs = static_cast<std::size_t>(value);
      break;
    case Axis::kD1: base.fading.d1 = value; break;
    case Axis::kD2: base.fading.d2 = value; break;
    case Axis::kB: base.b = value; break;
    case Axis::kRth: base.r_th = value; break;
  }
  return base;
}

std::vector<RateReport> sweep(const Scenario& base, Axis axis, std::span<const double> values,
                              unsigned workers) {
  std::vector<Scenario> points;
  points.reserve(values.size());
  for (double v : values) {
    points.push_back(with_axis(base, axis, v));
    points.back().validate();
  }
  std::vector<RateReport> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(run_trials(p, workers));
  return out;
}

Metric predicted_metric(Mode mode) { return mode == Mode::kCrnoma ? Metric::kR1 : Metric::kSum; }

std::optional<double> analytic_prediction(const Scenario& scn) {
  scn.validate();
  const AnalyticConfig cfg = AnalyticConfig::from_fading(scn.fading, scn.b, scn.r_th);
  if (scn.mode == Mode::kFnoma) {
    if (scn.policy == Policy::kA3) return a3_avg_sum_rate(cfg).value;
    if (scn.policy == Policy::kAia) return aia_avg_sum_rate(cfg).value;
  } else if (scn.mode == Mode::kCrnoma) {
    if (scn.policy == Policy::kMcg) return mcg_avg_secondary_rate(cfg).value;
    if (scn.policy == Policy::kPu) return pu_avg_secondary_rate(cfg).value;
    if (scn.policy == Policy::kSu) return su_avg_secondary_rate(cfg).value;
  }
  return std::nullopt;
}

void Table::write_csv(std::ostream& os) const {
  fmt::print(os, "{}\n", fmt::join(header, ","));
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) line += ',';
      line += fmt::format("{:.17g}", row[i]);
    }
    line += '\n';
    os << line;
  }
}

std::size_t Table::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range(fmt::format("no column '{}'", name));
  return static_cast<std::size_t>(it - header.begin());
}

Table figure_table(int id, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  FigureSpec f = figure_spec(id);
  f.base.trials = trials;
  f.base.seed = seed;
  Table t;
  t.header.emplace_back(to_string(f.axis));
  for (const auto& c : f.curves) t.header.push_back(c.name);
  for (double v : f.values) {
    std::vector<double> row{v};
    for (const auto& c : f.curves) {
      Scenario s = f.base;
      s.mode = c.mode;
      s.policy = c.policy;
      if (c.d1 > 0.0) s.fading.d1 = c.d1;
      if (c.d2 > 0.0) s.fading.d2 = c.d2;
      s = with_axis(s, f.axis, v);
      if (c.analytic) {
        row.push_back(analytic_prediction(s).value_or(std::nan("")));
      } else {
        row.push_back(run_trials(s, workers).mean(f.metric));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void reproduce_figure(int id, std::uint64_t trials, std::uint64_t seed, const std::string& path,
                      unsigned workers) {
  // Fail on a bad path before spending time on the sweep.
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(fmt::format("cannot open '{}' for writing", path));
  figure_table(id, trials, seed, workers).write_csv(os);
  os.flush();
  if (!os) throw IoError(fmt::format("failed writing '{}'", path));
}

bool ValidationReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.pass; });
}

ValidationReport validate_asymptotics(std::span<const ValidationPoint> grid, unsigned workers) {
  ValidationReport rep;
  for (const auto& pt : grid) {
    ValidationRow row;
    row.point = pt;
    const Scenario& s = pt.scenario;
    const auto predicted = analytic_prediction(s);
    if (!predicted) {
      throw ConfigError(fmt::format("policy '{}' in mode '{}' has no closed form",
                                    to_string(s.policy), to_string(s.mode)));
    }
    const Metric metric = predicted_metric(s.mode);
    const RateReport sim = run_trials(s, workers);
    row.analytic = *predicted;
    row.simulated = sim.mean(metric);
    row.std_err = sim.std_err(metric);
    const double denom = std::abs(row.simulated);
    row.rel_gap = denom > 0.0 ? std::abs(row.analytic - row.simulated) / denom
                              : std::abs(row.analytic - row.simulated);
    const double weakest = s.fading.rho() / std::max(s.fading.omega_h(), s.fading.omega_g());
    row.applicable = weakest >= kHighSnrThreshold;
    row.pass = !row.applicable || row.rel_gap <= pt.tolerance;
    rep.rows.push_back(row);
  }
  return rep;
}

Scenario parse_scenario(std::string_view text) {
  const auto blocks = tokenize(text);
  if (blocks.size() > 1) throw ConfigError("scenario file holds more than one block");
  return scenario_from(blocks.empty() ? std::vector<KeyValue>{} : blocks.front(), nullptr);
}

std::vector<ValidationPoint> parse_grid(std::string_view text) {
  std::vector<ValidationPoint> out;
  for (const auto& block : tokenize(text)) {
    ValidationPoint p;
    p.scenario = scenario_from(block, &p.tolerance);
    if (!(p.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    out.push_back(p);
  }
  if (out.empty()) throw ConfigError("grid file holds no scenarios");
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad()) throw IoError(fmt::format("failed reading '{}'", path));
  return ss.str();
}

}  // namespace nomasel
