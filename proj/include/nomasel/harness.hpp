#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nomasel/channel.hpp"
#include "nomasel/rates.hpp"
#include "nomasel/selection.hpp"

namespace nomasel {

/// Bad scenario, unknown key/axis, incompatible mode and policy.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { kFnoma, kCrnoma, kOma };
enum class Policy { kEs, kA3, kAia, kMcg, kPu, kSu, kRandom, kOmaEs };
enum class Metric { kR1, kR2, kSum, kFairness };
enum class Axis { kPsDbm, kNBs, kD1, kD2, kB, kRth };

std::string_view to_string(Mode m);
std::string_view to_string(Policy p);
std::string_view to_string(Axis a);
Mode parse_mode(std::string_view s);
Policy parse_policy(std::string_view s);
Axis parse_axis(std::string_view s);

struct Scenario {
  FadingConfig fading;
  Mode mode = Mode::kFnoma;
  Policy policy = Policy::kA3;
  double b = 0.4;       // strong-user share, fnoma only
  double r_th = 5.0;    // primary QoS target [bit/s/Hz], crnoma only
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Streaming mean/variance (Welford), mergeable with Chan's update.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  static Moments merge(const Moments& a, const Moments& b);
  double variance() const;
  double std_err() const;
};

struct RateReport {
  double mean_r1 = 0.0;
  double mean_r2 = 0.0;
  double mean_sum = 0.0;
  double mean_fairness = 0.0;
  double se_r1 = 0.0;
  double se_r2 = 0.0;
  double se_sum = 0.0;
  double se_fairness = 0.0;
  std::uint64_t trials_used = 0;
  double mean_eval_count = 0.0;

  double mean(Metric m) const;
  double std_err(Metric m) const;
};

struct TrialOutcome {
  Selection selection;
  RatePair rates;
  double fairness = 1.0;
};

/// The selection and instantaneous rates of trial `trial_index`.
TrialOutcome evaluate_trial(const Scenario& scn, std::uint64_t trial_index);

/// Worker count: `requested` if nonzero, else NOMA_SIM_WORKERS, else the
/// hardware concurrency. Throws ConfigError on a malformed variable.
unsigned resolve_workers(unsigned requested = 0);

/// Averages `scn.trials` independent realizations. Trials are grouped into
/// fixed blocks whose moments are merged in a fixed binary tree, so the
/// result is bit-identical for any worker count.
RateReport run_trials(const Scenario& scn, unsigned workers = 0);

struct PairedDifference {
  double mean = 0.0;
  double std_err = 0.0;
};

/// Mean and standard error of metric(a) - metric(b) over common realizations.
/// Both scenarios must share fading, seed and trials.
PairedDifference paired_difference(const Scenario& a, const Scenario& b, Metric metric,
                                   unsigned workers = 0);

/// Copy of `base` with one parameter replaced.
Scenario with_axis(Scenario base, Axis axis, double value);

/// One report per value; every point reuses the base seed.
std::vector<RateReport> sweep(const Scenario& base, Axis axis, std::span<const double> values,
                              unsigned workers = 0);

/// Closed-form high-SNR prediction for the scenario's policy: the sum rate
/// for a3/aia, the secondary rate for mcg/pu/su, nothing otherwise.
std::optional<double> analytic_prediction(const Scenario& scn);

/// Metric a closed form predicts for this mode (sum for fnoma, r1 for crnoma).
Metric predicted_metric(Mode mode);

/// Mean SNR of the weaker link, rho / max(Omega_h, Omega_g), must reach
/// this before a high-SNR closed form is compared against simulation.
inline constexpr double kHighSnrThreshold = 1e3;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Header plus rows, comma-separated, LF line endings, 17 significant digits.
  void write_csv(std::ostream& os) const;
  std::size_t column(std::string_view name) const;
};

/// Full sweep for figure `id` (1-9), simulated and analytic columns.
/// Throws ConfigError for an unknown id.
Table figure_table(int id, std::uint64_t trials, std::uint64_t seed, unsigned workers = 0);

/// figure_table written to `path`; throws IoError if it cannot be written.
void reproduce_figure(int id, std::uint64_t trials, std::uint64_t seed, const std::string& path,
                      unsigned workers = 0);

struct ValidationPoint {
  Scenario scenario;
  double tolerance = 0.01;  // relative
};

struct ValidationRow {
  ValidationPoint point;
  double analytic = 0.0;
  double simulated = 0.0;
  double std_err = 0.0;
  double rel_gap = 0.0;
  bool applicable = true;  // false outside the high-SNR domain
  bool pass = true;        // always true when not applicable
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  bool all_pass() const;
};

/// Compares each point's closed form against its Monte Carlo estimate.
/// Throws ConfigError for a policy without a closed form.
ValidationReport validate_asymptotics(std::span<const ValidationPoint> grid,
                                      unsigned workers = 0);

// Scenario files: one `key = value` per line, '#' starts a comment. Keys are
// n_bs m_ue1 k_ue2 d1 d2 alpha ps_dbm sigma2_dbm mode policy b r_th trials
// seed. Grid files hold several such blocks separated by `---` lines and may
// add `tolerance`.
Scenario parse_scenario(std::string_view text);
std::vector<ValidationPoint> parse_grid(std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace nomasel
