#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nomasel/analytics.hpp"
#include "nomasel/harness.hpp"

using namespace nomasel;

namespace {

Scenario fig1(Policy p, double ps_dbm = 30.0, std::uint64_t trials = 20'000) {
  Scenario s;
  s.fading.n_bs = 2;
  s.fading.ps_dbm = ps_dbm;
  s.mode = p == Policy::kOmaEs ? Mode::kOma : Mode::kFnoma;
  s.policy = p;
  s.trials = trials;
  s.seed = 2024;
  return s;
}

Scenario fig6(Policy p, double d1, std::uint64_t trials = 20'000) {
  Scenario s;
  s.fading.n_bs = 4;
  s.fading.d1 = d1;
  s.fading.ps_dbm = 20.0;
  s.mode = Mode::kCrnoma;
  s.policy = p;
  s.r_th = 5.0;
  s.trials = trials;
  s.seed = 77;
  return s;
}

bool same(const RateReport& a, const RateReport& b) {
  return a.mean_r1 == b.mean_r1 && a.mean_r2 == b.mean_r2 && a.mean_sum == b.mean_sum &&
         a.mean_fairness == b.mean_fairness && a.se_r1 == b.se_r1 && a.se_r2 == b.se_r2 &&
         a.se_sum == b.se_sum && a.se_fairness == b.se_fairness &&
         a.trials_used == b.trials_used && a.mean_eval_count == b.mean_eval_count;
}

}  // namespace

TEST_CASE("names round-trip") {
  for (Policy p : {Policy::kEs, Policy::kA3, Policy::kAia, Policy::kMcg, Policy::kPu,
                   Policy::kSu, Policy::kRandom, Policy::kOmaEs}) {
    CHECK(parse_policy(to_string(p)) == p);
  }
  for (Mode m : {Mode::kFnoma, Mode::kCrnoma, Mode::kOma}) CHECK(parse_mode(to_string(m)) == m);
  for (Axis a : {Axis::kPsDbm, Axis::kNBs, Axis::kD1, Axis::kD2, Axis::kB, Axis::kRth}) {
    CHECK(parse_axis(to_string(a)) == a);
  }
  CHECK_THROWS_AS(parse_axis("alpha"), ConfigError);
  CHECK_THROWS_AS(parse_policy("best"), ConfigError);
}

TEST_CASE("scenario validation") {
  Scenario s;
  CHECK_NOTHROW(s.validate());
  s.policy = Policy::kMcg;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.mode = Mode::kCrnoma;
  CHECK_NOTHROW(s.validate());
  s.policy = Policy::kA3;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.trials = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.b = 0.6;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.fading.d1 = -1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.mode = Mode::kOma;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.policy = Policy::kOmaEs;
  CHECK_NOTHROW(s.validate());
  CHECK_THROWS_AS(run_trials(Scenario{.mode = Mode::kOma}), ConfigError);
}

TEST_CASE("moments merge like a single pass") {
  Moments all, a, b;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i) * 10 + i * 0.1;
    all.add(x);
    (i < 37 ? a : b).add(x);
  }
  const Moments m = Moments::merge(a, b);
  CHECK(m.count == all.count);
  CHECK(m.mean == doctest::Approx(all.mean).epsilon(1e-14));
  CHECK(m.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  CHECK(Moments::merge(Moments{}, a).mean == a.mean);
  CHECK(Moments{}.std_err() == 0.0);
}

TEST_CASE("one trial equals the direct module calls") {
  for (Policy p : {Policy::kEs, Policy::kA3, Policy::kAia, Policy::kRandom, Policy::kOmaEs}) {
    Scenario s = fig1(p, 30.0, 1);
    s.seed = 5;
    const RateReport r = run_trials(s);
    const ChannelRealization ch = sample_channels(s.fading, 5, 0);
    const double rho = s.fading.rho();
    Selection sel;
    switch (p) {
      case Policy::kEs: sel = es_fnoma(ch, PowerSplit::fixed(0.4), rho); break;
      case Policy::kA3: sel = a3_as(ch, PowerSplit::fixed(0.4), rho); break;
      case Policy::kAia: sel = aia_as(ch, PowerSplit::fixed(0.4), rho); break;
      case Policy::kRandom:
        sel = random_as(ch, derive_key(5, 0, Stream::kRandomSelection));
        break;
      default: sel = oma_es(ch, rho); break;
    }
    const RatePair rates = p == Policy::kOmaEs
                               ? oma_pair_rates(sel.h(ch), sel.g(ch), rho)
                               : fnoma_pair_rates(sel.h(ch), sel.g(ch), PowerSplit::fixed(0.4), rho);
    CHECK(r.trials_used == 1);
    CHECK(r.mean_r1 == rates.r1);
    CHECK(r.mean_r2 == rates.r2);
    CHECK(r.mean_sum == rates.sum());
    CHECK(r.mean_fairness == jain_fairness(rates.r1, rates.r2));
    CHECK(r.mean_eval_count == double(sel.eval_count));
    CHECK(r.se_sum == 0.0);
  }
  const Scenario c = fig6(Policy::kMcg, 120.0, 1);
  const ChannelRealization ch = sample_channels(c.fading, c.seed, 0);
  const Selection sel = mcg_as(ch, c.fading.rho(), 5.0);
  const RatePair rates = cr_rates(sel.h(ch), sel.g(ch), c.fading.rho(), 5.0, CrMode::kExact);
  CHECK(run_trials(c).mean_r1 == rates.r1);
  CHECK(evaluate_trial(c, 0).rates.r1 == rates.r1);
}

TEST_CASE("reports are identical for any worker count") {
  for (const Scenario& s : {fig1(Policy::kAia, 30.0, 5000), fig6(Policy::kRandom, 150.0, 5001)}) {
    const RateReport one = run_trials(s, 1);
    CHECK(same(one, run_trials(s, 2)));
    CHECK(same(one, run_trials(s, 3)));
    CHECK(same(one, run_trials(s, 8)));
  }
}

TEST_CASE("worker count from the environment") {
  CHECK(resolve_workers(3) == 3);
  ::setenv("NOMA_SIM_WORKERS", "5", 1);
  CHECK(resolve_workers() == 5);
  ::setenv("NOMA_SIM_WORKERS", "zero", 1);
  CHECK_THROWS_AS(resolve_workers(), ConfigError);
  ::setenv("NOMA_SIM_WORKERS", "0", 1);
  CHECK_THROWS_AS(resolve_workers(), ConfigError);
  ::unsetenv("NOMA_SIM_WORKERS");
  CHECK(resolve_workers() >= 1);
}

TEST_CASE("report invariants and 1/sqrt(n) standard error") {
  const RateReport small = run_trials(fig1(Policy::kA3, 30.0, 20'000));
  const RateReport big = run_trials(fig1(Policy::kA3, 30.0, 80'000));
  CHECK(small.se_sum > 0.0);
  CHECK(small.mean_fairness >= 0.5);
  CHECK(small.mean_fairness <= 1.0);
  CHECK(small.se_sum / big.se_sum == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("monte carlo agrees with the closed forms") {
  const Scenario a3 = fig1(Policy::kA3, 30.0, 50'000);
  const double pred = *analytic_prediction(a3);
  CHECK(pred == a3_avg_sum_rate(AnalyticConfig::from_fading(a3.fading, 0.4, 5.0)).value);
  CHECK(std::abs(run_trials(a3).mean_sum - pred) / pred < 0.01);
  const Scenario pu = fig6(Policy::kPu, 300.0, 50'000);
  CHECK(std::abs(run_trials(pu).mean_r1 - *analytic_prediction(pu)) /
            *analytic_prediction(pu) <
        0.02);
  CHECK_FALSE(analytic_prediction(fig1(Policy::kEs)).has_value());
  CHECK(predicted_metric(Mode::kCrnoma) == Metric::kR1);
}

TEST_CASE("paired differences") {
  const Scenario es = fig1(Policy::kEs, 20.0, 4096);
  const Scenario a3 = fig1(Policy::kA3, 20.0, 4096);
  const PairedDifference d = paired_difference(es, a3, Metric::kSum);
  CHECK(d.mean >= 0.0);
  CHECK(d.mean == doctest::Approx(run_trials(es).mean_sum - run_trials(a3).mean_sum).epsilon(1e-9));
  Scenario other = a3;
  other.seed = 1;
  CHECK_THROWS_AS(paired_difference(es, other, Metric::kSum), ConfigError);
}

TEST_CASE("sweeps") {
  const double ps[] = {0, 10, 20, 30, 40};
  for (Policy p : {Policy::kEs, Policy::kA3, Policy::kAia, Policy::kRandom, Policy::kOmaEs}) {
    const auto rows = sweep(fig1(p, 0.0, 4000), Axis::kPsDbm, ps);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].mean_sum >= rows[i - 1].mean_sum);
  }
  const double n[] = {1, 2, 3};
  const auto by_n = sweep(fig1(Policy::kA3, 10.0, 4000), Axis::kNBs, n);
  CHECK(by_n[2].mean_sum > by_n[0].mean_sum);
  const double bad_n[] = {1.5};
  CHECK_THROWS_AS(sweep(fig1(Policy::kA3), Axis::kNBs, bad_n), ConfigError);
  const double bad_b[] = {0.7};
  CHECK_THROWS_AS(sweep(fig1(Policy::kA3), Axis::kB, bad_b), ConfigError);
  CHECK(with_axis(Scenario{}, Axis::kRth, 3.0).r_th == 3.0);
  CHECK(with_axis(Scenario{}, Axis::kD2, 90.0).fading.d2 == 90.0);
}

TEST_CASE("scenario and grid files") {
  const Scenario s = parse_scenario(R"(
# comment line
n_bs = 4
mode = crnoma   # trailing comment
policy = pu
d1 = 300
r_th = 5
trials = 1000
seed = 9
)");
  CHECK(s.fading.n_bs == 4);
  CHECK(s.mode == Mode::kCrnoma);
  CHECK(s.policy == Policy::kPu);
  CHECK(s.fading.d1 == 300.0);
  CHECK(s.trials == 1000);
  CHECK(s.seed == 9);
  CHECK(s.fading.m_ue1 == 2);
  CHECK_THROWS_AS(parse_scenario("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("n_bs 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("n_bs = four\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("mode = crnoma\npolicy = a3\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("tolerance = 0.1\n"), ConfigError);

  const auto grid = parse_grid("policy = a3\ntolerance = 0.05\n---\npolicy = aia\n");
  REQUIRE(grid.size() == 2);
  CHECK(grid[0].tolerance == 0.05);
  CHECK(grid[1].tolerance == 0.01);
  CHECK(grid[1].scenario.policy == Policy::kAia);
  CHECK_THROWS_AS(parse_grid("# empty\n"), ConfigError);
  CHECK_THROWS_AS(read_text_file("/nonexistent/file.txt"), IoError);
}

TEST_CASE("validation report flags the low-SNR domain") {
  std::vector<ValidationPoint> grid;
  for (double ps : {20.0, 30.0, 40.0}) grid.push_back({fig1(Policy::kA3, ps, 20'000), 0.01});
  grid.push_back({fig1(Policy::kA3, -100.0, 2000), 0.01});
  const ValidationReport rep = validate_asymptotics(grid);
  REQUIRE(rep.rows.size() == 4);
  for (int i = 0; i < 3; ++i) {
    CHECK(rep.rows[i].applicable);
    CHECK(rep.rows[i].pass);
  }
  CHECK_FALSE(rep.rows[3].applicable);
  CHECK(rep.rows[3].rel_gap > 1.0);
  CHECK(rep.rows[3].pass);
  CHECK(rep.all_pass());

  std::vector<ValidationPoint> tight{{fig1(Policy::kA3, 30.0, 200), 1e-9}};
  CHECK_FALSE(validate_asymptotics(tight).all_pass());
  std::vector<ValidationPoint> no_form{{fig1(Policy::kEs), 0.01}};
  CHECK_THROWS_AS(validate_asymptotics(no_form), ConfigError);
}

TEST_CASE("figure tables and csv output") {
  const Table t = figure_table(1, 500, 3);
  REQUIRE(t.header.size() == 8);
  CHECK(t.header[0] == "ps_dbm");
  CHECK(t.column("a3_analytic") == 3);
  CHECK(t.rows.size() == 9);
  const Table t6 = figure_table(6, 200, 3);
  CHECK(t6.header[0] == "d1");
  CHECK(t6.column("mcg_analytic") > 0);
  const Table t9 = figure_table(9, 200, 3);
  CHECK(t9.header[0] == "r_th");
  CHECK(t9.column("pu_sim_ue2_near") > 0);
  CHECK_THROWS_AS(figure_table(0, 10, 1), ConfigError);
  CHECK_THROWS_AS(figure_table(10, 10, 1), ConfigError);

  Table small{{"x", "y"}, {{1.0, 0.1}, {2.0, 1.0 / 3.0}}};
  std::ostringstream os;
  small.write_csv(os);
  CHECK(os.str() == "x,y\n1,0.10000000000000001\n2,0.33333333333333331\n");

  const auto path = std::filesystem::temp_directory_path() / "nomasel_fig5.csv";
  reproduce_figure(5, 200, 1, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "b,fnoma_es,a3_sim,aia_sim,fnoma_ra,oma_es");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(reproduce_figure(1, 10, 1, "/nonexistent/dir/out.csv"), IoError);
}
