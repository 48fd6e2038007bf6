// noma_sim: command-line front end for the antenna-selection simulator.
//
// Exit codes: 0 success, 1 configuration error, 2 validation failure,
// 3 I/O error.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "nomasel/channel.hpp"
#include "nomasel/harness.hpp"
#include "nomasel/selection.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kValidation = 2, kIo = 3 };

using namespace nomasel;

int cmd_figure(int id, std::uint64_t trials, std::uint64_t seed, const std::string& out) {
  reproduce_figure(id, trials, seed, out);
  fmt::print("figure {} -> {}\n", id, out);
  return kOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& axis_name,
              const std::vector<double>& values, const std::string& out) {
  const Scenario base = parse_scenario(read_text_file(scenario_path));
  const Axis axis = parse_axis(axis_name);
  const auto reports = sweep(base, axis, values);

  Table t;
  t.header = {std::string(to_string(axis)), "mean_r1", "se_r1", "mean_r2", "se_r2", "mean_sum",
              "se_sum", "mean_fairness", "se_fairness", "mean_eval_count"};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const RateReport& r = reports[i];
    t.rows.push_back({values[i], r.mean_r1, r.se_r1, r.mean_r2, r.se_r2, r.mean_sum, r.se_sum,
                      r.mean_fairness, r.se_fairness, r.mean_eval_count});
  }
  if (out.empty()) {
    t.write_csv(std::cout);
    return kOk;
  }
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(fmt::format("cannot open '{}' for writing", out));
  t.write_csv(os);
  if (!os.flush()) throw IoError(fmt::format("failed writing '{}'", out));
  return kOk;
}

int cmd_validate(const std::string& grid_path) {
  const auto grid = parse_grid(read_text_file(grid_path));
  const ValidationReport rep = validate_asymptotics(grid);
  fmt::print("{:>6} {:>6} {:>4} {:>8} {:>8} {:>12} {:>12} {:>10} {:>8}  {}\n", "mode", "policy",
             "N", "ps_dbm", "d1", "analytic", "simulated", "rel_gap", "tol", "status");
  for (const auto& r : rep.rows) {
    const Scenario& s = r.point.scenario;
    const char* status = !r.applicable ? "n/a (low SNR)" : r.pass ? "pass" : "FAIL";
    fmt::print("{:>6} {:>6} {:>4} {:>8.1f} {:>8.1f} {:>12.6f} {:>12.6f} {:>10.3e} {:>8.3g}  {}\n",
               to_string(s.mode), to_string(s.policy), s.fading.n_bs, s.fading.ps_dbm,
               s.fading.d1, r.analytic, r.simulated, r.rel_gap, r.point.tolerance, status);
  }
  return rep.all_pass() ? kOk : kValidation;
}

// Comparison counts on one realization per size against the closed bounds.
int cmd_bench(std::size_t max_dim, std::uint64_t seed) {
  FadingConfig cfg;
  fmt::print("{:>2} {:>2} {:>2} {:>6} {:>5} {:>5} {:>7} {:>5} {:>7} {:>5} {:>7} {:>5} {:>7}\n",
             "N", "M", "K", "ES", "A3", "AIA", "<=bnd", "MCG", "<=bnd", "PU", "<=bnd", "SU",
             "<=bnd");
  bool ok = true;
  for (std::size_t n = 1; n <= max_dim; ++n) {
    for (std::size_t m = 1; m <= max_dim; ++m) {
      for (std::size_t k = 1; k <= max_dim; ++k) {
        cfg.n_bs = n;
        cfg.m_ue1 = m;
        cfg.k_ue2 = k;
        const auto ch = sample_channels(cfg, seed, 0);
        const double rho = cfg.rho();
        const PowerSplit split = PowerSplit::fixed(0.4);
        const auto es = es_fnoma(ch, split, rho).eval_count;
        const auto a3 = a3_as(ch, split, rho).eval_count;
        const auto aia = aia_as(ch, split, rho).eval_count;
        const auto mcg = mcg_as(ch, rho, 5.0).eval_count;
        const auto pu = pu_as(ch, rho, 5.0).eval_count;
        const auto su = su_as(ch, rho, 5.0).eval_count;
        const std::uint64_t b_a3 = n * (m + k + 3);
        const std::uint64_t b_mcg = n * (m + k) + 2;
        const std::uint64_t b_pu = n * k + m;
        const std::uint64_t b_su = n * m + k;
        ok = ok && es == n * m * k && a3 <= b_a3 && aia <= b_a3 && mcg <= b_mcg && pu <= b_pu &&
             su <= b_su;
        fmt::print("{:>2} {:>2} {:>2} {:>6} {:>5} {:>5} {:>7} {:>5} {:>7} {:>5} {:>7} {:>5} {:>7}\n",
                   n, m, k, es, a3, aia, b_a3, mcg, b_mcg, pu, b_pu, su, b_su);
      }
    }
  }
  fmt::print("{}\n", ok ? "all counts within bounds" : "BOUND VIOLATED");
  return ok ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antenna selection for two-user MIMO NOMA downlinks"};
  app.require_subcommand(1);

  int fig_id = 1;
  std::uint64_t fig_trials = 100'000;
  std::uint64_t fig_seed = 1;
  std::string fig_out;
  auto* fig = app.add_subcommand("figure", "Write one figure's sweep as CSV");
  fig->add_option("--id", fig_id, "Figure number (1-9)")->required();
  fig->add_option("--trials", fig_trials, "Monte Carlo trials per point")
      ->check(CLI::PositiveNumber);
  fig->add_option("--seed", fig_seed, "Base seed");
  fig->add_option("--out", fig_out, "Output CSV path")->required();

  std::string sw_scenario;
  std::string sw_axis;
  std::vector<double> sw_values;
  std::string sw_out;
  auto* sw = app.add_subcommand("sweep", "Sweep one scenario parameter");
  sw->add_option("--scenario", sw_scenario, "Scenario file")->required();
  sw->add_option("--axis", sw_axis, "ps_dbm, n_bs, d1, d2, b or r_th")->required();
  sw->add_option("--values", sw_values, "Comma-separated axis values")
      ->required()
      ->delimiter(',');
  sw->add_option("--out", sw_out, "Output CSV path (default stdout)");

  std::string val_grid;
  auto* val = app.add_subcommand("validate", "Compare closed forms against simulation");
  val->add_option("--grid", val_grid, "Grid file")->required();

  std::size_t bench_max = 8;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "Print comparison counts against their bounds");
  bench->add_option("--max", bench_max, "Largest N, M and K")->check(CLI::Range(1, 32));
  bench->add_option("--seed", bench_seed, "Seed of the sampled realization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*fig) return cmd_figure(fig_id, fig_trials, fig_seed, fig_out);
    if (*sw) return cmd_sweep(sw_scenario, sw_axis, sw_values, sw_out);
    if (*val) return cmd_validate(val_grid);
    if (*bench) return cmd_bench(bench_max, bench_seed);
  } catch (const IoError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kIo;
  } catch (const ConfigError& e) {
    fmt::print(std::cerr, "configuration error: {}\n", e.what());
    return kConfig;
  } catch (const std::invalid_argument& e) {
    fmt::print(std::cerr, "configuration error: {}\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kConfig;
  }
  return kOk;
}
