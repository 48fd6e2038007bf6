#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "nomasel/analytics.hpp"
#include "nomasel/channel.hpp"
#include "nomasel/harness.hpp"
#include "nomasel/rates.hpp"
#include "nomasel/selection.hpp"
#include "nomasel/special.hpp"

namespace py = pybind11;
using namespace nomasel;

namespace {

py::array_t<double> to_numpy(const GainMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::memcpy(out.mutable_data(), m.values().data(), m.size() * sizeof(double));
  return out;
}

GainMatrix from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw std::invalid_argument("gain matrix must be 2-D");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return GainMatrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint antenna selection for two-user MIMO NOMA downlinks.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<FadingConfig>(m, "FadingConfig")
      .def(py::init<>())
      .def(py::init([](std::size_t n, std::size_t mm, std::size_t k, double d1, double d2,
                       double alpha, double ps, double s2) {
             return FadingConfig{n, mm, k, d1, d2, alpha, ps, s2};
           }),
           py::arg("n_bs") = 2, py::arg("m_ue1") = 2, py::arg("k_ue2") = 2,
           py::arg("d1") = 80.0, py::arg("d2") = 200.0, py::arg("alpha") = 3.0,
           py::arg("ps_dbm") = 30.0, py::arg("sigma2_dbm") = -110.0)
      .def_readwrite("n_bs", &FadingConfig::n_bs)
      .def_readwrite("m_ue1", &FadingConfig::m_ue1)
      .def_readwrite("k_ue2", &FadingConfig::k_ue2)
      .def_readwrite("d1", &FadingConfig::d1)
      .def_readwrite("d2", &FadingConfig::d2)
      .def_readwrite("alpha", &FadingConfig::alpha)
      .def_readwrite("ps_dbm", &FadingConfig::ps_dbm)
      .def_readwrite("sigma2_dbm", &FadingConfig::sigma2_dbm)
      .def_property_readonly("omega_h", &FadingConfig::omega_h)
      .def_property_readonly("omega_g", &FadingConfig::omega_g)
      .def_property_readonly("rho", &FadingConfig::rho);

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& h,
                       const py::array_t<double, py::array::c_style | py::array::forcecast>& g) {
             return ChannelRealization{from_numpy(h), from_numpy(g)};
           }),
           py::arg("h"), py::arg("g"))
      .def_property_readonly("h", [](const ChannelRealization& c) { return to_numpy(c.h); })
      .def_property_readonly("g", [](const ChannelRealization& c) { return to_numpy(c.g); });

  m.def("sample_channels", &sample_channels, py::arg("cfg"), py::arg("seed"),
        py::arg("trial_index") = 0);

  py::class_<PowerSplit>(m, "PowerSplit")
      .def_static("fixed", &PowerSplit::fixed, py::arg("b"))
      .def_static("from_strong_share", &PowerSplit::from_strong_share, py::arg("b"))
      .def_readonly("a", &PowerSplit::a)
      .def_readonly("b", &PowerSplit::b);

  py::class_<RatePair>(m, "RatePair")
      .def_readonly("r1", &RatePair::r1)
      .def_readonly("r2", &RatePair::r2)
      .def_property_readonly("sum", &RatePair::sum);

  py::enum_<CrMode>(m, "CrMode")
      .value("EXACT", CrMode::kExact)
      .value("ASYMPTOTIC", CrMode::kAsymptotic);

  m.def("fnoma_pair_rates", &fnoma_pair_rates, py::arg("h"), py::arg("g"), py::arg("split"),
        py::arg("rho"));
  m.def("fnoma_sum_rate", &fnoma_sum_rate, py::arg("gamma_s"), py::arg("gamma_w"),
        py::arg("b"), py::arg("rho"));
  m.def("jain_fairness", &jain_fairness, py::arg("r1"), py::arg("r2"));
  m.def("cr_power_split", &cr_power_split, py::arg("h"), py::arg("g"), py::arg("rho"),
        py::arg("r_th"), py::arg("mode") = CrMode::kExact);
  m.def("cr_rates", &cr_rates, py::arg("h"), py::arg("g"), py::arg("rho"), py::arg("r_th"),
        py::arg("mode") = CrMode::kExact);
  m.def("oma_pair_rates", &oma_pair_rates, py::arg("h_best"), py::arg("g_best"), py::arg("rho"));

  py::class_<Selection>(m, "Selection")
      .def_readonly("n_star", &Selection::n_star)
      .def_readonly("m_star", &Selection::m_star)
      .def_readonly("k_star", &Selection::k_star)
      .def_readonly("n_star_ue2", &Selection::n_star_ue2)
      .def_readonly("delta", &Selection::delta)
      .def_readonly("gamma_s", &Selection::gamma_s)
      .def_readonly("gamma_w", &Selection::gamma_w)
      .def_readonly("split", &Selection::split)
      .def_readonly("eval_count", &Selection::eval_count);

  m.def("es_fnoma", &es_fnoma, py::arg("ch"), py::arg("split"), py::arg("rho"));
  m.def("es_crnoma", &es_crnoma, py::arg("ch"), py::arg("rho"), py::arg("r_th"));
  m.def("a3_as", &a3_as, py::arg("ch"), py::arg("split"), py::arg("rho"));
  m.def("aia_as", &aia_as, py::arg("ch"), py::arg("split"), py::arg("rho"));
  m.def("mcg_as", &mcg_as, py::arg("ch"), py::arg("rho"), py::arg("r_th"));
  m.def("pu_as", &pu_as, py::arg("ch"), py::arg("rho"), py::arg("r_th"));
  m.def("su_as", &su_as, py::arg("ch"), py::arg("rho"), py::arg("r_th"));
  m.def("random_as", &random_as, py::arg("ch"), py::arg("seed"));
  m.def("oma_es", &oma_es, py::arg("ch"), py::arg("rho"));

  m.def("exp_integral_ei", &exp_integral_ei, py::arg("x"));

  py::class_<AnalyticConfig>(m, "AnalyticConfig")
      .def(py::init([](std::size_t n, std::size_t mm, std::size_t k, double oh, double og,
                       double rho, double b, double eps) {
             return AnalyticConfig{n, mm, k, oh, og, rho, b, eps};
           }),
           py::arg("n_bs") = 2, py::arg("m_ue1") = 2, py::arg("k_ue2") = 2,
           py::arg("omega_h") = 1.0, py::arg("omega_g") = 1.0, py::arg("rho") = 1.0,
           py::arg("b") = 0.4, py::arg("epsilon") = 0.0)
      .def_static("from_fading", &AnalyticConfig::from_fading, py::arg("fading"), py::arg("b"),
                  py::arg("r_th"))
      .def_readwrite("n_bs", &AnalyticConfig::n_bs)
      .def_readwrite("m_ue1", &AnalyticConfig::m_ue1)
      .def_readwrite("k_ue2", &AnalyticConfig::k_ue2)
      .def_readwrite("omega_h", &AnalyticConfig::omega_h)
      .def_readwrite("omega_g", &AnalyticConfig::omega_g)
      .def_readwrite("rho", &AnalyticConfig::rho)
      .def_readwrite("b", &AnalyticConfig::b)
      .def_readwrite("epsilon", &AnalyticConfig::epsilon);

  auto value = [](auto fn) { return [fn](const AnalyticConfig& c) { return fn(c).value; }; };
  m.def("a3_avg_sum_rate", value(&a3_avg_sum_rate), py::arg("cfg"));
  m.def("aia_avg_sum_rate", value(&aia_avg_sum_rate), py::arg("cfg"));
  m.def("pu_avg_secondary_rate", value(&pu_avg_secondary_rate), py::arg("cfg"));
  m.def("su_avg_secondary_rate", value(&su_avg_secondary_rate), py::arg("cfg"));
  m.def("mcg_avg_secondary_rate", value(&mcg_avg_secondary_rate), py::arg("cfg"));
  m.def("prob_h_ge_g", &prob_h_ge_g, py::arg("cfg"));
  m.def("aia_strong_pdf", &aia_strong_pdf, py::arg("x"), py::arg("cfg"));

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("fading", &Scenario::fading)
      .def_property(
          "mode", [](const Scenario& s) { return std::string(to_string(s.mode)); },
          [](Scenario& s, const std::string& v) { s.mode = parse_mode(v); })
      .def_property(
          "policy", [](const Scenario& s) { return std::string(to_string(s.policy)); },
          [](Scenario& s, const std::string& v) { s.policy = parse_policy(v); })
      .def_readwrite("b", &Scenario::b)
      .def_readwrite("r_th", &Scenario::r_th)
      .def_readwrite("trials", &Scenario::trials)
      .def_readwrite("seed", &Scenario::seed)
      .def("validate", &Scenario::validate);

  m.def("parse_scenario", &parse_scenario, py::arg("text"));

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("mean_r1", &RateReport::mean_r1)
      .def_readonly("mean_r2", &RateReport::mean_r2)
      .def_readonly("mean_sum", &RateReport::mean_sum)
      .def_readonly("mean_fairness", &RateReport::mean_fairness)
      .def_readonly("se_r1", &RateReport::se_r1)
      .def_readonly("se_r2", &RateReport::se_r2)
      .def_readonly("se_sum", &RateReport::se_sum)
      .def_readonly("se_fairness", &RateReport::se_fairness)
      .def_readonly("trials_used", &RateReport::trials_used)
      .def_readonly("mean_eval_count", &RateReport::mean_eval_count);

  // Long runs drop the GIL; the engine never touches Python objects.
  m.def("run_trials", &run_trials, py::arg("scenario"), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "sweep",
      [](const Scenario& base, const std::string& axis, const std::vector<double>& values,
         unsigned workers) {
        const Axis a = parse_axis(axis);
        py::gil_scoped_release release;
        return sweep(base, a, values, workers);
      },
      py::arg("base"), py::arg("axis"), py::arg("values"), py::arg("workers") = 0);
  m.def("analytic_prediction", &analytic_prediction, py::arg("scenario"));
  m.def(
      "figure_table",
      [](int id, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
        Table t;
        {
          py::gil_scoped_release release;
          t = figure_table(id, trials, seed, workers);
        }
        return py::make_tuple(t.header, t.rows);
      },
      py::arg("id"), py::arg("trials"), py::arg("seed") = 1, py::arg("workers") = 0,
      "Returns (header, rows) for one figure's sweep.");
  m.def("reproduce_figure", &reproduce_figure, py::arg("id"), py::arg("trials"), py::arg("seed"),
        py::arg("path"), py::arg("workers") = 0, py::call_guard<py::gil_scoped_release>());
}
