#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opeflow/beta.hpp"
#include "opeflow/cylinder.hpp"
#include "opeflow/observables.hpp"
#include "opeflow/rgflow.hpp"
#include "opeflow/verify.hpp"

namespace py = pybind11;

namespace {

opeflow::ope::Expansion vocab(const std::string& name) {
  using namespace opeflow::ope;
  if (name == "OI") return op_single_trace_current();
  if (name == "OA") return op_two_trace_current();
  if (name == "O") return op_dressed_current();
  if (name == "M") return op_fundamental();
  if (name == "T") return op_stress_tensor();
  if (name.rfind("J:", 0) == 0) return op_current_trace(name.substr(2), false);
  if (name.rfind("Jb:", 0) == 0) return op_current_trace(name.substr(3), true);
  if (name.rfind("MB:", 0) == 0) return op_fundamental_trace(name.substr(3));
  throw std::invalid_argument("unknown operator name: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "operator-product calculus, flow integration, and critical observables "
            "for the deformed current-algebra model of the plateau transition";

  // --- symbolic engine surface
  m.def(
      "ope_product",
      [](const std::string& first, const std::string& second, const std::string& point,
         bool as_json) {
        const auto e = opeflow::ope::ope(vocab(first), vocab(second),
                                         opeflow::ope::RadialOrder::FirstOutermost, point);
        return as_json ? e.to_json() : e.str();
      },
      py::arg("first"), py::arg("second"), py::arg("point") = "z", py::arg("as_json") = false,
      "Expand first(point) x second(0); text or JSON form.");

  m.def(
      "beta_system",
      [](int n) {
        const auto b = opeflow::ope::beta_system();
        using opeflow::ope::Rational;
        using opeflow::ope::Sym;
        py::dict d;
        d["dgamma_dlna"] = b.dgamma.substituted(Sym::Level, Rational(n)).str();
        d["ddelta_dlna"] = b.ddelta.substituted(Sym::Level, Rational(n)).str();
        d["dgamma_dlna_lambda"] = b.dgamma_lambda.substituted(Sym::Level, Rational(n)).str();
        d["two_trace_self_finite"] = b.two_trace_self_finite;
        d["radial_order_symmetric"] = b.radial_order_symmetric;
        return d;
      },
      py::arg("n") = 4, "Flow equations derived by the engine, level substituted.");

  m.def(
      "scaling_dimension_m",
      [](double gamma_num, double gamma_den, int n) {
        const auto h = opeflow::ope::scaling_dimension_M(
            opeflow::ope::Rational(static_cast<std::int64_t>(gamma_num),
                                   static_cast<std::int64_t>(gamma_den)),
            n);
        return std::pair<double, double>{h.first.value(), h.second.value()};
      },
      py::arg("gamma_num"), py::arg("gamma_den") = 1, py::arg("n") = 4,
      "Conformal weight pair (h, hbar) of the fundamental field at gamma = num/den.");

  m.def("delta_q", &opeflow::ope::delta_q, py::arg("q"), py::arg("n") = 4,
        "Multifractal exponent q(1-q)/n.");

  // --- flow
  py::class_<opeflow::rg::CouplingState>(m, "CouplingState")
      .def(py::init<double, std::complex<double>, int>(), py::arg("gamma"), py::arg("delta"),
           py::arg("n"))
      .def_readonly("gamma", &opeflow::rg::CouplingState::gamma)
      .def_readonly("delta", &opeflow::rg::CouplingState::delta)
      .def_readonly("level", &opeflow::rg::CouplingState::level);

  m.def(
      "beta_eval",
      [](const opeflow::rg::CouplingState& s) {
        const auto b = opeflow::rg::beta_eval(s);
        return std::pair<double, std::complex<double>>{b.dgamma, b.ddelta};
      },
      py::arg("state"));
  m.def("closed_form", &opeflow::rg::closed_form, py::arg("state"), py::arg("t"));
  m.def("blowup_time", &opeflow::rg::blowup_time, py::arg("state"));
  m.def(
      "integrate",
      [](const opeflow::rg::CouplingState& s, double t_end, double dt) {
        const auto tr = opeflow::rg::integrate(s, t_end, dt);
        std::vector<std::tuple<double, double, double, double>> rows;
        rows.reserve(tr.times.size());
        for (std::size_t i = 0; i < tr.times.size(); ++i)
          rows.emplace_back(tr.times[i], tr.states[i].gamma, tr.states[i].delta.real(),
                            tr.states[i].delta.imag());
        return rows;
      },
      py::arg("state"), py::arg("t_end"), py::arg("dt"),
      "Fourth-order trajectory as (t, gamma, re_delta, im_delta) rows.");
  m.def(
      "classify_stability",
      [](const opeflow::rg::CouplingState& s, double horizon) {
        return std::string(opeflow::rg::stability_name(opeflow::rg::classify_stability(s, horizon)));
      },
      py::arg("state"), py::arg("horizon"));

  // --- observables
  m.def(
      "g_star_half_integer",
      [](double tau, int n, double tol) {
        return opeflow::obs::g_star_half_integer(opeflow::obs::ConductanceQuery::from_tau(tau, n, tol));
      },
      py::arg("tau"), py::arg("n") = 4, py::arg("tol") = 1e-15);
  m.def(
      "g_star_dual",
      [](double tau, int n, double tol) {
        return opeflow::obs::g_star_dual(opeflow::obs::ConductanceQuery::from_tau(tau, n, tol));
      },
      py::arg("tau"), py::arg("n") = 4, py::arg("tol") = 1e-15);
  m.def("g_star", &opeflow::obs::g_star, py::arg("tau"), py::arg("n") = 4,
        py::arg("tol") = 1e-15);
  m.def("sigma_xx_star", &opeflow::obs::sigma_xx_star, py::arg("n") = 4);
  m.def("square_deviation_check", [] {
    const auto r = opeflow::obs::square_deviation_check();
    py::dict d;
    d["g_square"] = r.g_square;
    d["reference"] = r.reference;
    d["band"] = r.band;
    d["gap"] = r.gap;
    d["gap_over_band"] = r.gap_over_band;
    d["exceeds_band"] = r.exceeds_band;
    d["leading_correction"] = r.leading_correction;
    return d;
  });
  m.def("kt_free_energy", &opeflow::obs::kt_free_energy, py::arg("n"), py::arg("ratio"));
  m.def("kt_vortex_energy", &opeflow::obs::kt_vortex_energy, py::arg("n"), py::arg("ratio"));
  m.def(
      "vortex_count_action",
      [](const std::vector<int>& charges, double delta_plus) {
        opeflow::obs::VortexConfiguration cfg;
        for (const int c : charges) cfg.vortices.push_back({0.0, 0.0, c});
        return opeflow::obs::vortex_count_action(cfg, delta_plus);
      },
      py::arg("charges"), py::arg("delta_plus"));

  // --- cylinder numerics
  m.def(
      "green_analytic",
      [](double x, double y, double xp, double yp, double L, double W, int kmax) {
        return opeflow::cyl::green_analytic(x, y, xp, yp, opeflow::cyl::CylinderGrid(8, 8, L, W),
                                            kmax);
      },
      py::arg("x"), py::arg("y"), py::arg("xp"), py::arg("yp"), py::arg("L") = 1.0,
      py::arg("W") = 1.0, py::arg("kmax") = 128);
  m.def("tree_conductance_analytic", &opeflow::cyl::tree_conductance_analytic, py::arg("n"),
        py::arg("L"), py::arg("W"));
  m.def(
      "tree_conductance_numeric",
      [](int size, int n, double L, double W) {
        return opeflow::cyl::tree_conductance_numeric(opeflow::cyl::CylinderGrid(size, size, L, W),
                                                      n);
      },
      py::arg("size"), py::arg("n") = 4, py::arg("L") = 1.0, py::arg("W") = 1.0);

  // --- acceptance suite
  m.def("verify_all", [] {
    const auto results = opeflow::verify::run_all();
    py::list rows;
    for (const auto& r : results) {
      py::dict d;
      d["id"] = r.id;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["detail"] = r.detail;
      rows.append(d);
    }
    return rows;
  });
}
