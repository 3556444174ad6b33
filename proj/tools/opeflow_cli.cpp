// Command-line front end: every operation of the library as a subcommand
// with machine-readable output (JSON or CSV), suitable for reproducing the
// verification numbers from a shell.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "opeflow/beta.hpp"
#include "opeflow/cylinder.hpp"
#include "opeflow/jsonout.hpp"
#include "opeflow/observables.hpp"
#include "opeflow/rgflow.hpp"
#include "opeflow/verify.hpp"

namespace {

using opeflow::io::JsonArray;
using opeflow::io::JsonObject;

/// Resolves the output target: "-" or empty means stdout; relative paths go
/// under $OPEFLOW_OUTDIR when that is set.
void emit(const std::string& path, const std::string& payload) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
    return;
  }
  std::string full = path;
  if (const char* dir = std::getenv("OPEFLOW_OUTDIR"); dir && *dir && path.front() != '/')
    full = std::string(dir) + "/" + path;
  std::ofstream out(full);
  if (!out) throw std::runtime_error("cannot open output file " + full);
  out << payload;
}

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
  throw CLI::ValidationError("operator must be one of OI, OA, O, M, T, J:<A>, Jb:<A>, MB:<B>");
}

int cmd_beta(int n, bool as_json, const std::string& out) {
  using namespace opeflow::ope;
  const BetaSystem b = beta_system();
  const CoeffPoly dg = b.dgamma.substituted(Sym::Level, Rational(n));
  const CoeffPoly dd = b.ddelta.substituted(Sym::Level, Rational(n));
  const CoeffPoly dl = b.dgamma_lambda.substituted(Sym::Level, Rational(n));

  // hard-coded closed forms for the cross-check
  const CoeffPoly want_dg = -CoeffPoly::sym(Sym::Delta, 2) * CoeffPoly::sym(Sym::Level, -2) *
                            (CoeffPoly(1) - CoeffPoly::sym(Sym::Gamma));
  const CoeffPoly want_dd = CoeffPoly::mono(Rational(1, 3), Monomial::of(Sym::Delta, 3) *
                                                                Monomial::of(Sym::Level, -2));
  const CoeffPoly want_dl =
      CoeffPoly::mono(Rational(4), Monomial::of(Sym::Pi, 1) * Monomial::of(Sym::Level, 1) *
                                       Monomial::of(Sym::Lambda, 1));
  const bool agrees = b.dgamma == want_dg && b.ddelta == want_dd && b.dgamma_lambda == want_dl;

  if (as_json) {
    JsonObject o;
    o.field("anchor", "flow-g flow-d");
    o.field("level", n);
    o.field("dgamma_dlna", dg.str());
    o.field("ddelta_dlna", dd.str());
    o.field("dgamma_dlna_lambda", dl.str());
    o.field("matches_closed_forms", agrees);
    o.field("two_trace_self_finite", b.two_trace_self_finite);
    o.field("radial_order_symmetric", b.radial_order_symmetric);
    emit(out, o.str());
  } else {
    std::ostringstream os;
    os << "dgamma/dln a  = " << dg.str() << "\n"
       << "ddelta/dln a  = " << dd.str() << "\n"
       << "lambda sector = " << dl.str() << "\n"
       << "matches closed forms: " << (agrees ? "yes" : "NO") << "\n";
    emit(out, os.str());
  }
  return agrees ? 0 : 1;
}

int cmd_ope(const std::string& first, const std::string& second, const std::string& point,
            bool as_json, const std::string& out) {
  using namespace opeflow::ope;
  const Expansion e =
      ope(vocab(first), vocab(second), RadialOrder::FirstOutermost, point);
  emit(out, as_json ? e.to_json() : e.str());
  return 0;
}

int cmd_flow(double gamma, double re_d, double im_d, int n, double t_end, double dt,
             int portrait, double gamma2, double re_d2, double im_d2, const std::string& out) {
  using namespace opeflow::rg;
  if (portrait <= 1) {
    const FlowTrajectory tr = integrate(CouplingState(gamma, {re_d, im_d}, n), t_end, dt);
    emit(out, trajectory_csv(tr));
    return 0;
  }
  std::vector<CouplingState> seeds;
  for (int i = 0; i < portrait; ++i) {
    const double f = static_cast<double>(i) / (portrait - 1);
    seeds.emplace_back(gamma + f * (gamma2 - gamma),
                       std::complex<double>(re_d + f * (re_d2 - re_d), im_d + f * (im_d2 - im_d)),
                       n);
  }
  emit(out, sweep_csv(seeds, t_end, dt));
  return 0;
}

int cmd_conductance(double tau, int n, double tol, bool curve, double tau_min, double tau_max,
                    int points, bool as_json, const std::string& out) {
  using namespace opeflow::obs;
  if (curve) {
    emit(out, conductance_curve_csv(tau_min, tau_max, points, n, tol));
    return 0;
  }
  const auto q = ConductanceQuery::from_tau(tau, n, tol);
  const double gh = g_star_half_integer(q);
  const double gd = g_star_dual(q);
  if (as_json) {
    JsonObject o;
    o.field("anchor", "G-sum");
    o.field("tau", tau);
    o.field("level", n);
    o.field("g_half_integer", gh);
    o.field("g_dual", gd);
    o.field("duality_residual", std::fabs(gh - gd));
    o.field("sigma_xx_star", sigma_xx_star(n));
    emit(out, o.str());
  } else {
    std::ostringstream os;
    os << "G*(" << opeflow::io::fmt_double(tau) << ") = " << opeflow::io::fmt_double(gh)
       << " (duality residual " << opeflow::io::fmt_double(std::fabs(gh - gd)) << ")\n";
    emit(out, os.str());
  }
  return 0;
}

int cmd_mfspectrum(int n, bool has_q, double q, double q_min, double q_max, int steps,
                   const std::string& out) {
  using namespace opeflow::ope;
  if (has_q) {
    JsonObject o;
    o.field("anchor", "Delta-q");
    o.field("level", n);
    o.field("q", q);
    o.field("delta_q", delta_q(q, n));
    emit(out, o.str());
    return 0;
  }
  std::ostringstream os;
  os << "q,delta_q\n";
  for (int i = 0; i < steps; ++i) {
    const double qq = q_min + (q_max - q_min) * i / (steps - 1);
    os << opeflow::io::fmt_double(qq) << "," << opeflow::io::fmt_double(delta_q(qq, n)) << "\n";
  }
  emit(out, os.str());
  return 0;
}

int cmd_kt(int n, double ratio, const std::string& out) {
  using namespace opeflow::obs;
  JsonObject o;
  o.field("anchor", "S-rel vort1");
  o.field("level", n);
  o.field("ratio", ratio);
  o.field("free_energy", kt_free_energy(n, ratio));
  o.field("vortex_energy", kt_vortex_energy(n, ratio));
  emit(out, o.str());
  return 0;
}

int cmd_laplacian(const std::vector<int>& sizes, int n, double L, double W,
                  const std::string& out) {
  using namespace opeflow::cyl;
  const auto rep = laplacian_check(sizes, n, L, W);
  JsonArray sz, ge, ce;
  for (std::size_t i = 0; i < rep.sizes.size(); ++i) {
    sz.push_raw(std::to_string(rep.sizes[i]));
    ge.push(rep.green_errors[i]);
    ce.push(rep.conductance_errors[i]);
  }
  JsonObject o;
  o.field("anchor", "ffGFn Gtree2");
  o.raw("sizes", sz.str());
  o.raw("green_errors", ge.str());
  o.raw("conductance_errors", ce.str());
  o.field("observed_order", rep.observed_order);
  emit(out, o.str());
  return 0;
}

int cmd_verify_all(bool as_json, const std::string& out) {
  const auto results = opeflow::verify::run_all();
  std::ostringstream os;
  for (const auto& r : results)
    os << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << " (" << r.name
       << "): " << r.detail << "\n";
  if (as_json) {
    emit(out, opeflow::verify::report_json(results));
    std::cerr << os.str();
  } else {
    emit(out, os.str());
  }
  return opeflow::verify::all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-product calculus and observables for the deformed current-algebra "
               "model of the plateau transition"};
  app.require_subcommand(1);

  std::string out = "-";
  const auto add_output = [&out](CLI::App* sub) {
    sub->add_option("--output,-o", out,
                    "output file ('-' = stdout; relative paths honor $OPEFLOW_OUTDIR)")
        ->capture_default_str();
  };

  // beta
  auto* beta = app.add_subcommand("beta", "symbolic flow equations, checked against the "
                                          "closed forms");
  int beta_n = 4;
  bool beta_json = false;
  beta->add_option("--n", beta_n, "current-algebra level")->check(CLI::PositiveNumber);
  beta->add_flag("--json", beta_json, "emit JSON");

  // ope
  auto* opec = app.add_subcommand("ope", "print an operator product expansion");
  std::string first = "OI", second = "OI", point = "z";
  bool ope_json = false;
  opec->add_option("--first", first, "probe operator (OI, OA, O, M, T, J:<A>, Jb:<A>, MB:<B>)");
  opec->add_option("--second", second, "base operator");
  opec->add_option("--point", point, "probe point label");
  opec->add_flag("--json", ope_json, "emit JSON");

  // flow
  auto* flow = app.add_subcommand("flow", "integrate the flow as CSV with columns "
                                          "t,gamma,re_delta,im_delta (phase-portrait sweeps "
                                          "via --portrait prepend a trajectory column)");
  double f_gamma = 1.0, f_re = 0.1, f_im = 0.0, f_tend = 50.0, f_dt = 0.01;
  double f_gamma2 = 0.9, f_re2 = 0.0, f_im2 = 0.1;
  int f_portrait = 0, f_n = 4;
  flow->add_option("--gamma", f_gamma, "initial gamma");
  flow->add_option("--re-delta", f_re, "initial Re delta");
  flow->add_option("--im-delta", f_im, "initial Im delta");
  flow->add_option("--n", f_n, "level")->check(CLI::PositiveNumber);
  flow->add_option("--t-end", f_tend, "integration horizon in ln a");
  flow->add_option("--dt", f_dt, "step size")->check(CLI::PositiveNumber);
  flow->add_option("--portrait", f_portrait, "number of seeds interpolated to the *2 values");
  flow->add_option("--gamma2", f_gamma2, "sweep end gamma");
  flow->add_option("--re-delta2", f_re2, "sweep end Re delta");
  flow->add_option("--im-delta2", f_im2, "sweep end Im delta");

  // conductance
  auto* cond = app.add_subcommand("conductance", "critical mean conductance G*(tau), point or "
                                                 "curve (CSV columns tau,g_half,g_dual,abs_diff)");
  double c_tau = 1.5707963267948966, c_tol = 1e-15, c_tmin = 0.05, c_tmax = 20.0;
  int c_n = 4, c_points = 200;
  bool c_curve = false, c_json = false;
  cond->add_option("--tau", c_tau, "aspect parameter 2 pi L / (n W)");
  cond->add_option("--n", c_n, "level")->check(CLI::PositiveNumber);
  cond->add_option("--tol", c_tol, "series truncation tolerance");
  cond->add_flag("--curve", c_curve, "emit a log-spaced curve instead of a point");
  cond->add_option("--tau-min", c_tmin, "curve start");
  cond->add_option("--tau-max", c_tmax, "curve end");
  cond->add_option("--points", c_points, "curve points");
  cond->add_flag("--json", c_json, "emit JSON");

  // mfspectrum
  auto* mf = app.add_subcommand("mfspectrum", "multifractal exponents q(1-q)/n");
  int m_n = 4, m_steps = 141;
  double m_q = 0.0, m_qmin = -3.0, m_qmax = 4.0;
  bool m_has_q = false;
  mf->add_option("--n", m_n, "level")->check(CLI::PositiveNumber);
  auto* qopt = mf->add_option("--q", m_q, "single moment order (otherwise a CSV table)");
  mf->add_option("--q-min", m_qmin, "table start");
  mf->add_option("--q-max", m_qmax, "table end");
  mf->add_option("--steps", m_steps, "table rows")->check(CLI::Range(2, 100000));

  // kt
  auto* kt = app.add_subcommand("kt", "vortex free energy and energy cost");
  int k_n = 4;
  double k_ratio = 2.0;
  kt->add_option("--n", k_n, "level")->check(CLI::PositiveNumber);
  kt->add_option("--ratio", k_ratio, "a_ir / a_uv");

  // laplacian-check
  auto* lap = app.add_subcommand("laplacian-check", "finite-difference convergence report");
  std::vector<int> l_sizes{32, 64};
  int l_n = 4;
  double l_L = 1.0, l_W = 1.0;
  lap->add_option("--sizes", l_sizes, "grid sizes")->delimiter(',');
  lap->add_option("--n", l_n, "level")->check(CLI::PositiveNumber);
  lap->add_option("--L", l_L, "cylinder length");
  lap->add_option("--W", l_W, "cylinder circumference");

  // verify-all
  auto* ver = app.add_subcommand("verify-all", "run the full acceptance suite");
  bool v_json = false;
  ver->add_flag("--json", v_json, "emit deterministic JSON (pass/fail lines go to stderr)");

  add_output(beta);
  add_output(opec);
  add_output(flow);
  add_output(cond);
  add_output(mf);
  add_output(kt);
  add_output(lap);
  add_output(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2; // validation failures exit 2, --help exits 0
  }

  try {
    if (beta->parsed()) return cmd_beta(beta_n, beta_json, out);
    if (opec->parsed()) return cmd_ope(first, second, point, ope_json, out);
    if (flow->parsed())
      return cmd_flow(f_gamma, f_re, f_im, f_n, f_tend, f_dt, f_portrait, f_gamma2, f_re2,
                      f_im2, out);
    if (cond->parsed())
      return cmd_conductance(c_tau, c_n, c_tol, c_curve, c_tmin, c_tmax, c_points, c_json, out);
    if (mf->parsed()) {
      m_has_q = qopt->count() > 0;
      return cmd_mfspectrum(m_n, m_has_q, m_q, m_qmin, m_qmax, m_steps, out);
    }
    if (kt->parsed()) return cmd_kt(k_n, k_ratio, out);
    if (lap->parsed()) return cmd_laplacian(l_sizes, l_n, l_L, l_W, out);
    if (ver->parsed()) return cmd_verify_all(v_json, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
