#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tisim/app.hpp"

namespace py = pybind11;
using namespace tisim;

namespace {

TIParams params(double A, double delta, double eps_b) { return {A, delta, eps_b}; }

}  // namespace

PYBIND11_MODULE(tisim, m) {
  m.doc() = "TI thin-film band structure and its NV-register quantum simulation";
  m.attr("__version__") = kVersion;

  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def("h_ti", [](double A, double delta, double eps_b, double kx, double ky) {
    return build_h_ti(params(A, delta, eps_b), {kx, ky});
  }, py::arg("A"), py::arg("delta"), py::arg("eps_b"), py::arg("kx"), py::arg("ky"));

  m.def("spectrum", [](double A, double delta, double eps_b, double kx, double ky) {
    const auto r = spectrum_exact(params(A, delta, eps_b), {kx, ky});
    return std::vector<double>(r.E.begin(), r.E.end());
  }, py::arg("A"), py::arg("delta"), py::arg("eps_b"), py::arg("kx") = 0.0, py::arg("ky") = 0.0);

  m.def("bands", [](double A, double delta, double eps_b, double kx, double ky_min, double ky_max, int steps) {
    const auto t = band_scan(params(A, delta, eps_b), kx, ky_min, ky_max, steps);
    Eigen::MatrixXd e(t.ky.size(), 4);
    for (size_t i = 0; i < t.ky.size(); ++i)
      for (int j = 0; j < 4; ++j) e(i, j) = t.E[i][j];
    return py::make_tuple(t.ky, e);
  }, py::arg("A") = 1.0, py::arg("delta") = 1.0, py::arg("eps_b") = 0.0, py::arg("kx") = 0.0,
     py::arg("ky_min") = -2.0, py::arg("ky_max") = 2.0, py::arg("steps") = 101);

  m.def("dirac_points", [](double A, double delta, double eps_b) { return dirac_points(params(A, delta, eps_b)); },
        py::arg("A"), py::arg("delta"), py::arg("eps_b"));

  m.def("minimal_gap", [](double A, double delta, double eps_b) {
    const auto g = minimal_gap(params(A, delta, eps_b));
    return py::make_tuple(g.gap, to_string(g.phase));
  }, py::arg("A"), py::arg("delta"), py::arg("eps_b"));

  m.def("winding", [](double A, double delta, double eps_b, double kx, double ky, double radius, int points, int band) {
    const auto w = winding_number(params(A, delta, eps_b), circle_loop(kx, ky, radius, points), band);
    return py::dict(py::arg("winding") = w.winding, py::arg("berry_phase") = w.berry_phase,
                    py::arg("residue") = w.residue);
  }, py::arg("A"), py::arg("delta"), py::arg("eps_b"), py::arg("kx"), py::arg("ky"), py::arg("radius") = 0.2,
     py::arg("points") = 200, py::arg("band") = 1);

  m.def("controlled_u", [](double A, double delta, double eps_b, double kx, double ky, double t, int n, bool exact_u) {
    const TIParams p = params(A, delta, eps_b);
    auto plan = make_plan(p, t, n);
    plan.exact_u = exact_u;
    return compile_controlled_u(plan, p, {kx, ky}).unitary;
  }, py::arg("A"), py::arg("delta"), py::arg("eps_b"), py::arg("kx"), py::arg("ky"), py::arg("t"),
     py::arg("n") = 2, py::arg("exact_u") = false);

  m.def("signal", [](double A, double delta, double eps_b, double kx, double ky, int index, const std::string& tier,
                     int n, int M, bool exact_u, std::uint64_t seed) {
    InputStateSpec st;
    st.index = index;
    SignalOptions o;
    o.tier = parse_tier(tier);
    o.n = n;
    o.M = M;
    o.exact_u = exact_u;
    o.seed = seed;
    o.noise.seed = seed;
    const auto r = run_signal(st, params(A, delta, eps_b), {kx, ky}, o);
    return py::make_tuple(r.t, r.g, r.stderr_);
  }, py::arg("A"), py::arg("delta"), py::arg("eps_b"), py::arg("kx"), py::arg("ky"), py::arg("index") = 0,
     py::arg("tier") = "gate", py::arg("n") = 2, py::arg("M") = 256, py::arg("exact_u") = false, py::arg("seed") = 0);

  m.def("extract", [](const std::vector<std::complex<double>>& g, double dt, const std::string& window, double threshold) {
    ExtractOptions o;
    o.window = window;
    o.threshold = threshold;
    return extract_spectrum(g, dt, o).to_json().dump();
  }, py::arg("g"), py::arg("dt"), py::arg("window") = "hann", py::arg("threshold") = 0.02,
     "spectral peaks as a JSON string");

  m.def("fidelity", [](int n) {
    const auto s = fidelity_sweep(FidelityGrid{}, n, 1);
    return py::make_tuple(s.min_fidelity, s.mean_fidelity);
  }, py::arg("n") = 2);

  m.def("timing", [](double A, double delta, double eps_b, double kx, double ky, double t, int n) {
    const TIParams p = params(A, delta, eps_b);
    const auto r = schedule_timing(full_run_schedule(make_plan(p, t, n, Tier::Pulse), p, {kx, ky}, NVParams{}));
    return py::dict(py::arg("total_us") = r.total_us, py::arg("rf_us") = r.rf_us, py::arg("mw_us") = r.mw_us,
                    py::arg("free_us") = r.free_us);
  }, py::arg("A") = 1.0, py::arg("delta") = 1.0, py::arg("eps_b") = 0.57, py::arg("kx") = 0.0, py::arg("ky") = 0.5,
     py::arg("t") = 1.0, py::arg("n") = 2);

  m.def("cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> all{"tisim"};
    all.insert(all.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (auto& s : all) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "run a command line; returns (exit code, stdout, stderr)");
}
