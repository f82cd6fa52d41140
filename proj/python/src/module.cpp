// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

// Python bindings: experiment driver, single solves, trace sampling and the coercivity probe.

#include <memory>
#include <sstream>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fosls/harness.hpp"
#include "fosls/manufactured.hpp"
#include "fosls/mesh.hpp"
#include "fosls/metrics.hpp"
#include "fosls/solve.hpp"

namespace py = pybind11;
using namespace fosls;

namespace
{

py::dict row_to_dict(const ResultRow &r)
{
  py::dict d;
  d["k"] = r.k;
  d["p_plus_1"] = r.p_plus_1;
  d["n"] = r.n;
  d["h"] = r.h;
  d["kh_over_p"] = r.kh_over_p;
  d["ndof"] = r.ndof;
  d["rel_err_u"] = r.rel_err_u;
  d["rel_err_phi"] = r.rel_err_phi;
  d["residual"] = r.residual;
  d["iters"] = r.iters;
  d["time_s"] = r.time_s;
  d["status"] = r.status;
  d["message"] = r.message;
  return d;
}

RunConfig single_config(double k, int p_plus_1, int n, int sigma, const std::string &benchmark,
                        const std::string &solver)
{
  RunConfig cfg;
  cfg.benchmark = benchmark;
  cfg.k = {k};
  cfg.p_plus_1 = {p_plus_1};
  cfg.n = {n};
  cfg.sigma = sigma;
  cfg.solver = solver;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "FOSLS finite elements for the 2D Helmholtz equation with Robin data";

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_MemoryError);
  (void)config_error;

  m.def("version", &code_version);
  m.def("solver_backend", &HermitianFactorization::backend);
  m.def("bessel_j0", &bessel_j0, py::arg("x"));
  m.def("bessel_j1", &bessel_j1, py::arg("x"));
  m.def("predicted_ndof", &predicted_ndof, py::arg("n"), py::arg("p_plus_1"));

  m.def(
      "canonical_config",
      [](const std::string &text) { return config_to_json(parse_config_text(text)).dump(); },
      py::arg("text"), "Validate a JSON config and return it with all defaults filled in.");
  m.def(
      "config_hash", [](const std::string &text) { return config_hash(parse_config_text(text)); },
      py::arg("text"));

  m.def(
      "run_experiment",
      [](const std::string &text, const std::string &out_dir, bool override_caps)
      {
        const RunConfig cfg = parse_config_text(text);
        py::gil_scoped_release release;
        std::ostringstream log;
        return run_experiment(cfg, out_dir, ResourceCaps::from(cfg, override_caps), log);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("override_caps") = false,
      "Run the experiment named in the JSON config, writing CSV files and meta.json to out_dir. "
      "Returns the number of rows that did not finish with status ok.");

  m.def(
      "solve",
      [](double k, int p_plus_1, int n, int sigma, const std::string &benchmark,
         const std::string &solver)
      {
        const RunConfig cfg = single_config(k, p_plus_1, n, sigma, benchmark, solver);
        ResultRow row;
        {
          py::gil_scoped_release release;
          row = run_single(cfg, k, p_plus_1, n, ResourceCaps{});
        }
        return row_to_dict(row);
      },
      py::arg("k"), py::arg("p_plus_1"), py::arg("n"), py::arg("sigma") = -1,
      py::arg("benchmark") = "bessel", py::arg("solver") = "auto",
      "Solve one configuration and return its result row as a dict.");

  m.def(
      "trace",
      [](double k, int p_plus_1, int n, double y, int samples, int sigma)
      {
        RunConfig cfg = single_config(k, p_plus_1, n, sigma, "bessel", "auto");
        cfg.experiment = "trace";
        cfg.trace_y = y;
        cfg.samples = samples;
        cfg.validate();
        SampleTable t;
        {
          py::gil_scoped_release release;
          t = run_trace(cfg, ResourceCaps{});
        }
        if (t.row.status != "ok")
        {
          throw std::runtime_error("trace: " + t.row.status + ": " + t.row.message);
        }
        return py::make_tuple(t.x, t.u, t.exact);
      },
      py::arg("k"), py::arg("p_plus_1"), py::arg("n"), py::arg("y") = 0.0,
      py::arg("samples") = 512, py::arg("sigma") = -1,
      "Sample u_h and the exact u along the line at height y; returns (x, u_h, u_exact).");

  m.def(
      "coercivity",
      [](double k, int p_plus_1, int n, int sigma, long long max_dofs)
      {
        py::gil_scoped_release release;
        auto mesh = std::make_shared<const Mesh>(build_uniform_mesh(DomainBox{}, n));
        const FESpacePair sp = build_spaces(mesh, p_plus_1);
        return coercivity_probe(sp, k, sigma, max_dofs).lambda_min;
      },
      py::arg("k"), py::arg("p_plus_1"), py::arg("n"), py::arg("sigma") = -1,
      py::arg("max_dofs") = 200000, "Smallest eigenvalue of the discrete coercivity pencil.");
}
