// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include "fosls/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "fosls/assembly.hpp"
#include "fosls/manufactured.hpp"
#include "fosls/mesh.hpp"
#include "fosls/metrics.hpp"
#include "fosls/solve.hpp"

#ifndef FOSLS_VERSION
#define FOSLS_VERSION "0.0.0"
#endif

namespace fosls
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::set<std::string> kExperiments = {"solve",  "convergence", "pollution",
                                            "trace",  "surface",     "coercivity"};

template <typename T>
T get_scalar(const nlohmann::json &j, const std::string &key)
{
  try
  {
    if constexpr (std::is_same_v<T, std::string>)
    {
      if (!j.is_string())
      {
        throw ConfigError("");
      }
    }
    else if constexpr (std::is_integral_v<T>)
    {
      if (!j.is_number_integer())
      {
        throw ConfigError("");
      }
    }
    else
    {
      if (!j.is_number())
      {
        throw ConfigError("");
      }
    }
    return j.get<T>();
  }
  catch (const std::exception &)
  {
    throw ConfigError("config: key '" + key + "' has the wrong type");
  }
}

// Scalar or list of scalars.
template <typename T>
std::vector<T> get_list(const nlohmann::json &j, const std::string &key)
{
  std::vector<T> out;
  if (j.is_array())
  {
    for (const auto &e : j)
    {
      out.push_back(get_scalar<T>(e, key));
    }
    if (out.empty())
    {
      throw ConfigError("config: key '" + key + "' must be a nonempty list");
    }
  }
  else
  {
    out.push_back(get_scalar<T>(j, key));
  }
  return out;
}

std::ofstream open_output(const std::string &path)
{
  const std::filesystem::path p(path);
  if (p.has_parent_path())
  {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
  {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  return os;
}

ExactSolution make_exact(const RunConfig &cfg, double k)
{
  if (cfg.benchmark == "polynomial")
  {
    return polynomial_exact(k, cfg.sigma);
  }
  return bessel_exact(k, cfg.sigma);
}

// (k, p+1, n) triples in configuration order.
struct Case
{
  double k;
  int p_plus_1;
  int n;
};

std::vector<Case> cases(const RunConfig &cfg)
{
  std::vector<Case> out;
  for (const double k : cfg.k)
  {
    for (const int q : cfg.p_plus_1)
    {
      if (cfg.n.empty())
      {
        out.push_back({k, q, cells_for(cfg, k, q, std::nullopt)});
      }
      for (const int n : cfg.n)
      {
        out.push_back({k, q, n});
      }
    }
  }
  return out;
}

}  // namespace

void RunConfig::validate() const
{
  auto fail = [](const std::string &key, const std::string &what)
  { throw ConfigError("config: key '" + key + "' " + what); };
  if (!kExperiments.count(experiment))
  {
    fail("experiment", "must be one of solve, convergence, pollution, trace, surface, coercivity");
  }
  if (benchmark != "bessel" && benchmark != "polynomial")
  {
    fail("benchmark", "must be bessel or polynomial");
  }
  if (k.empty())
  {
    fail("k", "is required");
  }
  for (const double v : k)
  {
    if (!(v > 0.0) || !std::isfinite(v))
    {
      fail("k", "must be positive and finite");
    }
  }
  if (p_plus_1.empty())
  {
    fail("p_plus_1", "is required");
  }
  for (const int q : p_plus_1)
  {
    if (q < 1 || q > 4)
    {
      fail("p_plus_1", "must lie in 1..4");
    }
  }
  for (const int v : n)
  {
    if (v < 1)
    {
      fail("n", "must be >= 1");
    }
  }
  if (c && !(*c > 0.0 && std::isfinite(*c)))
  {
    fail("c", "must be positive and finite");
  }
  if (!n.empty() && c)
  {
    fail("c", "cannot be combined with 'n'");
  }
  if (n.empty() && !c)
  {
    fail("n", "or 'c' is required");
  }
  if (experiment == "convergence" && n.empty())
  {
    fail("n", "must be a nonempty list for convergence");
  }
  if (experiment == "pollution" && !c)
  {
    fail("c", "is required for pollution");
  }
  if (sigma != 1 && sigma != -1)
  {
    fail("sigma", "must be 1 or -1");
  }
  try
  {
    parse_solver_kind(solver);
  }
  catch (const std::exception &)
  {
    fail("solver", "must be auto, direct or cg");
  }
  if (!(tol > 0.0))
  {
    fail("tol", "must be positive");
  }
  if (maxit < 0)
  {
    fail("maxit", "must be >= 0");
  }
  if (threads < 1)
  {
    fail("threads", "must be >= 1");
  }
  if (samples < 2)
  {
    fail("samples", "must be >= 2");
  }
  if (!DomainBox{}.contains(Vec2(0.0, trace_y)))
  {
    fail("trace_y", "must lie inside the domain");
  }
  if (grid < 2)
  {
    fail("grid", "must be >= 2");
  }
  if (max_dofs < 1)
  {
    fail("max_dofs", "must be positive");
  }
  if (!(max_factor_gib > 0.0))
  {
    fail("max_factor_gib", "must be positive");
  }
  if (probe_max_dofs < 1)
  {
    fail("probe_max_dofs", "must be positive");
  }
}

RunConfig parse_config(const nlohmann::json &j)
{
  if (!j.is_object())
  {
    throw ConfigError("config: top level must be a JSON object");
  }
  RunConfig cfg;
  for (const auto &[key, v] : j.items())
  {
    if (key == "experiment")
      cfg.experiment = get_scalar<std::string>(v, key);
    else if (key == "benchmark")
      cfg.benchmark = get_scalar<std::string>(v, key);
    else if (key == "k")
      cfg.k = get_list<double>(v, key);
    else if (key == "p_plus_1")
      cfg.p_plus_1 = get_list<int>(v, key);
    else if (key == "n")
      cfg.n = get_list<int>(v, key);
    else if (key == "c")
      cfg.c = get_scalar<double>(v, key);
    else if (key == "sigma")
      cfg.sigma = get_scalar<int>(v, key);
    else if (key == "solver")
      cfg.solver = get_scalar<std::string>(v, key);
    else if (key == "tol")
      cfg.tol = get_scalar<double>(v, key);
    else if (key == "maxit")
      cfg.maxit = get_scalar<int>(v, key);
    else if (key == "threads")
      cfg.threads = get_scalar<int>(v, key);
    else if (key == "samples")
      cfg.samples = get_scalar<int>(v, key);
    else if (key == "trace_y")
      cfg.trace_y = get_scalar<double>(v, key);
    else if (key == "grid")
      cfg.grid = get_scalar<int>(v, key);
    else if (key == "max_dofs")
      cfg.max_dofs = get_scalar<long long>(v, key);
    else if (key == "max_factor_gib")
      cfg.max_factor_gib = get_scalar<double>(v, key);
    else if (key == "probe_max_dofs")
      cfg.probe_max_dofs = get_scalar<long long>(v, key);
    else if (key == "out")
      cfg.out = get_scalar<std::string>(v, key);
    else
      throw ConfigError("config: unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_text(const std::string &text)
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw ConfigError("config: cannot read " + path);
  }
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::ordered_json config_to_json(const RunConfig &cfg)
{
  nlohmann::ordered_json j;
  j["experiment"] = cfg.experiment;
  j["benchmark"] = cfg.benchmark;
  j["k"] = cfg.k;
  j["p_plus_1"] = cfg.p_plus_1;
  if (!cfg.n.empty())
  {
    j["n"] = cfg.n;
  }
  if (cfg.c)
  {
    j["c"] = *cfg.c;
  }
  j["sigma"] = cfg.sigma;
  j["solver"] = cfg.solver;
  j["tol"] = cfg.tol;
  j["maxit"] = cfg.maxit;
  j["threads"] = cfg.threads;
  j["samples"] = cfg.samples;
  j["trace_y"] = cfg.trace_y;
  j["grid"] = cfg.grid;
  j["max_dofs"] = cfg.max_dofs;
  j["max_factor_gib"] = cfg.max_factor_gib;
  j["probe_max_dofs"] = cfg.probe_max_dofs;
  if (!cfg.out.empty())
  {
    j["out"] = cfg.out;
  }
  return j;
}

std::string config_hash(const RunConfig &cfg)
{
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char ch : config_to_json(cfg).dump())
  {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

std::string code_version() { return FOSLS_VERSION; }

double estimated_factor_bytes(long long ndof)
{
  const double n = static_cast<double>(std::max(2LL, ndof));
  return 16.0 * 6.0 * n * std::log2(n);
}

ResourceCaps ResourceCaps::from(const RunConfig &cfg, bool override_caps)
{
  ResourceCaps caps;
  caps.max_dofs = cfg.max_dofs;
  caps.max_factor_bytes = cfg.max_factor_gib * 1024.0 * 1024.0 * 1024.0;
  caps.override_caps = override_caps;
  return caps;
}

void ResourceCaps::check(long long ndof) const
{
  if (override_caps)
  {
    return;
  }
  if (ndof > max_dofs)
  {
    throw CapExceeded(fmt::format("{} unknowns exceed the cap of {} (use --override-caps)", ndof,
                                  max_dofs));
  }
  const double bytes = estimated_factor_bytes(ndof);
  if (bytes > max_factor_bytes)
  {
    throw CapExceeded(fmt::format(
        "estimated factorization memory {:.2f} GiB exceeds the cap of {:.2f} GiB (use --override-caps)",
        bytes / 1073741824.0, max_factor_bytes / 1073741824.0));
  }
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::string csv_row(const ResultRow &r)
{
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", format_number(r.k), r.p_plus_1, r.n,
                     format_number(r.h), format_number(r.kh_over_p), r.ndof,
                     format_number(r.rel_err_u), format_number(r.rel_err_phi),
                     format_number(r.residual), r.iters, format_number(r.time_s), r.status);
}

void emit_csv(const std::vector<ResultRow> &rows, const std::string &path)
{
  std::ofstream os = open_output(path);
  os << kResultHeader << '\n';
  for (const ResultRow &r : rows)
  {
    os << csv_row(r) << '\n';
  }
}

void emit_meta(const nlohmann::ordered_json &meta, const std::string &path)
{
  std::ofstream os = open_output(path);
  os << meta.dump(2) << '\n';
}

int cells_for(const RunConfig &cfg, double k, int p_plus_1, std::optional<int> n)
{
  if (n)
  {
    return *n;
  }
  if (!cfg.c)
  {
    throw ConfigError("config: key 'n' or 'c' is required");
  }
  return cells_for_condition(DomainBox{}, k, p_plus_1, *cfg.c);
}

ResultRow run_single(const RunConfig &cfg, double k, int p_plus_1, int n,
                     const ResourceCaps &caps, SolvedState *state)
{
  const DomainBox box;
  ResultRow row;
  row.k = k;
  row.p_plus_1 = p_plus_1;
  row.n = n;
  row.h = std::hypot(box.width() / n, box.height() / n);
  row.kh_over_p = k * row.h / p_plus_1;
  row.ndof = predicted_ndof(n, p_plus_1);
  try
  {
    caps.check(row.ndof);
  }
  catch (const CapExceeded &e)
  {
    row.status = "skipped";
    row.message = e.what();
    return row;
  }

  const auto t0 = Clock::now();
  try
  {
    const ExactSolution exact = make_exact(cfg, k);
    auto mesh = std::make_shared<const Mesh>(build_uniform_mesh(box, n));
    auto spaces = std::make_shared<const FESpacePair>(build_spaces(mesh, p_plus_1));
    AssemblyOptions aopts;
    aopts.threads = cfg.threads;
    const FoslsSystem sys = assemble(spaces, exact.problem(), aopts);
    SolverOptions sopts;
    sopts.kind = parse_solver_kind(cfg.solver);
    sopts.tol = cfg.tol;
    sopts.maxit = cfg.maxit;
    SolveResult res = solve(sys, sopts);
    const ErrorReport rep = compute_errors(*spaces, res.x, exact);
    row.h = rep.h;
    row.kh_over_p = rep.kh_over_p;
    row.ndof = rep.ndof;
    row.rel_err_u = rep.rel_err_u;
    row.rel_err_phi = rep.rel_err_phi;
    row.residual = rep.fosls_residual;
    row.iters = res.report.iterations;
    if (state)
    {
      state->spaces = spaces;
      state->coeff = std::move(res.x);
    }
  }
  catch (const std::exception &e)
  {
    row.status = "failed";
    row.message = e.what();
  }
  row.time_s = seconds_since(t0);
  return row;
}

std::vector<ResultRow> run_solve(const RunConfig &cfg, const ResourceCaps &caps)
{
  std::vector<ResultRow> rows;
  for (const Case &c : cases(cfg))
  {
    rows.push_back(run_single(cfg, c.k, c.p_plus_1, c.n, caps));
  }
  return rows;
}

std::vector<ResultRow> run_convergence(const RunConfig &cfg, const ResourceCaps &caps)
{
  if (cfg.n.empty())
  {
    throw ConfigError("config: key 'n' must be a nonempty list for convergence");
  }
  return run_solve(cfg, caps);
}

std::vector<ResultRow> run_pollution(const RunConfig &cfg, const ResourceCaps &caps)
{
  if (!cfg.c)
  {
    throw ConfigError("config: key 'c' is required for pollution");
  }
  return run_solve(cfg, caps);
}

std::vector<OrderRow> observed_orders(const std::vector<ResultRow> &rows)
{
  std::vector<OrderRow> out;
  for (std::size_t i = 1; i < rows.size(); i++)
  {
    const ResultRow &a = rows[i - 1], &b = rows[i];
    if (a.k != b.k || a.p_plus_1 != b.p_plus_1 || a.status != "ok" || b.status != "ok" ||
        a.h == b.h)
    {
      continue;
    }
    OrderRow o;
    o.k = a.k;
    o.p_plus_1 = a.p_plus_1;
    o.n_coarse = a.n;
    o.n_fine = b.n;
    const double lh = std::log(a.h / b.h);
    o.order_u = std::log(a.rel_err_u / b.rel_err_u) / lh;
    o.order_phi = std::log(a.rel_err_phi / b.rel_err_phi) / lh;
    out.push_back(o);
  }
  return out;
}

void emit_orders_csv(const std::vector<OrderRow> &rows, const std::string &path)
{
  std::ofstream os = open_output(path);
  os << kOrderHeader << '\n';
  for (const OrderRow &o : rows)
  {
    os << fmt::format("{},{},{},{},{},{}\n", format_number(o.k), o.p_plus_1, o.n_coarse,
                      o.n_fine, format_number(o.order_u), format_number(o.order_phi));
  }
}

namespace
{

SampleTable solve_for_samples(const RunConfig &cfg, const ResourceCaps &caps, SolvedState &st)
{
  const double k = cfg.k.front();
  const int q = cfg.p_plus_1.front();
  const int n = cells_for(cfg, k, q, cfg.n.empty() ? std::nullopt : std::optional(cfg.n.front()));
  SampleTable table;
  table.row = run_single(cfg, k, q, n, caps, &st);
  if (table.row.status == "skipped")
  {
    throw CapExceeded(table.row.message);
  }
  if (table.row.status != "ok")
  {
    throw std::runtime_error(table.row.message);
  }
  return table;
}

}  // namespace

SampleTable run_trace(const RunConfig &cfg, const ResourceCaps &caps)
{
  SolvedState st;
  SampleTable table = solve_for_samples(cfg, caps, st);
  const ExactSolution exact = make_exact(cfg, cfg.k.front());
  for (const TraceSample &s : sample_trace(*st.spaces, st.coeff, cfg.trace_y, cfg.samples))
  {
    table.x.push_back(s.x);
    table.y.push_back(cfg.trace_y);
    table.u.push_back(s.u);
    table.exact.push_back(exact.u(Vec2(s.x, cfg.trace_y)));
  }
  return table;
}

SampleTable run_surface(const RunConfig &cfg, const ResourceCaps &caps)
{
  SolvedState st;
  SampleTable table = solve_for_samples(cfg, caps, st);
  table.grid = true;
  const ExactSolution exact = make_exact(cfg, cfg.k.front());
  for (const GridSample &s : sample_grid(*st.spaces, st.coeff, cfg.grid))
  {
    table.x.push_back(s.x);
    table.y.push_back(s.y);
    table.u.push_back(s.u);
    table.exact.push_back(exact.u(Vec2(s.x, s.y)));
  }
  return table;
}

void emit_samples_csv(const SampleTable &table, const std::string &path)
{
  std::ofstream os = open_output(path);
  os << (table.grid ? "x,y,re_u,im_u,re_u_exact,im_u_exact" : "x,re_u,im_u,re_u_exact,im_u_exact")
     << '\n';
  for (std::size_t i = 0; i < table.x.size(); i++)
  {
    os << format_number(table.x[i]) << ',';
    if (table.grid)
    {
      os << format_number(table.y[i]) << ',';
    }
    os << format_number(table.u[i].real()) << ',' << format_number(table.u[i].imag()) << ','
       << format_number(table.exact[i].real()) << ',' << format_number(table.exact[i].imag())
       << '\n';
  }
}

std::vector<CoercivityRow> run_coercivity(const RunConfig &cfg, const ResourceCaps &caps)
{
  std::vector<CoercivityRow> rows;
  for (const Case &c : cases(cfg))
  {
    CoercivityRow row;
    row.k = c.k;
    row.p_plus_1 = c.p_plus_1;
    row.n = c.n;
    row.sigma = cfg.sigma;
    row.ndof = predicted_ndof(c.n, c.p_plus_1);
    const auto t0 = Clock::now();
    try
    {
      caps.check(row.ndof);
      auto mesh = std::make_shared<const Mesh>(build_uniform_mesh(DomainBox{}, c.n));
      const FESpacePair spaces = build_spaces(mesh, c.p_plus_1);
      const CoercivityResult res = coercivity_probe(
          spaces, c.k, cfg.sigma, caps.override_caps ? spaces.ndof() : cfg.probe_max_dofs);
      row.lambda_min = res.lambda_min;
      row.iterations = res.iterations;
    }
    catch (const std::length_error &e)
    {
      row.status = "skipped";
      row.message = e.what();
    }
    catch (const std::exception &e)
    {
      row.status = "failed";
      row.message = e.what();
    }
    row.time_s = seconds_since(t0);
    rows.push_back(row);
  }
  return rows;
}

void emit_coercivity_csv(const std::vector<CoercivityRow> &rows, const std::string &path)
{
  std::ofstream os = open_output(path);
  os << kCoercivityHeader << '\n';
  for (const CoercivityRow &r : rows)
  {
    os << fmt::format("{},{},{},{},{},{},{},{},{}\n", format_number(r.k), r.p_plus_1, r.n,
                      r.sigma, r.ndof, format_number(r.lambda_min), r.iterations,
                      format_number(r.time_s), r.status);
  }
}

bool run_selftest(std::ostream &os)
{
  bool all = true;
  auto report = [&](const std::string &name, bool ok, const std::string &detail)
  {
    os << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    all = all && ok;
  };
  auto guarded = [&](const std::string &name, auto &&fn)
  {
    try
    {
      fn();
    }
    catch (const std::exception &e)
    {
      report(name, false, e.what());
    }
  };

  guarded("polynomial exactness",
          [&]
          {
            RunConfig cfg;
            cfg.benchmark = "polynomial";
            cfg.sigma = 1;
            cfg.k = {3.0};
            cfg.p_plus_1 = {2};
            cfg.n = {2};
            const ResultRow r = run_single(cfg, 3.0, 2, 2, ResourceCaps{});
            report("polynomial exactness", r.status == "ok" && r.rel_err_u <= 1e-8,
                   fmt::format("rel_err_u = {:.3e}", r.rel_err_u));
          });
  guarded("hermitian system",
          [&]
          {
            auto mesh = std::make_shared<const Mesh>(build_uniform_mesh(DomainBox{}, 4));
            auto spaces = std::make_shared<const FESpacePair>(build_spaces(mesh, 2));
            const FoslsSystem sys = assemble(spaces, bessel_exact(10.0).problem());
            const double d = hermitian_defect(sys.B);
            HermitianFactorization chol(sys.B);
            report("hermitian system", d <= 1e-12,
                   fmt::format("defect = {:.3e}, factorization ok", d));
          });
  guarded("bessel first zero",
          [&]
          {
            double a = 2.0, b = 3.0;
            for (int i = 0; i < 200 && b - a > 1e-15; i++)
            {
              const double m = 0.5 * (a + b);
              (bessel_j0(a) * bessel_j0(m) <= 0.0 ? b : a) = m;
            }
            const double z = 0.5 * (a + b);
            report("bessel first zero", std::abs(z - 2.404825557695773) <= 1e-10,
                   fmt::format("zero = {:.15f}", z));
          });
  guarded("bessel benchmark",
          [&]
          {
            RunConfig cfg;
            cfg.k = {5.0};
            cfg.p_plus_1 = {2};
            cfg.n = {8};
            const ResultRow r = run_single(cfg, 5.0, 2, 8, ResourceCaps{});
            report("bessel benchmark", r.status == "ok" && r.rel_err_u < 5e-3,
                   fmt::format("k = 5, p+1 = 2, n = 8: rel_err_u = {:.3e}", r.rel_err_u));
          });
  os << "solver backend: " << HermitianFactorization::backend() << '\n';
  return all;
}

int run_experiment(const RunConfig &cfg, const std::string &out_dir, const ResourceCaps &caps,
                   std::ostream &log)
{
  cfg.validate();
  const auto t0 = Clock::now();
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  nlohmann::ordered_json meta;
  meta["experiment"] = cfg.experiment;
  meta["version"] = code_version();
  meta["config_hash"] = config_hash(cfg);
  meta["config"] = config_to_json(cfg);
  meta["solver_backend"] = HermitianFactorization::backend();
  meta["override_caps"] = caps.override_caps;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  nlohmann::ordered_json row_times = nlohmann::ordered_json::array();
  nlohmann::ordered_json issues = nlohmann::ordered_json::array();
  int not_ok = 0;

  auto note_rows = [&](const std::vector<ResultRow> &rows)
  {
    for (const ResultRow &r : rows)
    {
      row_times.push_back(r.time_s);
      log << fmt::format("k={} p+1={} n={} ndof={} rel_err_u={:.3e} rel_err_phi={:.3e} {}\n",
                         format_number(r.k), r.p_plus_1, r.n, r.ndof, r.rel_err_u,
                         r.rel_err_phi, r.status);
      if (r.status != "ok")
      {
        not_ok++;
        issues.push_back({{"k", r.k}, {"p_plus_1", r.p_plus_1}, {"n", r.n},
                          {"status", r.status}, {"message", r.message}});
        log << "  " << r.message << '\n';
      }
    }
  };
  auto write_rows = [&](const std::vector<ResultRow> &rows, const std::string &name)
  {
    note_rows(rows);
    emit_csv(rows, (dir / name).string());
    files.push_back(name);
  };

  if (cfg.experiment == "solve")
  {
    write_rows(run_solve(cfg, caps), "results.csv");
  }
  else if (cfg.experiment == "convergence")
  {
    const std::vector<ResultRow> rows = run_convergence(cfg, caps);
    write_rows(rows, "convergence.csv");
    emit_orders_csv(observed_orders(rows), (dir / "convergence_orders.csv").string());
    files.push_back("convergence_orders.csv");
  }
  else if (cfg.experiment == "pollution")
  {
    write_rows(run_pollution(cfg, caps), "pollution.csv");
  }
  else if (cfg.experiment == "trace" || cfg.experiment == "surface")
  {
    const bool trace = cfg.experiment == "trace";
    const SampleTable table = trace ? run_trace(cfg, caps) : run_surface(cfg, caps);
    write_rows({table.row}, cfg.experiment + "_summary.csv");
    emit_samples_csv(table, (dir / (cfg.experiment + ".csv")).string());
    files.push_back(cfg.experiment + ".csv");
    meta["sample_count"] = table.x.size();
  }
  else if (cfg.experiment == "coercivity")
  {
    const std::vector<CoercivityRow> rows = run_coercivity(cfg, caps);
    for (const CoercivityRow &r : rows)
    {
      row_times.push_back(r.time_s);
      log << fmt::format("k={} p+1={} n={} sigma={} ndof={} lambda_min={:.6e} iterations={} {}\n",
                         format_number(r.k), r.p_plus_1, r.n, r.sigma, r.ndof, r.lambda_min,
                         r.iterations, r.status);
      if (r.status != "ok")
      {
        not_ok++;
        issues.push_back({{"k", r.k}, {"p_plus_1", r.p_plus_1}, {"n", r.n},
                          {"status", r.status}, {"message", r.message}});
        log << "  " << r.message << '\n';
      }
    }
    emit_coercivity_csv(rows, (dir / "coercivity.csv").string());
    files.push_back("coercivity.csv");
  }

  meta["files"] = files;
  meta["issues"] = issues;
  meta["timings"] = {{"total_s", seconds_since(t0)}, {"rows_s", row_times}};
  emit_meta(meta, (dir / "meta.json").string());
  return not_ok;
}

}  // namespace fosls
