// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_HARNESS_HPP
#define FOSLS_HARNESS_HPP

#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fosls/space.hpp"
#include "fosls/types.hpp"

namespace fosls
{

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Raised when a configuration would exceed the resource caps.
class CapExceeded : public std::length_error
{
public:
  using std::length_error::length_error;
};

struct RunConfig
{
  std::string experiment = "solve";  // solve | convergence | pollution | trace | surface | coercivity
  std::string benchmark = "bessel";  // bessel | polynomial
  std::vector<double> k;
  std::vector<int> p_plus_1;
  std::vector<int> n;       // explicit meshes; empty when c is used
  std::optional<double> c;  // target k h / (p+1)
  int sigma = -1;
  std::string solver = "auto";
  double tol = 1e-10;
  int maxit = 20000;
  int threads = 1;
  int samples = 512;  // trace sample count
  double trace_y = 0.0;
  int grid = 101;  // surface samples per side
  long long max_dofs = 500000;
  double max_factor_gib = 8.0;
  long long probe_max_dofs = 200000;
  std::string out;

  // Throws ConfigError naming the offending key.
  void validate() const;

  bool operator==(const RunConfig &) const = default;
};

RunConfig parse_config(const nlohmann::json &j);
RunConfig parse_config_text(const std::string &text);
RunConfig load_config(const std::string &path);
nlohmann::ordered_json config_to_json(const RunConfig &cfg);

// 64-bit FNV-1a of the canonical config JSON, as 16 hex digits.
std::string config_hash(const RunConfig &cfg);

std::string code_version();

// Bytes of a complex sparse Cholesky factor, 16 * 6 N log2 N; an upper envelope of the
// fill measured on the uniform meshes for orders 1 to 4.
double estimated_factor_bytes(long long ndof);

struct ResourceCaps
{
  long long max_dofs = 500000;
  double max_factor_bytes = 8.0 * 1024 * 1024 * 1024;
  bool override_caps = false;

  static ResourceCaps from(const RunConfig &cfg, bool override_caps);
  // Throws CapExceeded unless overridden.
  void check(long long ndof) const;
};

// One solved configuration; serialized to one CSV row.
struct ResultRow
{
  double k = 0.0;
  int p_plus_1 = 0;
  int n = 0;
  double h = 0.0;
  double kh_over_p = 0.0;
  long long ndof = 0;
  double rel_err_u = 0.0;
  double rel_err_phi = 0.0;
  double residual = 0.0;
  int iters = 0;
  double time_s = 0.0;
  std::string status = "ok";  // ok | skipped | failed
  std::string message;        // reported in the metadata, not in the CSV
};

inline constexpr const char *kResultHeader =
    "k,p_plus_1,n,h,kh_over_p,ndof,rel_err_u,rel_err_phi,residual,iters,time_s,status";

std::string format_number(double v);
std::string csv_row(const ResultRow &row);
void emit_csv(const std::vector<ResultRow> &rows, const std::string &path);
void emit_meta(const nlohmann::ordered_json &meta, const std::string &path);

// Mesh size for (k, p+1): the explicit n, or the smallest n meeting cfg.c.
int cells_for(const RunConfig &cfg, double k, int p_plus_1, std::optional<int> n);

struct SolvedState
{
  std::shared_ptr<const FESpacePair> spaces;
  CVector coeff;
};

// Builds, assembles, solves and measures one configuration. Cap violations come back as
// skipped rows and solver or assembly errors as failed rows.
ResultRow run_single(const RunConfig &cfg, double k, int p_plus_1, int n,
                     const ResourceCaps &caps, SolvedState *state = nullptr);

std::vector<ResultRow> run_solve(const RunConfig &cfg, const ResourceCaps &caps);
std::vector<ResultRow> run_convergence(const RunConfig &cfg, const ResourceCaps &caps);
std::vector<ResultRow> run_pollution(const RunConfig &cfg, const ResourceCaps &caps);

struct OrderRow
{
  double k = 0.0;
  int p_plus_1 = 0;
  int n_coarse = 0, n_fine = 0;
  double order_u = 0.0, order_phi = 0.0;
};

inline constexpr const char *kOrderHeader = "k,p_plus_1,n_coarse,n_fine,order_u,order_phi";

// log(e1/e2) / log(h1/h2) between consecutive successful rows of equal (k, p+1).
std::vector<OrderRow> observed_orders(const std::vector<ResultRow> &rows);
void emit_orders_csv(const std::vector<OrderRow> &rows, const std::string &path);

struct SampleTable
{
  ResultRow row;
  bool grid = false;
  std::vector<double> x, y;
  std::vector<Complex> u, exact;
};

// Single configuration: first k, p+1 and mesh of the config.
SampleTable run_trace(const RunConfig &cfg, const ResourceCaps &caps);
SampleTable run_surface(const RunConfig &cfg, const ResourceCaps &caps);
// Headers x,re_u,im_u,re_u_exact,im_u_exact (trace) or x,y,re_u,... (surface).
void emit_samples_csv(const SampleTable &table, const std::string &path);

struct CoercivityRow
{
  double k = 0.0;
  int p_plus_1 = 0;
  int n = 0;
  int sigma = -1;
  long long ndof = 0;
  double lambda_min = 0.0;
  int iterations = 0;
  double time_s = 0.0;
  std::string status = "ok";
  std::string message;
};

inline constexpr const char *kCoercivityHeader =
    "k,p_plus_1,n,sigma,ndof,lambda_min,iterations,time_s,status";

std::vector<CoercivityRow> run_coercivity(const RunConfig &cfg, const ResourceCaps &caps);
void emit_coercivity_csv(const std::vector<CoercivityRow> &rows, const std::string &path);

// Quick end-to-end checks; prints one line per check and returns true when all pass.
bool run_selftest(std::ostream &os);

// Runs cfg.experiment and writes its CSV files plus meta.json into out_dir. Returns the
// number of rows that did not finish with status ok.
int run_experiment(const RunConfig &cfg, const std::string &out_dir, const ResourceCaps &caps,
                   std::ostream &log);

}  // namespace fosls

#endif  // FOSLS_HARNESS_HPP
