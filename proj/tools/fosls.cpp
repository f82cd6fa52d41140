// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end for the FOSLS Helmholtz experiments.

#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "fosls/assembly.hpp"
#include "fosls/harness.hpp"
#include "fosls/manufactured.hpp"
#include "fosls/mesh.hpp"

namespace
{

struct CommonOptions
{
  std::string config;
  std::string out;
  bool override_caps = false;
  bool dump_system = false;
};

void add_common(CLI::App *sub, CommonOptions &opts)
{
  sub->add_option("--config", opts.config, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", opts.out, "Output directory (default: config 'out' or results/<command>)");
  sub->add_flag("--override-caps", opts.override_caps,
                "Lift the DOF and factorization-memory caps");
}

// Writes B and the right-hand side of the first case in coordinate text form.
void dump_first_system(const fosls::RunConfig &cfg, const fosls::ResourceCaps &caps,
                       const std::filesystem::path &dir)
{
  const double k = cfg.k.front();
  const int q = cfg.p_plus_1.front();
  const int n = fosls::cells_for(
      cfg, k, q, cfg.n.empty() ? std::nullopt : std::optional<int>(cfg.n.front()));
  caps.check(fosls::predicted_ndof(n, q));
  auto mesh = std::make_shared<const fosls::Mesh>(fosls::build_uniform_mesh(fosls::DomainBox{}, n));
  auto spaces = std::make_shared<const fosls::FESpacePair>(fosls::build_spaces(mesh, q));
  const fosls::ExactSolution exact = cfg.benchmark == "polynomial"
                                         ? fosls::polynomial_exact(k, cfg.sigma)
                                         : fosls::bessel_exact(k, cfg.sigma);
  const fosls::FoslsSystem sys = fosls::assemble(spaces, exact.problem());
  std::filesystem::create_directories(dir);
  fosls::dump_system(sys, (dir / "system_matrix.txt").string(), (dir / "system_rhs.txt").string());
}

int run(const std::string &experiment, const CommonOptions &opts)
{
  fosls::RunConfig cfg = fosls::load_config(opts.config);
  if (cfg.experiment != experiment)
  {
    // A config without an explicit tag defaults to "solve"; any other tag must match.
    if (cfg.experiment != "solve")
    {
      throw fosls::ConfigError("config: key 'experiment' is '" + cfg.experiment +
                               "' but the command is '" + experiment + "'");
    }
    cfg.experiment = experiment;
    cfg.validate();
  }
  const std::string out =
      !opts.out.empty() ? opts.out : (!cfg.out.empty() ? cfg.out : "results/" + experiment);
  const fosls::ResourceCaps caps = fosls::ResourceCaps::from(cfg, opts.override_caps);
  if (opts.dump_system)
  {
    dump_first_system(cfg, caps, out);
  }
  const int not_ok = fosls::run_experiment(cfg, out, caps, std::cout);
  std::cout << "wrote " << out << (not_ok ? " (" + std::to_string(not_ok) + " rows not ok)" : "")
            << '\n';
  return not_ok == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"FOSLS finite elements for the 2D Helmholtz equation with Robin data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fosls::code_version());

  CommonOptions opts;
  const char *experiments[][2] = {
      {"solve", "Solve each (k, p+1, mesh) of the config and report errors"},
      {"convergence", "Mesh refinement study at fixed k with observed orders"},
      {"pollution", "Error against k at a fixed resolution ratio c = k h/(p+1)"},
      {"trace", "Sample Re/Im u_h and the exact u along y = trace_y"},
      {"surface", "Sample u_h and the exact u on a grid"},
      {"coercivity", "Smallest eigenvalue of the discrete coercivity pencil"},
  };
  for (const auto &e : experiments)
  {
    CLI::App *sub = app.add_subcommand(e[0], e[1]);
    add_common(sub, opts);
    if (std::string(e[0]) == "solve")
    {
      sub->add_flag("--dump-system", opts.dump_system,
                    "Also write the first system as system_matrix.txt and system_rhs.txt");
    }
  }
  CLI::App *selftest = app.add_subcommand("selftest", "Run quick built-in checks");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (selftest->parsed())
    {
      return fosls::run_selftest(std::cout) ? 0 : 1;
    }
    for (const auto &e : experiments)
    {
      if (app.got_subcommand(e[0]))
      {
        return run(e[0], opts);
      }
    }
  }
  catch (const fosls::ConfigError &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (const fosls::CapExceeded &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
