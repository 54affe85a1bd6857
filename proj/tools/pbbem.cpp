// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pbbem/runner.hpp"

using namespace pbbem;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_no_convergence = 3;

std::filesystem::path spectrum_path_for(const std::filesystem::path &base, const std::string &id)
{
  std::filesystem::path out = base;
  out.replace_filename(base.stem().string() + "_" + id + base.extension().string());
  return out;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Galerkin BEM solver for the linearized Poisson-Boltzmann equation"};

  std::string pqr, mesh, mesh_format = "off", sphere, case_id, formulation, preconditioner;
  std::string spectrum, out, juffer = "identity";
  double alpha = 0.0, beta = 0.0;
  PhysicalParams params;
  GmresOptions solver;
  QuadratureOrders orders;
  QuadratureOrders relaxed = relaxed_orders;

  app.add_option("--pqr", pqr, "PQR file with charges and radii");
  app.add_option("--mesh", mesh, "surface mesh file (OFF) or MSMS stem");
  app.add_option("--mesh-format", mesh_format, "off or msms")->capture_default_str();
  app.add_option("--sphere", sphere, "icosphere R:LEVEL instead of a mesh file");
  app.add_option("--case", case_id, "case id 1-26, 20b, 23b, or 'all'");
  app.add_option("--formulation", formulation, "explicit formulation name");
  app.add_option("--preconditioner", preconditioner,
                 "explicit preconditioner, optionally with +scaled_mass and +fast");
  app.add_option("--alpha", alpha, "CFIE alpha");
  app.add_option("--beta", beta, "CFIE beta");
  app.add_option("--eps-int", params.eps_int, "solute permittivity")->capture_default_str();
  app.add_option("--eps-ext", params.eps_ext, "solvent permittivity")->capture_default_str();
  app.add_option("--kappa", params.kappa, "inverse Debye length [1/Å]")->capture_default_str();
  app.add_option("--tol", solver.tol, "GMRES relative tolerance")->capture_default_str();
  app.add_option("--max-iter", solver.max_iter, "GMRES iteration cap (0: system size)");
  app.add_option("--quad-regular", orders.regular, "regular quadrature order")
      ->capture_default_str();
  app.add_option("--quad-singular", orders.singular, "singular quadrature order")
      ->capture_default_str();
  app.add_option("--relaxed-regular", relaxed.regular, "fast Calderón regular order")
      ->capture_default_str();
  app.add_option("--relaxed-singular", relaxed.singular, "fast Calderón singular order")
      ->capture_default_str();
  app.add_option("--juffer-scaling", juffer, "identity or unhalved")->capture_default_str();
  app.add_option("--spectrum", spectrum, "write the eigenvalue spectrum to PATH");
  app.add_option("--out", out, "append result rows to this CSV file");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return exit_input;
  }

  try
  {
    RunConfig base;
    if (!pqr.empty())
    {
      base.input.pqr = pqr;
    }
    if (!mesh.empty())
    {
      base.input.mesh = mesh;
      base.input.mesh_format = parse_mesh_format(mesh_format);
    }
    if (!sphere.empty())
    {
      base.input.sphere = parse_sphere(sphere);
    }
    params.validate();
    base.params = params;
    base.solver = solver;
    base.orders = orders;
    base.preconditioner.relaxed = relaxed;
    if (juffer == "identity")
    {
      base.preconditioner.juffer = JufferScaling::Identity;
    }
    else if (juffer == "unhalved")
    {
      base.preconditioner.juffer = JufferScaling::Unhalved;
    }
    else
    {
      throw ValidationError("--juffer-scaling must be identity or unhalved");
    }
    if (!out.empty())
    {
      base.results_path = out;
    }

    if (!case_id.empty() && !formulation.empty())
    {
      throw ValidationError("give either --case or --formulation, not both");
    }
    if (case_id.empty() && formulation.empty())
    {
      throw ValidationError("one of --case or --formulation is required");
    }

    if (case_id == "all")
    {
      std::vector<RunConfig> configs;
      for (const auto &id : case_ids())
      {
        RunConfig c = base;
        c.case_id = id;
        if (!spectrum.empty())
        {
          c.spectrum_path = spectrum_path_for(spectrum, id);
        }
        configs.push_back(std::move(c));
      }
      const auto reports = run_suite(configs, std::cout);
      int code = exit_ok;
      for (const auto &r : reports)
      {
        if (!r.error.empty())
        {
          std::cerr << "case " << r.case_id << ": " << r.error << '\n';
          code = exit_input;
        }
        else if (!r.converged && code == exit_ok)
        {
          code = exit_no_convergence;
        }
      }
      return code;
    }

    RunConfig config = base;
    if (!case_id.empty())
    {
      config.case_id = case_id;
    }
    else
    {
      const auto choice = parse_preconditioner_choice(preconditioner.empty() ? "none"
                                                                             : preconditioner);
      CaseSpec spec;
      spec.formulation = parse_formulation(formulation);
      spec.preconditioner = choice.kind;
      spec.scaled = choice.scaled;
      spec.fast = choice.fast;
      spec.alpha = alpha;
      spec.beta = beta;
      spec.id = formulation + "/" + (preconditioner.empty() ? "none" : preconditioner);
      config.explicit_spec = spec;
    }
    if (!spectrum.empty())
    {
      config.spectrum_path = spectrum;
    }
    const RunReport report = run_case(config);
    write_csv_header(std::cout);
    write_csv_row(std::cout, report);
    if (!report.converged)
    {
      std::cerr << "GMRES did not converge in " << report.iterations << " iterations\n";
      return exit_no_convergence;
    }
    return exit_ok;
  }
  catch (const ParseError &e)
  {
    std::cerr << "input error: " << e.what() << '\n';
  }
  catch (const ValidationError &e)
  {
    std::cerr << "input error: " << e.what() << '\n';
  }
  catch (const SingularityError &e)
  {
    std::cerr << "input error: " << e.what() << '\n';
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
  }
  return exit_input;
}
