// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace pbbem
{

namespace
{

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void append_row(const std::filesystem::path &path, const RunReport &report)
{
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f)
  {
    throw ValidationError("cannot open results file " + path.string());
  }
  if (fresh)
  {
    write_csv_header(f);
  }
  write_csv_row(f, report);
}

}  // namespace

SphereInput parse_sphere(std::string_view text)
{
  const auto colon = text.find(':');
  SphereInput s;
  try
  {
    if (colon == std::string_view::npos)
    {
      throw std::invalid_argument("missing ':'");
    }
    std::size_t used = 0;
    const std::string r(text.substr(0, colon)), l(text.substr(colon + 1));
    s.radius = std::stod(r, &used);
    if (used != r.size())
    {
      throw std::invalid_argument("radius");
    }
    s.level = std::stoi(l, &used);
    if (used != l.size())
    {
      throw std::invalid_argument("level");
    }
  }
  catch (const std::exception &)
  {
    throw ValidationError("sphere spec must be R:LEVEL, got '" + std::string(text) + "'");
  }
  if (!(s.radius > 0.0) || s.level < 0 || s.level > 7)
  {
    throw ValidationError("sphere needs radius > 0 and level in 0..7");
  }
  return s;
}

Problem load_problem(const RunInput &input)
{
  const bool has_mesh = input.mesh.has_value();
  if (has_mesh == input.sphere.has_value())
  {
    throw ValidationError("give exactly one of a mesh file or a sphere");
  }
  Problem p{has_mesh ? load_mesh(*input.mesh, input.mesh_format)
                     : generate_icosphere(input.sphere->radius, input.sphere->level),
            {}};
  if (input.pqr)
  {
    p.charges = load_pqr(*input.pqr);
  }
  else if (input.sphere)
  {
    p.charges.atoms.push_back({Vec3::Zero(), 1.0, 1.0});
  }
  else
  {
    throw ValidationError("a mesh file needs a PQR file with the charges");
  }
  if (p.charges.empty())
  {
    throw ValidationError("no charges in input");
  }
  validate_containment(p.mesh, p.charges);
  return p;
}

CaseSpec RunConfig::resolve() const
{
  if (case_id.has_value() == explicit_spec.has_value())
  {
    throw ValidationError("give exactly one of a case id or an explicit formulation");
  }
  return case_id ? find_case(*case_id) : *explicit_spec;
}

RunReport run_case_on(const OperatorContext &ctx, const ChargeSet &charges,
                      const RunConfig &config)
{
  const CaseSpec spec = config.resolve();
  const FormulationSpec fspec{spec.formulation, spec.alpha, spec.beta};
  const int n = ctx.size();
  RunReport report;
  report.case_id = spec.id;
  report.dof = 2 * n;
  const auto start = Clock::now();

  auto t0 = Clock::now();
  ctx.interior();
  ctx.exterior();
  BlockSystem system = build_named(fspec, ctx, SourceProjection{Vector::Zero(n), Vector::Zero(n)});
  report.timings.lhs = since(t0);

  t0 = Clock::now();
  const auto sources = project_sources(charges, ctx.mesh(), ctx.params().eps_int,
                                       ctx.orders().regular);
  system.b = build_rhs(fspec, ctx.params(), sources);
  report.timings.rhs = since(t0);

  t0 = Clock::now();
  const Preconditioner p = make_preconditioner(spec, system, ctx, config.preconditioner);
  report.timings.preconditioner = since(t0);

  const SolveReport solve = gmres(system.A, p, system.b, config.solver);
  report.timings.gmres = solve.seconds;
  report.iterations = solve.iterations;
  report.converged = solve.converged;
  report.time_per_iteration = solve.iterations > 0 ? solve.seconds / solve.iterations : 0.0;

  t0 = Clock::now();
  report.traces = split_solution(system, solve.solution);
  std::vector<Vec3> points;
  points.reserve(charges.size());
  for (const auto &a : charges.atoms)
  {
    points.push_back(a.position);
  }
  const Vector phi = reaction_potential(report.traces, ctx.mesh(), ctx.params(), points,
                                        ctx.orders().regular);
  report.delta_g = solvation_energy(charges, phi);
  report.timings.energy = since(t0);
  report.timings.total = since(start);

  if (config.spectrum || config.spectrum_path)
  {
    SpectrumReport s = spectrum(system.A, p, config.spectrum_options);
    s.case_id = spec.id;
    s.predicted_points = predict_accumulation(spec, ctx.params());
    if (config.spectrum_path)
    {
      write_spectrum(config.spectrum_path->string(), s);
    }
    report.spectrum = std::move(s);
  }
  return report;
}

RunReport run_case(const RunConfig &config)
{
  config.resolve();
  const auto start = Clock::now();
  Problem problem = load_problem(config.input);
  OperatorContext ctx(std::move(problem.mesh), config.params, config.orders);
  const double setup = since(start);
  RunReport report = run_case_on(ctx, problem.charges, config);
  report.timings.lhs += setup;
  report.timings.total += setup;
  if (config.results_path)
  {
    append_row(*config.results_path, report);
  }
  return report;
}

std::vector<RunReport> run_suite(const std::vector<RunConfig> &configs, std::ostream &csv)
{
  write_csv_header(csv);
  std::vector<RunReport> out;
  std::unique_ptr<OperatorContext> ctx;
  std::optional<Problem> problem;
  const RunConfig *owner = nullptr;
  for (const auto &config : configs)
  {
    RunReport report;
    try
    {
      const bool reuse = owner && owner->input == config.input &&
                         owner->params.eps_int == config.params.eps_int &&
                         owner->params.eps_ext == config.params.eps_ext &&
                         owner->params.kappa == config.params.kappa &&
                         owner->orders == config.orders;
      double setup = 0.0;
      if (!reuse)
      {
        ctx.reset();
        owner = nullptr;
        const auto start = Clock::now();
        problem = load_problem(config.input);
        ctx = std::make_unique<OperatorContext>(problem->mesh, config.params, config.orders);
        owner = &config;
        setup = since(start);
      }
      report = run_case_on(*ctx, problem->charges, config);
      report.timings.lhs += setup;
      report.timings.total += setup;
    }
    catch (const std::exception &e)
    {
      report.case_id = config.case_id.value_or(config.explicit_spec ? config.explicit_spec->id : "");
      report.converged = false;
      report.delta_g = std::nan("");
      report.error = e.what();
    }
    write_csv_row(csv, report);
    if (config.results_path)
    {
      append_row(*config.results_path, report);
    }
    out.push_back(std::move(report));
  }
  return out;
}

void write_csv_header(std::ostream &out)
{
  out << csv_header << '\n';
}

void write_csv_row(std::ostream &out, const RunReport &r)
{
  std::ostringstream s;
  s << r.case_id << ',' << r.dof << std::fixed << std::setprecision(6) << ',' << r.timings.lhs
    << ',' << r.timings.rhs << ',' << r.timings.preconditioner << ',' << r.timings.gmres << ','
    << r.timings.energy << ',' << r.timings.total << ',' << r.iterations << ','
    << r.time_per_iteration << ',' << std::setprecision(8) << r.delta_g << ','
    << (r.converged ? "true" : "false") << '\n';
  out << s.str();
}

}  // namespace pbbem
