// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_RUNNER_HPP
#define PBBEM_RUNNER_HPP

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pbbem/postprocess.hpp"
#include "pbbem/solver.hpp"

namespace pbbem
{

struct SphereInput
{
  double radius = 4.0;
  int level = 2;

  bool operator==(const SphereInput &) const = default;
};

// "R:LEVEL", e.g. "4:3".
SphereInput parse_sphere(std::string_view text);

// Either a PQR file plus a mesh, or a generated icosphere. A sphere without a PQR file carries
// one unit charge at its centre.
struct RunInput
{
  std::optional<std::filesystem::path> pqr;
  std::optional<std::filesystem::path> mesh;
  MeshFormat mesh_format = MeshFormat::Off;
  std::optional<SphereInput> sphere;

  bool operator==(const RunInput &) const = default;
};

struct Problem
{
  SurfaceMesh mesh;
  ChargeSet charges;
};

// Loads and validates the input; every charge must lie strictly inside the mesh.
Problem load_problem(const RunInput &input);

struct RunConfig
{
  RunInput input;
  std::optional<std::string> case_id;
  std::optional<CaseSpec> explicit_spec;
  PhysicalParams params;
  GmresOptions solver;
  QuadratureOrders orders;
  PreconditionerOptions preconditioner;
  std::optional<std::filesystem::path> results_path;
  std::optional<std::filesystem::path> spectrum_path;
  bool spectrum = false;  // also implied by spectrum_path
  SpectrumOptions spectrum_options;

  // Exactly one of case_id / explicit_spec. Throws ValidationError otherwise.
  CaseSpec resolve() const;
};

struct PhaseTimings
{
  double lhs = 0.0;
  double rhs = 0.0;
  double preconditioner = 0.0;
  double gmres = 0.0;
  double energy = 0.0;
  double total = 0.0;
};

struct RunReport
{
  std::string case_id;
  int dof = 0;  // 2 × vertices
  PhaseTimings timings;
  int iterations = 0;
  double time_per_iteration = 0.0;
  double delta_g = 0.0;  // kcal/mol
  bool converged = false;
  std::string error;
  std::optional<SpectrumReport> spectrum;
  TraceSolution traces;
};

// Full pipeline on a fresh operator context. Input and validation errors propagate as
// exceptions; non-convergence is reported. Appends a CSV row when results_path is set.
RunReport run_case(const RunConfig &config);

// Pipeline on an existing context whose mesh and parameters match the charges. Operators the
// context has already assembled are not re-timed.
RunReport run_case_on(const OperatorContext &ctx, const ChargeSet &charges,
                      const RunConfig &config);

// Sequential runs sharing one context across consecutive configs with equal input, parameters
// and orders. A failing case is recorded in its row and the suite continues.
std::vector<RunReport> run_suite(const std::vector<RunConfig> &configs, std::ostream &csv);

inline constexpr const char *csv_header =
    "case,dof,t_lhs,t_rhs,t_precond,t_gmres,t_energy,t_total,iterations,t_per_iter,"
    "delta_G_kcal_mol,converged";

void write_csv_header(std::ostream &out);
void write_csv_row(std::ostream &out, const RunReport &report);

}  // namespace pbbem

#endif  // PBBEM_RUNNER_HPP
