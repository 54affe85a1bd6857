// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pbbem/quadrature.hpp"

namespace pbbem
{

Vector reaction_potential(const TraceSolution &solution, const SurfaceMesh &mesh,
                          const PhysicalParams &params, const std::vector<Vec3> &points,
                          int quad_order)
{
  const TraceSolution in = to_side(solution, Side::Interior, params);
  const int n = mesh.num_vertices();
  if (in.dirichlet.size() != n || in.neumann.size() != n)
  {
    throw ValidationError("trace length does not match mesh vertex count");
  }
  for (std::size_t k = 0; k < points.size(); ++k)
  {
    if (distance_to_surface(mesh, points[k]) < 1e-6)
    {
      throw SingularityError("evaluation point " + std::to_string(k + 1) +
                             " lies within 1e-6 Å of the surface");
    }
  }
  const TriangleRule rule = regular_rule(quad_order);
  const Kernel lap = Kernel::laplace();
  Vector out = Vector::Zero(static_cast<int>(points.size()));
#pragma omp parallel for schedule(static)
  for (int p = 0; p < static_cast<int>(points.size()); ++p)
  {
    const Vec3 &x = points[p];
    double acc = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t)
    {
      const auto &tri = mesh.triangle(t);
      const Vec3 &p0 = mesh.vertex(tri[0]);
      const Vec3 e1 = mesh.vertex(tri[1]) - p0;
      const Vec3 e2 = mesh.vertex(tri[2]) - p0;
      const Vec3 &nrm = mesh.normal(t);
      const double jac = 2.0 * mesh.area(t);
      for (std::size_t q = 0; q < rule.size(); ++q)
      {
        const double s = rule.points[q].x(), u = rule.points[q].y();
        const double basis[3] = {1.0 - s - u, s, u};
        double gd = 0.0, gn = 0.0;
        for (int k = 0; k < 3; ++k)
        {
          gd += basis[k] * in.dirichlet[tri[k]];
          gn += basis[k] * in.neumann[tri[k]];
        }
        const Vec3 y = p0 + s * e1 + u * e2;
        acc += rule.weights[q] * jac *
               (greens(lap, x, y) * gn - greens_normal_y(lap, x, y, nrm) * gd);
      }
    }
    out[p] = acc;
  }
  return out;
}

double solvation_energy(const ChargeSet &charges, const Vector &phi_reac)
{
  if (static_cast<std::size_t>(phi_reac.size()) != charges.size())
  {
    throw ValidationError("solvation energy needs one reaction potential per charge (" +
                          std::to_string(charges.size()) + " charges, " +
                          std::to_string(phi_reac.size()) + " values)");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < charges.size(); ++j)
  {
    s += charges.atoms[j].charge * phi_reac[static_cast<int>(j)];
  }
  return 0.5 * coulomb_kcal * 4.0 * std::numbers::pi * s;
}

SpectrumReport spectrum(const Matrix &a, const Preconditioner &p, const SpectrumOptions &options)
{
  if (a.rows() > options.max_dimension && !options.override_guard)
  {
    throw ValidationError("spectrum of a " + std::to_string(a.rows()) +
                          "-dimensional system exceeds the dense guard of " +
                          std::to_string(options.max_dimension));
  }
  SpectrumReport report;
  report.matrix = p.is_identity() ? "raw" : "preconditioned";
  const Matrix pa = p.apply(a);
  Eigen::EigenSolver<Matrix> es(pa, false);
  if (es.info() != Eigen::Success)
  {
    throw ValidationError("eigenvalue iteration did not converge");
  }
  report.eigenvalues.assign(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
  const Vector sv = Eigen::BDCSVD<Matrix>(pa).singularValues();
  const double smin = sv.minCoeff();
  report.condition_number =
      smin > 0.0 ? sv.maxCoeff() / smin : std::numeric_limits<double>::infinity();
  return report;
}

std::vector<Complex> predict_accumulation(const CaseSpec &spec, const PhysicalParams &params)
{
  const double ee = params.eps_ext, ei = params.eps_int;
  if (is_calderon(spec.preconditioner))
  {
    if (spec.scaled)
    {
      return {1.0};
    }
    const CalderonVariant v = calderon_variant(spec.preconditioner);
    if (v == CalderonVariant::Full)
    {
      return {0.5 + ee / (4 * ei) + ei / (4 * ee)};
    }
    const Scaling s = half_calderon_points(spec.formulation, v, params);
    return {s[0], s[1]};
  }
  if (spec.preconditioner == PreconditionerKind::ScaledMass)
  {
    return {1.0};
  }
  const double r = ei / ee;
  switch (spec.formulation)
  {
    case FormulationKind::Juffer:
      return {0.5 * (1 + 1 / r), 0.5 * (1 + r)};
    case FormulationKind::Lu:
      return {0.5 * (1 + r), 0.5 * (1 + r)};
    case FormulationKind::MullerInternal:
    case FormulationKind::MullerExternal:
      return {1.0, 1.0};
    case FormulationKind::CfieInternal:
    case FormulationKind::CfieExternal:
      if (spec.alpha != -1.0 && spec.beta != -1.0)
      {
        return {0.5 * (1 + spec.alpha), 0.5 * (1 + spec.beta)};
      }
      return {};
    default:
      return {};
  }
}

void write_spectrum(std::ostream &out, const SpectrumReport &report)
{
  out << std::setprecision(17);
  out << "# case=" << report.case_id << " matrix=" << report.matrix
      << " condition=" << report.condition_number << " predicted=";
  for (std::size_t i = 0; i < report.predicted_points.size(); ++i)
  {
    out << (i ? ";" : "") << report.predicted_points[i].real() << ':'
        << report.predicted_points[i].imag();
  }
  out << '\n';
  for (const auto &z : report.eigenvalues)
  {
    out << z.real() << ',' << z.imag() << '\n';
  }
}

void write_spectrum(const std::string &path, const SpectrumReport &report)
{
  std::ofstream f(path);
  if (!f)
  {
    throw ValidationError("cannot open spectrum file " + path);
  }
  write_spectrum(f, report);
}

std::vector<Cluster> find_clusters(const std::vector<Complex> &values, int count,
                                   double rel_radius)
{
  const int n = static_cast<int>(values.size());
  std::vector<char> taken(n, 0);
  std::vector<Cluster> out;
  auto radius = [&](int i) { return rel_radius * std::abs(values[i]) + 1e-12; };
  for (int c = 0; c < count; ++c)
  {
    int best = -1, best_count = 0;
    for (int i = 0; i < n; ++i)
    {
      if (taken[i])
      {
        continue;
      }
      int k = 0;
      for (int j = 0; j < n; ++j)
      {
        k += !taken[j] && std::abs(values[j] - values[i]) <= radius(i);
      }
      if (k > best_count)
      {
        best = i;
        best_count = k;
      }
    }
    if (best < 0)
    {
      break;
    }
    std::vector<int> members;
    for (int j = 0; j < n; ++j)
    {
      if (!taken[j] && std::abs(values[j] - values[best]) <= radius(best))
      {
        members.push_back(j);
      }
    }
    int medoid = best;
    double best_sum = std::numeric_limits<double>::infinity();
    for (int i : members)
    {
      double s = 0.0;
      for (int j : members)
      {
        s += std::abs(values[i] - values[j]);
      }
      if (s < best_sum)
      {
        best_sum = s;
        medoid = i;
      }
    }
    for (int j : members)
    {
      taken[j] = 1;
    }
    out.push_back({values[medoid], static_cast<int>(members.size())});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Cluster &a, const Cluster &b) { return a.size > b.size; });
  return out;
}

}  // namespace pbbem
