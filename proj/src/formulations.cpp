// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/formulations.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pbbem/quadrature.hpp"

namespace pbbem
{

namespace
{

constexpr double inv_4pi = 0.25 * std::numbers::inv_pi;

struct KindName
{
  FormulationKind kind;
  const char *name;
};

constexpr KindName kind_names[] = {
    {FormulationKind::DirectInternal, "direct_internal"},
    {FormulationKind::DirectExternal, "direct_external"},
    {FormulationKind::DirectInternalPermuted, "direct_internal_permuted"},
    {FormulationKind::DirectExternalPermuted, "direct_external_permuted"},
    {FormulationKind::CfieInternal, "cfie_internal"},
    {FormulationKind::CfieExternal, "cfie_external"},
    {FormulationKind::Juffer, "juffer"},
    {FormulationKind::Lu, "lu"},
    {FormulationKind::MullerInternal, "muller_internal"},
    {FormulationKind::MullerExternal, "muller_external"},
    {FormulationKind::PmchwtInternal, "pmchwt_internal"},
    {FormulationKind::PmchwtExternal, "pmchwt_external"},
};

void swap_block_rows(BlockSystem &s)
{
  const int n = s.block_size();
  s.A.topRows(n).swap(s.A.bottomRows(n));
  s.b.head(n).swap(s.b.tail(n));
}

std::optional<std::array<double, 2>> cfie_identity(double alpha, double beta)
{
  const double a = 0.5 * (1.0 + alpha);
  const double b = 0.5 * (1.0 + beta);
  if (a == 0.0 || b == 0.0)
  {
    return std::nullopt;
  }
  return std::array<double, 2>{a, b};
}

}  // namespace

std::string to_string(Side side)
{
  return side == Side::Interior ? "interior" : "exterior";
}

std::string to_string(FormulationKind kind)
{
  for (const auto &kn : kind_names)
  {
    if (kn.kind == kind)
    {
      return kn.name;
    }
  }
  return "unknown";
}

FormulationKind parse_formulation(std::string_view name)
{
  for (const auto &kn : kind_names)
  {
    if (name == kn.name)
    {
      return kn.kind;
    }
  }
  std::ostringstream msg;
  msg << "unknown formulation '" << name << "'; expected one of:";
  for (const auto &kn : kind_names)
  {
    msg << ' ' << kn.name;
  }
  throw ValidationError(msg.str());
}

SourceProjection project_sources(const ChargeSet &charges, const SurfaceMesh &mesh,
                                 double eps_int, int quad_order)
{
  for (std::size_t k = 0; k < charges.size(); ++k)
  {
    const double d = distance_to_surface(mesh, charges.atoms[k].position);
    if (d < 1e-6)
    {
      throw SingularityError("charge " + std::to_string(k + 1) + " lies within 1e-6 Å of the surface");
    }
  }
  const TriangleRule rule = regular_rule(quad_order);
  const int n = mesh.num_vertices();
  SourceProjection out{Vector::Zero(n), Vector::Zero(n)};
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
      const Vec3 x = p0 + s * e1 + u * e2;
      double phi_d = 0.0, phi_n = 0.0;
      for (const auto &atom : charges.atoms)
      {
        const Vec3 d = x - atom.position;
        const double r = d.norm();
        phi_d += atom.charge * inv_4pi / r;
        phi_n -= atom.charge * inv_4pi * d.dot(nrm) / (r * r * r);
      }
      phi_d /= eps_int;
      phi_n /= eps_int;
      const double w = rule.weights[q] * jac;
      const double basis[3] = {1.0 - s - u, s, u};
      for (int k = 0; k < 3; ++k)
      {
        out.b_D[tri[k]] += w * basis[k] * phi_d;
        out.b_N[tri[k]] += w * basis[k] * phi_n;
      }
    }
  }
  return out;
}

OperatorContext::OperatorContext(SurfaceMesh mesh, PhysicalParams params, QuadratureOrders orders)
    : mesh_(std::move(mesh)), params_(params), orders_(orders)
{
  params_.validate();
  mass_ = assemble_mass(mesh_);
  mass_solver_.compute(mass_);
  if (mass_solver_.info() != Eigen::Success)
  {
    throw ValidationError("mass matrix factorization failed");
  }
}

const OperatorSet &OperatorContext::interior() const
{
  std::call_once(interior_once_, [this]
                 { interior_ = std::make_unique<OperatorSet>(
                       assemble_operators(Kernel::laplace(), mesh_, orders_)); });
  return *interior_;
}

const OperatorSet &OperatorContext::exterior() const
{
  std::call_once(exterior_once_, [this]
                 { exterior_ = std::make_unique<OperatorSet>(
                       assemble_operators(Kernel::yukawa(params_.kappa), mesh_, orders_)); });
  return *exterior_;
}

void add_mass_block(Matrix &a, const SparseMatrix &mass, int row, int col, double c)
{
  const int n = static_cast<int>(mass.rows());
  for (int k = 0; k < mass.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(mass, k); it; ++it)
    {
      a(row * n + it.row(), col * n + it.col()) += c * it.value();
    }
  }
}

BlockSystem build_cfie(Side side, double alpha, double beta, const OperatorContext &ctx,
                       const SourceProjection &sources)
{
  const int n = ctx.size();
  if (sources.b_D.size() != n || sources.b_N.size() != n)
  {
    throw ValidationError("source projection does not match the operator context mesh");
  }
  const auto &in = ctx.interior();
  const auto &ex = ctx.exterior();
  const double r = ctx.ratio();
  BlockSystem s;
  s.A.resize(2 * n, 2 * n);
  s.b.resize(2 * n);
  s.alpha = alpha;
  s.beta = beta;
  s.unknowns = side;
  s.identity = cfie_identity(alpha, beta);
  if (side == Side::Interior)
  {
    s.kind = FormulationKind::CfieInternal;
    s.A.topLeftCorner(n, n) = in.K - alpha * ex.K;
    s.A.topRightCorner(n, n) = -in.V + (alpha * r) * ex.V;
    s.A.bottomLeftCorner(n, n) = -in.D + (beta / r) * ex.D;
    s.A.bottomRightCorner(n, n) = -in.T + beta * ex.T;
    s.b << sources.b_D, sources.b_N;
  }
  else
  {
    s.kind = FormulationKind::CfieExternal;
    s.A.topLeftCorner(n, n) = -ex.K + alpha * in.K;
    s.A.topRightCorner(n, n) = ex.V - (alpha / r) * in.V;
    s.A.bottomLeftCorner(n, n) = ex.D - (beta * r) * in.D;
    s.A.bottomRightCorner(n, n) = ex.T - beta * in.T;
    s.b << alpha * sources.b_D, (beta * r) * sources.b_N;
  }
  add_mass_block(s.A, ctx.mass(), 0, 0, 0.5 * (1.0 + alpha));
  add_mass_block(s.A, ctx.mass(), 1, 1, 0.5 * (1.0 + beta));
  return s;
}

BlockSystem build_named(const FormulationSpec &spec, const OperatorContext &ctx,
                        const SourceProjection &sources)
{
  const int n = ctx.size();
  const double r = ctx.ratio();
  BlockSystem s;
  switch (spec.kind)
  {
    case FormulationKind::DirectInternal:
    case FormulationKind::DirectInternalPermuted:
    {
      const auto &in = ctx.interior();
      const auto &ex = ctx.exterior();
      s.A.resize(2 * n, 2 * n);
      s.A.topLeftCorner(n, n) = in.K;
      s.A.topRightCorner(n, n) = -in.V;
      s.A.bottomLeftCorner(n, n) = -ex.K;
      s.A.bottomRightCorner(n, n) = r * ex.V;
      add_mass_block(s.A, ctx.mass(), 0, 0, 0.5);
      add_mass_block(s.A, ctx.mass(), 1, 0, 0.5);
      s.b.resize(2 * n);
      s.b << sources.b_D, Vector::Zero(n);
      s.unknowns = Side::Interior;
      s.kind = FormulationKind::DirectInternal;
      break;
    }
    case FormulationKind::DirectExternal:
    case FormulationKind::DirectExternalPermuted:
    {
      const auto &in = ctx.interior();
      const auto &ex = ctx.exterior();
      s.A.resize(2 * n, 2 * n);
      s.A.topLeftCorner(n, n) = -ex.K;
      s.A.topRightCorner(n, n) = ex.V;
      s.A.bottomLeftCorner(n, n) = in.K;
      s.A.bottomRightCorner(n, n) = -(1.0 / r) * in.V;
      add_mass_block(s.A, ctx.mass(), 0, 0, 0.5);
      add_mass_block(s.A, ctx.mass(), 1, 0, 0.5);
      s.b.resize(2 * n);
      s.b << Vector::Zero(n), sources.b_D;
      s.unknowns = Side::Exterior;
      s.kind = FormulationKind::DirectExternal;
      break;
    }
    case FormulationKind::CfieInternal:
      s = build_cfie(Side::Interior, spec.alpha, spec.beta, ctx, sources);
      break;
    case FormulationKind::CfieExternal:
      s = build_cfie(Side::Exterior, spec.alpha, spec.beta, ctx, sources);
      break;
    case FormulationKind::Juffer:
      s = build_cfie(Side::Interior, 1.0 / r, r, ctx, sources);
      break;
    case FormulationKind::Lu:
      s = build_cfie(Side::Exterior, r, 1.0 / r, ctx, sources);
      s.A.bottomRows(n) *= r;
      s.b.tail(n) *= r;
      s.identity = std::array<double, 2>{0.5 * (1.0 + r), 0.5 * (1.0 + r)};
      break;
    case FormulationKind::MullerInternal:
      s = build_cfie(Side::Interior, 1.0, 1.0, ctx, sources);
      break;
    case FormulationKind::MullerExternal:
      s = build_cfie(Side::Exterior, 1.0, 1.0, ctx, sources);
      break;
    case FormulationKind::PmchwtInternal:
      s = build_cfie(Side::Interior, -1.0, -1.0, ctx, sources);
      s.A *= -1.0;
      s.b *= -1.0;
      break;
    case FormulationKind::PmchwtExternal:
      s = build_cfie(Side::Exterior, -1.0, -1.0, ctx, sources);
      break;
  }
  s.kind = spec.kind;
  if (spec.kind == FormulationKind::DirectInternalPermuted ||
      spec.kind == FormulationKind::DirectExternalPermuted)
  {
    swap_block_rows(s);
  }
  return s;
}

Vector build_rhs(const FormulationSpec &spec, const PhysicalParams &params,
                 const SourceProjection &sources)
{
  const int n = static_cast<int>(sources.b_D.size());
  const double r = params.eps_int / params.eps_ext;
  const Vector zero = Vector::Zero(n);
  const Vector &d = sources.b_D;
  const Vector &nn = sources.b_N;
  Vector b(2 * n);
  switch (spec.kind)
  {
    case FormulationKind::DirectInternal:
    case FormulationKind::DirectExternalPermuted:
      b << d, zero;
      break;
    case FormulationKind::DirectExternal:
    case FormulationKind::DirectInternalPermuted:
      b << zero, d;
      break;
    case FormulationKind::CfieInternal:
    case FormulationKind::Juffer:
    case FormulationKind::MullerInternal:
      b << d, nn;
      break;
    case FormulationKind::CfieExternal:
      b << spec.alpha * d, (spec.beta * r) * nn;
      break;
    case FormulationKind::Lu:
      b << r * d, r * nn;
      break;
    case FormulationKind::MullerExternal:
      b << d, r * nn;
      break;
    case FormulationKind::PmchwtInternal:
      b << -d, -nn;
      break;
    case FormulationKind::PmchwtExternal:
      b << -d, -r * nn;
      break;
  }
  return b;
}

TraceSolution split_solution(const BlockSystem &system, const Vector &x)
{
  const int n = system.block_size();
  return {x.head(n), x.tail(n), system.unknowns};
}

TraceSolution convert_traces(const TraceSolution &solution, const PhysicalParams &params)
{
  TraceSolution out = solution;
  if (solution.side == Side::Interior)
  {
    out.neumann *= params.eps_int / params.eps_ext;
    out.side = Side::Exterior;
  }
  else
  {
    out.neumann *= params.eps_ext / params.eps_int;
    out.side = Side::Interior;
  }
  return out;
}

TraceSolution to_side(const TraceSolution &solution, Side side, const PhysicalParams &params)
{
  return solution.side == side ? solution : convert_traces(solution, params);
}

}  // namespace pbbem
