// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/preconditioners.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace pbbem
{

namespace
{

struct KindName
{
  PreconditionerKind kind;
  const char *name;
};

constexpr KindName kind_names[] = {
    {PreconditionerKind::None, "none"},
    {PreconditionerKind::BlockDiagonal, "block_diagonal"},
    {PreconditionerKind::Mass, "mass"},
    {PreconditionerKind::ScaledMass, "scaled_mass"},
    {PreconditionerKind::CalderonFull, "calderon"},
    {PreconditionerKind::CalderonInterior, "calderon_interior"},
    {PreconditionerKind::CalderonExterior, "calderon_exterior"},
};

class BlockDiagonalImpl final : public detail::PreconditionerImpl
{
public:
  explicit BlockDiagonalImpl(const BlockSystem &system) : n_(system.block_size()), inv_(n_)
  {
    const Matrix &a = system.A;
    for (int i = 0; i < n_; ++i)
    {
      Eigen::Matrix2d b;
      b << a(i, i), a(i, n_ + i), a(n_ + i, i), a(n_ + i, n_ + i);
      const double det = b.determinant();
      const double scale = b.cwiseAbs().maxCoeff();
      if (!(std::abs(det) > 1e-14 * scale * scale))
      {
        throw ValidationError("block-diagonal preconditioner: singular 2x2 block at vertex " +
                              std::to_string(i));
      }
      inv_[i] = b.inverse();
    }
  }

  Matrix apply(const Matrix &x) const override
  {
    Matrix y(x.rows(), x.cols());
    for (int i = 0; i < n_; ++i)
    {
      const Eigen::Matrix2d &m = inv_[i];
      y.row(i) = m(0, 0) * x.row(i) + m(0, 1) * x.row(n_ + i);
      y.row(n_ + i) = m(1, 0) * x.row(i) + m(1, 1) * x.row(n_ + i);
    }
    return y;
  }

private:
  int n_;
  std::vector<Eigen::Matrix2d> inv_;
};

// blockdiag(aM, bM)⁻¹
class MassSolve
{
public:
  MassSolve(const SparseMatrix &mass, double a, double b)
      : n_(static_cast<int>(mass.rows())), a_(a), b_(b), solver_(std::make_shared<MassSolver>())
  {
    if (a == 0.0 || b == 0.0 || !std::isfinite(a) || !std::isfinite(b))
    {
      throw ValidationError("scaled mass preconditioner needs finite nonzero a and b");
    }
    solver_->compute(mass);
    if (solver_->info() != Eigen::Success)
    {
      throw ValidationError("mass matrix factorization failed");
    }
  }

  Matrix solve(const Matrix &x) const
  {
    Matrix y(x.rows(), x.cols());
    y.topRows(n_) = solver_->solve(x.topRows(n_)) / a_;
    y.bottomRows(n_) = solver_->solve(x.bottomRows(n_)) / b_;
    return y;
  }

  int size() const { return n_; }

private:
  int n_;
  double a_, b_;
  std::shared_ptr<MassSolver> solver_;
};

class MassImpl final : public detail::PreconditionerImpl
{
public:
  MassImpl(const SparseMatrix &mass, double a, double b) : m_(mass, a, b) {}
  Matrix apply(const Matrix &x) const override { return m_.solve(x); }

private:
  MassSolve m_;
};

class CalderonImpl final : public detail::PreconditionerImpl
{
public:
  CalderonImpl(Matrix c, const SparseMatrix &mass, Scaling s)
      : c_(std::move(c)), plain_(mass, 1.0, 1.0), scaled_(mass, s[0], s[1])
  {
  }

  Matrix apply(const Matrix &x) const override { return scaled_.solve(c_ * plain_.solve(x)); }

private:
  Matrix c_;
  MassSolve plain_;
  MassSolve scaled_;
};

void require_pmchwt(const BlockSystem &system)
{
  if (system.kind != FormulationKind::PmchwtInternal &&
      system.kind != FormulationKind::PmchwtExternal)
  {
    throw ValidationError("Calderón preconditioning requires a PMCHWT system, got " +
                          to_string(system.kind));
  }
}

PreconditionerKind calderon_kind(CalderonVariant v)
{
  switch (v)
  {
    case CalderonVariant::Full:
      return PreconditionerKind::CalderonFull;
    case CalderonVariant::Interior:
      return PreconditionerKind::CalderonInterior;
    case CalderonVariant::Exterior:
      break;
  }
  return PreconditionerKind::CalderonExterior;
}

// [[-K, cV], [D/c, T]]
Matrix half_block(const OperatorSet &ops, double c)
{
  const int n = static_cast<int>(ops.V.rows());
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = -ops.K;
  out.topRightCorner(n, n) = c * ops.V;
  out.bottomLeftCorner(n, n) = (1.0 / c) * ops.D;
  out.bottomRightCorner(n, n) = ops.T;
  return out;
}

Preconditioner make_calderon(Matrix c, const SparseMatrix &mass, CalderonVariant variant,
                             std::optional<Scaling> scaling, bool fast)
{
  const Scaling s = scaling.value_or(Scaling{1.0, 1.0});
  auto impl = std::make_shared<CalderonImpl>(std::move(c), mass, s);
  return Preconditioner(calderon_kind(variant), std::move(impl), scaling, fast);
}

}  // namespace

std::string to_string(PreconditionerKind kind)
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

PreconditionerKind parse_preconditioner(std::string_view name)
{
  for (const auto &kn : kind_names)
  {
    if (name == kn.name)
    {
      return kn.kind;
    }
  }
  std::ostringstream msg;
  msg << "unknown preconditioner '" << name << "'; expected one of:";
  for (const auto &kn : kind_names)
  {
    msg << ' ' << kn.name;
  }
  throw ValidationError(msg.str());
}

Preconditioner::Preconditioner(PreconditionerKind kind,
                               std::shared_ptr<const detail::PreconditionerImpl> impl,
                               std::optional<Scaling> scaling, bool fast)
    : kind_(kind), impl_(std::move(impl)), scaling_(scaling), fast_(fast)
{
}

std::string Preconditioner::name() const
{
  std::string out = to_string(kind_);
  if (scaling_ && kind_ != PreconditionerKind::ScaledMass)
  {
    out += "+scaled_mass";
  }
  if (fast_)
  {
    out += "+fast";
  }
  return out;
}

Vector Preconditioner::apply(const Vector &x) const
{
  if (!impl_)
  {
    return x;
  }
  return impl_->apply(x);
}

Matrix Preconditioner::apply(const Matrix &x) const
{
  if (!impl_)
  {
    return x;
  }
  return impl_->apply(x);
}

Preconditioner block_diagonal(const BlockSystem &system)
{
  return Preconditioner(PreconditionerKind::BlockDiagonal,
                        std::make_shared<BlockDiagonalImpl>(system));
}

Preconditioner mass_preconditioner(const SparseMatrix &mass)
{
  return Preconditioner(PreconditionerKind::Mass, std::make_shared<MassImpl>(mass, 1.0, 1.0));
}

Preconditioner scaled_mass(double a, double b, const SparseMatrix &mass)
{
  return Preconditioner(PreconditionerKind::ScaledMass, std::make_shared<MassImpl>(mass, a, b),
                        Scaling{a, b});
}

Matrix calderon_block(FormulationKind pmchwt, CalderonVariant variant, const OperatorContext &ctx)
{
  const double r = ctx.ratio();
  const bool internal = pmchwt == FormulationKind::PmchwtInternal;
  if (!internal && pmchwt != FormulationKind::PmchwtExternal)
  {
    throw ValidationError("Calderón block requested for non-PMCHWT formulation " +
                          to_string(pmchwt));
  }
  switch (variant)
  {
    case CalderonVariant::Full:
    {
      const int n = ctx.size();
      SourceProjection none{Vector::Zero(n), Vector::Zero(n)};
      return build_named({pmchwt}, ctx, none).A;
    }
    case CalderonVariant::Interior:
      return half_block(ctx.interior(), internal ? 1.0 : 1.0 / r);
    case CalderonVariant::Exterior:
      break;
  }
  return half_block(ctx.exterior(), internal ? r : 1.0);
}

Preconditioner calderon(const BlockSystem &system, const OperatorContext &ctx,
                        CalderonVariant variant, std::optional<Scaling> scaling)
{
  require_pmchwt(system);
  Matrix c = variant == CalderonVariant::Full ? system.A
                                              : calderon_block(system.kind, variant, ctx);
  return make_calderon(std::move(c), ctx.mass(), variant, scaling, false);
}

Preconditioner fast_calderon(const BlockSystem &system, const SurfaceMesh &mesh,
                             const PhysicalParams &params, CalderonVariant variant,
                             QuadratureOrders relaxed, std::optional<Scaling> scaling)
{
  require_pmchwt(system);
  Matrix c;
  SparseMatrix mass;
  {
    OperatorContext relaxed_ctx(mesh, params, relaxed);
    c = calderon_block(system.kind, variant, relaxed_ctx);
    mass = relaxed_ctx.mass();
  }
  return make_calderon(std::move(c), mass, variant, scaling, true);
}

Scaling half_calderon_points(FormulationKind pmchwt, CalderonVariant variant,
                             const PhysicalParams &params)
{
  if (pmchwt != FormulationKind::PmchwtInternal && pmchwt != FormulationKind::PmchwtExternal)
  {
    throw ValidationError("half-Calderón points requested for " + to_string(pmchwt));
  }
  const double l1 = 0.25 + params.eps_ext / (4.0 * params.eps_int);
  const double l2 = 0.25 + params.eps_int / (4.0 * params.eps_ext);
  switch (variant)
  {
    case CalderonVariant::Interior:
      return {l1, l2};
    case CalderonVariant::Exterior:
      return {l2, l1};
    case CalderonVariant::Full:
      break;
  }
  throw ValidationError("half-Calderón points need the interior or exterior variant");
}

Scaling juffer_scaling(const PhysicalParams &params, JufferScaling mode)
{
  const double f = mode == JufferScaling::Identity ? 0.5 : 1.0;
  return {f * (1.0 + params.eps_ext / params.eps_int), f * (1.0 + params.eps_int / params.eps_ext)};
}

}  // namespace pbbem
