// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_PRECONDITIONERS_HPP
#define PBBEM_PRECONDITIONERS_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "pbbem/formulations.hpp"

namespace pbbem
{

enum class PreconditionerKind
{
  None,
  BlockDiagonal,
  Mass,
  ScaledMass,
  CalderonFull,
  CalderonInterior,
  CalderonExterior
};

std::string to_string(PreconditionerKind kind);
PreconditionerKind parse_preconditioner(std::string_view name);

enum class CalderonVariant
{
  Full,
  Interior,
  Exterior
};

using Scaling = std::array<double, 2>;

namespace detail
{
struct PreconditionerImpl
{
  virtual ~PreconditionerImpl() = default;
  virtual Matrix apply(const Matrix &x) const = 0;
};
}  // namespace detail

//
// Left preconditioner P⁻¹ acting on length-2N vectors. Immutable; apply is reentrant.
// A default-constructed preconditioner is the identity.
//
class Preconditioner
{
public:
  Preconditioner() = default;
  Preconditioner(PreconditionerKind kind, std::shared_ptr<const detail::PreconditionerImpl> impl,
                 std::optional<Scaling> scaling = std::nullopt, bool fast = false);

  PreconditionerKind kind() const { return kind_; }
  const std::optional<Scaling> &scaling() const { return scaling_; }
  bool fast() const { return fast_; }
  bool is_identity() const { return !impl_; }
  std::string name() const;

  Vector apply(const Vector &x) const;
  // Column-wise action on a block of vectors.
  Matrix apply(const Matrix &x) const;

private:
  PreconditionerKind kind_ = PreconditionerKind::None;
  std::shared_ptr<const detail::PreconditionerImpl> impl_;
  std::optional<Scaling> scaling_;
  bool fast_ = false;
};

// Per-vertex 2×2 inverse of the block diagonals. Throws ValidationError naming a singular vertex.
Preconditioner block_diagonal(const BlockSystem &system);

// blockdiag(aM, bM)⁻¹ through one sparse factorization of M.
Preconditioner mass_preconditioner(const SparseMatrix &mass);
Preconditioner scaled_mass(double a, double b, const SparseMatrix &mass);

// Weak-form Calderón block used as preconditioner for a PMCHWT system: the whole system
// matrix (Full) or only its interior or exterior part with the matching ε-scaling.
Matrix calderon_block(FormulationKind pmchwt, CalderonVariant variant, const OperatorContext &ctx);

// apply(v) = S⁻¹·C·blockM⁻¹·v with S = blockdiag(aM, bM), (a, b) = scaling or (1, 1).
// Throws ValidationError unless the system is a PMCHWT formulation.
Preconditioner calderon(const BlockSystem &system, const OperatorContext &ctx,
                        CalderonVariant variant, std::optional<Scaling> scaling = std::nullopt);

inline constexpr QuadratureOrders relaxed_orders{1, 3};

// Same as calderon with C re-assembled on a separate context using `relaxed` orders.
Preconditioner fast_calderon(const BlockSystem &system, const SurfaceMesh &mesh,
                             const PhysicalParams &params, CalderonVariant variant,
                             QuadratureOrders relaxed = relaxed_orders,
                             std::optional<Scaling> scaling = std::nullopt);

// Accumulation points of the half-Calderón preconditioned PMCHWT system, in block-row order.
Scaling half_calderon_points(FormulationKind pmchwt, CalderonVariant variant,
                             const PhysicalParams &params);

enum class JufferScaling
{
  Identity,  // ½(1 + ε_ext/ε_int), ½(1 + ε_int/ε_ext)
  Unhalved   // 1 + ε_ext/ε_int, 1 + ε_int/ε_ext
};

Scaling juffer_scaling(const PhysicalParams &params, JufferScaling mode = JufferScaling::Identity);

}  // namespace pbbem

#endif  // PBBEM_PRECONDITIONERS_HPP
