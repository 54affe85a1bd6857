// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_FORMULATIONS_HPP
#define PBBEM_FORMULATIONS_HPP

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/SparseCholesky>

#include "pbbem/molecule_io.hpp"
#include "pbbem/operators.hpp"

namespace pbbem
{

enum class Side
{
  Interior,
  Exterior
};

std::string to_string(Side side);

// Source terms tested against the P1 basis: b_D[i] = ⟨φ_i, φ_D⟩, b_N[i] = ⟨φ_i, φ_N⟩.
struct SourceProjection
{
  Vector b_D;
  Vector b_N;
};

// Throws SingularityError when a charge lies within 1e-6 Å of the surface.
SourceProjection project_sources(const ChargeSet &charges, const SurfaceMesh &mesh,
                                 double eps_int, int quad_order = 4);

using MassSolver = Eigen::SimplicialLDLT<SparseMatrix>;

//
// Mesh, parameters and the lazily assembled operators shared by every formulation and
// preconditioner on that mesh. Interior operators use the Laplace kernel, exterior operators
// the Yukawa kernel with the screening of `params`.
//
class OperatorContext
{
public:
  OperatorContext(SurfaceMesh mesh, PhysicalParams params, QuadratureOrders orders = {});

  OperatorContext(const OperatorContext &) = delete;
  OperatorContext &operator=(const OperatorContext &) = delete;

  const SurfaceMesh &mesh() const { return mesh_; }
  const PhysicalParams &params() const { return params_; }
  const QuadratureOrders &orders() const { return orders_; }
  int size() const { return mesh_.num_vertices(); }

  const OperatorSet &interior() const;
  const OperatorSet &exterior() const;
  const SparseMatrix &mass() const { return mass_; }
  const MassSolver &mass_solver() const { return mass_solver_; }

  // ε_int / ε_ext
  double ratio() const { return params_.eps_int / params_.eps_ext; }

private:
  SurfaceMesh mesh_;
  PhysicalParams params_;
  QuadratureOrders orders_;
  SparseMatrix mass_;
  MassSolver mass_solver_;
  mutable std::once_flag interior_once_, exterior_once_;
  mutable std::unique_ptr<OperatorSet> interior_, exterior_;
};

enum class FormulationKind
{
  DirectInternal,
  DirectExternal,
  DirectInternalPermuted,
  DirectExternalPermuted,
  CfieInternal,
  CfieExternal,
  Juffer,
  Lu,
  MullerInternal,
  MullerExternal,
  PmchwtInternal,
  PmchwtExternal
};

std::string to_string(FormulationKind kind);
FormulationKind parse_formulation(std::string_view name);

struct FormulationSpec
{
  FormulationKind kind = FormulationKind::DirectInternal;
  double alpha = 0.0;  // CFIE kinds only
  double beta = 0.0;
};

//
// Dense 2N×2N Galerkin system. Block rows are (Dirichlet-type row, Neumann-type row) and the
// unknown vector is (γ_D, γ_N) on the side recorded in `unknowns`. `identity` holds (a, b) when
// the system has the form diag(aM, bM) + compact.
//
struct BlockSystem
{
  Matrix A;
  Vector b;
  Side unknowns = Side::Interior;
  std::optional<std::array<double, 2>> identity;
  FormulationKind kind = FormulationKind::DirectInternal;
  double alpha = 0.0;
  double beta = 0.0;

  int block_size() const { return static_cast<int>(A.rows() / 2); }
};

BlockSystem build_cfie(Side side, double alpha, double beta, const OperatorContext &ctx,
                       const SourceProjection &sources);
BlockSystem build_named(const FormulationSpec &spec, const OperatorContext &ctx,
                        const SourceProjection &sources);

// Right-hand side of build_named(spec, ...) from the source projection alone.
Vector build_rhs(const FormulationSpec &spec, const PhysicalParams &params,
                 const SourceProjection &sources);

struct TraceSolution
{
  Vector dirichlet;
  Vector neumann;
  Side side = Side::Interior;
};

TraceSolution split_solution(const BlockSystem &system, const Vector &x);

// Interior ↔ exterior via γ_D continuity and ε_int γ_N⁻ = ε_ext γ_N⁺.
TraceSolution convert_traces(const TraceSolution &solution, const PhysicalParams &params);
TraceSolution to_side(const TraceSolution &solution, Side side, const PhysicalParams &params);

// Adds c·M to the (row, col) block of a 2N×2N matrix.
void add_mass_block(Matrix &a, const SparseMatrix &mass, int row, int col, double c);

}  // namespace pbbem

#endif  // PBBEM_FORMULATIONS_HPP
