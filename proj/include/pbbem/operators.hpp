// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_OPERATORS_HPP
#define PBBEM_OPERATORS_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "pbbem/molecule_io.hpp"

namespace pbbem
{

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

class SingularityError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class KernelFamily
{
  Laplace,
  Yukawa
};

struct Kernel
{
  KernelFamily family = KernelFamily::Laplace;
  double kappa = 0.0;  // [1/Å], Yukawa only

  static Kernel laplace() { return {KernelFamily::Laplace, 0.0}; }
  static Kernel yukawa(double kappa) { return {KernelFamily::Yukawa, kappa}; }

  // Screening actually used in the exponent; zero for Laplace.
  double screening() const { return family == KernelFamily::Yukawa ? kappa : 0.0; }
  std::string name() const;
};

// G(x, y) = exp(-κ r) / (4π r). Throws SingularityError when x == y.
double greens(const Kernel &kernel, const Vec3 &x, const Vec3 &y);

// ∂G/∂n_y (x, y) = exp(-κ r) (1 + κ r) (x - y)·n_y / (4π r³).
double greens_normal_y(const Kernel &kernel, const Vec3 &x, const Vec3 &y, const Vec3 &n_y);

enum class OperatorTag
{
  V,
  K,
  T,
  D,
  I
};

std::string to_string(OperatorTag tag);

struct GalerkinMatrix
{
  Matrix values;
  OperatorTag tag = OperatorTag::V;
  Kernel kernel;
};

struct QuadratureOrders
{
  int regular = 4;   // polynomial exactness of the triangle rule
  int singular = 4;  // Gauss points per dimension for touching pairs

  bool operator==(const QuadratureOrders &) const = default;
};

// All four boundary operators of one kernel, from a single pass over element pairs.
struct OperatorSet
{
  Kernel kernel;
  QuadratureOrders orders;
  Matrix V;
  Matrix K;
  Matrix T;  // K transposed
  Matrix D;
};

OperatorSet assemble_operators(const Kernel &kernel, const SurfaceMesh &mesh,
                               const QuadratureOrders &orders = {});

// Single operator; T is the transpose of the assembled K.
GalerkinMatrix assemble(OperatorTag op, const Kernel &kernel, const SurfaceMesh &mesh,
                        const QuadratureOrders &orders = {});

SparseMatrix assemble_mass(const SurfaceMesh &mesh);

//
// Smooth probe vectors for Calderón tests: nodal samples of the real spherical harmonics up to
// degree 2 evaluated on the direction from the mesh centroid.
//
Matrix harmonic_probes(const SurfaceMesh &mesh);

//
// Max over probe vectors v of ‖C² v − v/4‖_M / ‖v/4‖_M, where
// C = blockM⁻¹ [[-K, r V], [D / r, T]] and r is the Dirichlet-to-Neumann scaling ratio.
//
double calderon_square_residual(const OperatorSet &ops, const SurfaceMesh &mesh,
                                double ratio = 1.0);
double calderon_square_residual(const Kernel &kernel, const SurfaceMesh &mesh,
                                const QuadratureOrders &orders = {}, double ratio = 1.0);

}  // namespace pbbem

#endif  // PBBEM_OPERATORS_HPP
