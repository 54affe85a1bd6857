// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "pbbem/operators.hpp"

using namespace pbbem;

namespace
{

const SurfaceMesh &sphere(int level)
{
  static std::map<int, SurfaceMesh> cache;
  auto it = cache.find(level);
  if (it == cache.end())
  {
    it = cache.emplace(level, generate_icosphere(1.0, level)).first;
  }
  return it->second;
}

const OperatorSet &laplace_ops(int level)
{
  static std::map<int, OperatorSet> cache;
  auto it = cache.find(level);
  if (it == cache.end())
  {
    it = cache.emplace(level, assemble_operators(Kernel::laplace(), sphere(level))).first;
  }
  return it->second;
}

double rel_asym(const Matrix &a)
{
  return (a - a.transpose()).norm() / a.norm();
}

double k_identity_residual(int level)
{
  const auto &ops = laplace_ops(level);
  const Vector one = Vector::Ones(sphere(level).num_vertices());
  const Vector m1 = assemble_mass(sphere(level)) * one;
  return (ops.K * one + 0.5 * m1).norm() / (0.5 * m1).norm();
}

}  // namespace

TEST(Greens, PlugInValues)
{
  const Vec3 o = Vec3::Zero();
  EXPECT_NEAR(greens(Kernel::laplace(), o, Vec3(1, 0, 0)), 0.0795775, 1e-7);
  EXPECT_NEAR(greens(Kernel::yukawa(0.125), o, Vec3(0, 2, 0)), 0.030988, 1e-6);
  EXPECT_NEAR(greens(Kernel::yukawa(0.125), o, Vec3(0, 2, 0)),
              std::exp(-0.25) / (8.0 * std::numbers::pi), 1e-15);
  for (double r : {0.01, 0.3, 2.0, 17.0})
  {
    EXPECT_EQ(greens(Kernel::yukawa(0.0), o, Vec3(r, 0, 0)),
              greens(Kernel::laplace(), o, Vec3(r, 0, 0)));
  }
  EXPECT_THROW(greens(Kernel::laplace(), o, o), SingularityError);
}

TEST(Greens, NormalDerivativeMatchesFiniteDifference)
{
  const Vec3 x(0.3, -0.2, 0.9), y(1.1, 0.4, -0.3);
  const Vec3 n = Vec3(0.2, 0.5, -0.8).normalized();
  for (auto k : {Kernel::laplace(), Kernel::yukawa(0.7)})
  {
    const double h = 1e-6;
    const double fd = (greens(k, x, y + h * n) - greens(k, x, y - h * n)) / (2 * h);
    EXPECT_NEAR(greens_normal_y(k, x, y, n), fd, 1e-8);
  }
}

TEST(Mass, PartitionOfUnityAndSpd)
{
  const auto &m2 = sphere(2);
  const SparseMatrix m = assemble_mass(m2);
  const Vector one = Vector::Ones(m2.num_vertices());
  EXPECT_NEAR(one.dot(m * one), m2.total_area(), 1e-12 * m2.total_area());
  const Matrix dense(m);
  EXPECT_LT((dense - dense.transpose()).norm(), 1e-15);
  Eigen::SelfAdjointEigenSolver<Matrix> es(dense);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  // Sparsity: only vertex pairs sharing a triangle.
  EXPECT_EQ(m.nonZeros(), m2.num_vertices() + 2 * m2.num_edges());
}

TEST(Mass, Level4AreaCloseTo4Pi)
{
  auto m4 = generate_icosphere(1.0, 4);
  const Vector one = Vector::Ones(m4.num_vertices());
  const double a = one.dot(assemble_mass(m4) * one);
  EXPECT_NEAR(a, 4.0 * std::numbers::pi, 0.005 * 4.0 * std::numbers::pi);
}

TEST(Operators, Symmetries)
{
  const auto &ops = laplace_ops(2);
  EXPECT_EQ(ops.T, ops.K.transpose());
  EXPECT_LT(rel_asym(ops.V), 1e-12);
  EXPECT_LT(rel_asym(ops.D), 1e-12);
  EXPECT_GT(ops.V.diagonal().minCoeff(), 0.0);
  auto t = assemble(OperatorTag::T, Kernel::laplace(), sphere(1));
  auto k = assemble(OperatorTag::K, Kernel::laplace(), sphere(1));
  EXPECT_EQ(t.values, k.values.transpose());
  EXPECT_EQ(t.tag, OperatorTag::T);
}

TEST(Operators, SingleLayerUniformSphere)
{
  const auto &ops = laplace_ops(3);
  const Vector one = Vector::Ones(sphere(3).num_vertices());
  const double ratio = one.dot(ops.V * one) / one.dot(assemble_mass(sphere(3)) * one);
  EXPECT_NEAR(ratio, 1.0, 0.01);
}

TEST(Operators, DoubleLayerGaussIdentity)
{
  const double r2 = k_identity_residual(2);
  const double r3 = k_identity_residual(3);
  EXPECT_LE(r3, 1e-2);
  EXPECT_LT(r3, r2);
}

TEST(Operators, HypersingularAnnihilatesConstants)
{
  const auto &ops = laplace_ops(3);
  const Vector one = Vector::Ones(sphere(3).num_vertices());
  EXPECT_LE((ops.D * one).norm(), 1e-8 * ops.D.norm());
}

TEST(Operators, YukawaLimit)
{
  const auto &mesh = sphere(1);
  auto lap = assemble_operators(Kernel::laplace(), mesh);
  auto y0 = assemble_operators(Kernel::yukawa(0.0), mesh);
  EXPECT_EQ(lap.V, y0.V);
  EXPECT_EQ(lap.K, y0.K);
  EXPECT_EQ(lap.D, y0.D);
  auto ys = assemble_operators(Kernel::yukawa(1e-8), mesh);
  for (const auto *pair : {&lap.V, &lap.K, &lap.D})
  {
    const Matrix &a = *pair;
    const Matrix &b = pair == &lap.V ? ys.V : pair == &lap.K ? ys.K : ys.D;
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-6 * a.cwiseAbs().maxCoeff());
  }
}

TEST(Operators, YukawaSingleLayerUniformSphere)
{
  // A uniform layer on the unit sphere has surface potential sinh(κ)e^{-κ}/κ.
  const double kappa = 0.5;
  const auto &mesh = sphere(3);
  auto ops = assemble_operators(Kernel::yukawa(kappa), mesh);
  const Vector one = Vector::Ones(mesh.num_vertices());
  const double ratio = one.dot(ops.V * one) / one.dot(assemble_mass(mesh) * one);
  EXPECT_NEAR(ratio, std::sinh(kappa) * std::exp(-kappa) / kappa, 0.01);
}

TEST(Operators, CalderonSquareLaplace)
{
  const double r2 = calderon_square_residual(laplace_ops(2), sphere(2));
  const double r3 = calderon_square_residual(laplace_ops(3), sphere(3));
  EXPECT_LE(r3, 0.05) << "level 2 " << r2;
  EXPECT_LT(r3, r2);
}

TEST(Operators, CalderonSquareYukawa)
{
  const Kernel k = Kernel::yukawa(0.125);
  const double r2 = calderon_square_residual(k, sphere(2));
  const double r3 = calderon_square_residual(k, sphere(3));
  EXPECT_LE(r3, 0.05) << "level 2 " << r2;
  EXPECT_LT(r3, r2);
}

TEST(Operators, CalderonSquareScalingInvariant)
{
  const double a = calderon_square_residual(laplace_ops(2), sphere(2), 1.0);
  const double b = calderon_square_residual(laplace_ops(2), sphere(2), 20.0);
  EXPECT_LT(std::abs(a - b), 0.25 * a + 1e-3);
}
