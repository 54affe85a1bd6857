// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <gtest/gtest.h>

#include "pbbem/postprocess.hpp"

using namespace pbbem;

namespace
{

constexpr double pi = std::numbers::pi;

PhysicalParams params()
{
  return {4.0, 80.0, 0.125};
}

const SurfaceMesh &sphere3()
{
  static SurfaceMesh m = generate_icosphere(4.0, 3);
  return m;
}

// Born-ion reaction potential of a centred unit charge, q/(4πεr) convention.
double born_phi(const PhysicalParams &p, double r)
{
  return (1.0 / (p.eps_ext * (1 + p.kappa * r)) - 1.0 / p.eps_int) / (4 * pi * r);
}

double solve_energy(const SurfaceMesh &mesh, const ChargeSet &charges)
{
  OperatorContext ctx(mesh, params());
  const auto src = project_sources(charges, mesh, 4.0);
  const auto sys = build_named({FormulationKind::Juffer}, ctx, src);
  const Vector x = sys.A.partialPivLu().solve(sys.b);
  std::vector<Vec3> pts;
  for (const auto &a : charges.atoms)
  {
    pts.push_back(a.position);
  }
  return solvation_energy(charges,
                          reaction_potential(split_solution(sys, x), mesh, params(), pts));
}

}  // namespace

TEST(ReactionPotential, ZeroTracesGiveZero)
{
  const int n = sphere3().num_vertices();
  TraceSolution t{Vector::Zero(n), Vector::Zero(n), Side::Interior};
  const Vector phi = reaction_potential(t, sphere3(), params(), {Vec3::Zero(), Vec3(1, 2, 0)});
  EXPECT_EQ(phi.norm(), 0.0);
}

TEST(ReactionPotential, ExactTracesGiveBornPotential)
{
  const auto p = params();
  const double r = 4.0;
  const int n = sphere3().num_vertices();
  const double gd = 1.0 / (4 * pi * p.eps_ext * r * (1 + p.kappa * r));
  const double gn = -1.0 / (4 * pi * p.eps_int * r * r);
  TraceSolution t{Vector::Constant(n, gd), Vector::Constant(n, gn), Side::Interior};
  const Vector phi = reaction_potential(t, sphere3(), p, {Vec3::Zero(), Vec3(0.5, -1, 0.7)});
  EXPECT_NEAR(phi[0], born_phi(p, r), 0.01 * std::abs(born_phi(p, r)));
  EXPECT_NEAR(phi[1], born_phi(p, r), 0.01 * std::abs(born_phi(p, r)));

  // Exterior-side traces are converted before evaluation.
  TraceSolution e = convert_traces(t, p);
  EXPECT_NEAR(reaction_potential(e, sphere3(), p, {Vec3::Zero()})[0], phi[0], 1e-15);
}

TEST(ReactionPotential, LinearInTraces)
{
  const int n = sphere3().num_vertices();
  std::mt19937 rng(3);
  std::normal_distribution<double> d;
  TraceSolution t{Vector::NullaryExpr(n, [&] { return d(rng); }),
                  Vector::NullaryExpr(n, [&] { return d(rng); }), Side::Interior};
  TraceSolution t2{2.0 * t.dirichlet, 2.0 * t.neumann, Side::Interior};
  const std::vector<Vec3> pts{Vec3(0.1, 0.2, 0.3)};
  const double a = reaction_potential(t, sphere3(), params(), pts)[0];
  const double b = reaction_potential(t2, sphere3(), params(), pts)[0];
  EXPECT_NEAR(b, 2.0 * a, 1e-13 * std::abs(b));
}

TEST(ReactionPotential, RejectsSurfacePoints)
{
  const int n = sphere3().num_vertices();
  TraceSolution t{Vector::Zero(n), Vector::Zero(n), Side::Interior};
  EXPECT_THROW(reaction_potential(t, sphere3(), params(), {sphere3().vertex(0)}),
               SingularityError);
}

TEST(SolvationEnergy, Basics)
{
  ChargeSet c;
  c.atoms.push_back({Vec3::Zero(), 0.0, 1.0});
  c.atoms.push_back({Vec3(1, 0, 0), 0.0, 1.0});
  EXPECT_EQ(solvation_energy(c, Vector::Constant(2, 3.0)), 0.0);
  EXPECT_THROW(solvation_energy(c, Vector::Zero(3)), ValidationError);
  ChargeSet one;
  one.atoms.push_back({Vec3::Zero(), 1.0, 1.0});
  Vector phi(1);
  phi << born_phi(params(), 4.0);
  EXPECT_NEAR(solvation_energy(one, phi), -10.031, 5e-4);
}

TEST(SolvationEnergy, RigidMotionInvariance)
{
  SurfaceMesh mesh = generate_icosphere(3.0, 2);
  ChargeSet c;
  c.atoms.push_back({Vec3(0.5, -0.3, 0.2), 1.0, 1.0});
  c.atoms.push_back({Vec3(-0.8, 0.6, -0.4), -0.5, 1.0});
  const double e0 = solve_energy(mesh, c);

  const Eigen::Matrix3d rot = Eigen::AngleAxisd(1.1, Vec3(0.3, -1, 0.4).normalized()).toRotationMatrix();
  const Vec3 shift(5.0, -2.0, 7.5);
  std::vector<Vec3> verts;
  for (const auto &v : mesh.vertices())
  {
    verts.push_back(rot * v + shift);
  }
  SurfaceMesh moved(verts, mesh.triangles());
  ChargeSet cm = c;
  for (auto &a : cm.atoms)
  {
    a.position = rot * a.position + shift;
  }
  EXPECT_NEAR(solve_energy(moved, cm), e0, 1e-10 * std::abs(e0));
}

TEST(Spectrum, IdentityMatrix)
{
  auto r = spectrum(Matrix::Identity(6, 6), Preconditioner{});
  ASSERT_EQ(r.eigenvalues.size(), 6u);
  for (auto z : r.eigenvalues)
  {
    EXPECT_NEAR(std::abs(z - Complex(1.0)), 0.0, 1e-14);
  }
  EXPECT_NEAR(r.condition_number, 1.0, 1e-12);
  EXPECT_EQ(r.matrix, "raw");
}

TEST(Spectrum, Guard)
{
  SpectrumOptions o;
  o.max_dimension = 4;
  EXPECT_THROW(spectrum(Matrix::Identity(6, 6), Preconditioner{}, o), ValidationError);
  o.override_guard = true;
  EXPECT_NO_THROW(spectrum(Matrix::Identity(6, 6), Preconditioner{}, o));
}

TEST(Spectrum, ConditionNumberOfDiagonal)
{
  Vector d(4);
  d << 1.0, -2.0, 5.0, 0.5;
  auto r = spectrum(Matrix(d.asDiagonal()), Preconditioner{});
  EXPECT_NEAR(r.condition_number, 10.0, 1e-12);
}

TEST(Spectrum, DumpFormat)
{
  SpectrumReport r;
  r.case_id = "9";
  r.matrix = "preconditioned";
  r.condition_number = 3.5;
  r.eigenvalues = {Complex(1, 2), Complex(-0.5, 0)};
  r.predicted_points = {10.5, 0.525};
  std::ostringstream os;
  write_spectrum(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("# case=9 matrix=preconditioned", 0), 0u);
  EXPECT_NE(line.find("predicted=10.5:0;0.52500000000000002:0"), std::string::npos);
  std::getline(is, line);
  EXPECT_EQ(line, "1,2");
  std::getline(is, line);
  EXPECT_EQ(line, "-0.5,0");
}

TEST(Accumulation, Predictions)
{
  const auto p = params();
  auto full = predict_accumulation(find_case("16"), p);
  ASSERT_EQ(full.size(), 1u);
  EXPECT_NEAR(full[0].real(), 5.5125, 1e-12);
  auto half = predict_accumulation(find_case("17"), p);
  ASSERT_EQ(half.size(), 2u);
  EXPECT_NEAR(half[0].real(), 5.25, 1e-12);
  EXPECT_NEAR(half[1].real(), 0.2625, 1e-12);
  auto juffer = predict_accumulation(find_case("9"), p);
  EXPECT_NEAR(juffer[0].real(), 10.5, 1e-12);
  EXPECT_NEAR(juffer[1].real(), 0.525, 1e-12);
  EXPECT_EQ(predict_accumulation(find_case("10"), p), std::vector<Complex>{1.0});
  EXPECT_EQ(predict_accumulation(find_case("13"), p), (std::vector<Complex>{1.0, 1.0}));
  EXPECT_NEAR(predict_accumulation(find_case("12"), p)[0].real(), 0.525, 1e-12);
  EXPECT_EQ(predict_accumulation(find_case("25"), p), std::vector<Complex>{1.0});
  EXPECT_TRUE(predict_accumulation(find_case("1"), p).empty());
  EXPECT_TRUE(predict_accumulation(find_case("15"), p).empty());
}

TEST(Accumulation, InvariantUnderPermittivityScaling)
{
  const PhysicalParams a{4.0, 80.0, 0.125}, b{8.0, 160.0, 0.125};
  for (const auto &c : case_table())
  {
    auto pa = predict_accumulation(c, a), pb = predict_accumulation(c, b);
    ASSERT_EQ(pa.size(), pb.size()) << c.id;
    for (std::size_t i = 0; i < pa.size(); ++i)
    {
      EXPECT_NEAR(std::abs(pa[i] - pb[i]), 0.0, 1e-12) << c.id;
    }
  }
}

TEST(Clusters, SyntheticTwoClusters)
{
  std::mt19937 rng(1);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<Complex> v;
  for (int i = 0; i < 60; ++i)
  {
    v.emplace_back(10.5 + 0.3 * d(rng), 0.3 * d(rng));
  }
  for (int i = 0; i < 40; ++i)
  {
    v.emplace_back(0.525 + 0.01 * d(rng), 0.01 * d(rng));
  }
  v.emplace_back(-3.0, 4.0);
  auto c = find_clusters(v, 2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0].medoid.real(), 10.5, 0.3);
  EXPECT_NEAR(c[1].medoid.real(), 0.525, 0.02);
  EXPECT_GE(c[0].size, 50);
  EXPECT_GE(c[1].size, 35);
}
