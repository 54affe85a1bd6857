// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_QUADRATURE_HPP
#define PBBEM_QUADRATURE_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace pbbem
{

using Vec2 = Eigen::Vector2d;

class QuadratureError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Gauss-Legendre nodes and weights on [0, 1]; weights sum to 1.
struct LineRule
{
  std::vector<double> points;
  std::vector<double> weights;
};

LineRule gauss_legendre(int n);

//
// Rule on the reference triangle {(s, t) : s, t >= 0, s + t <= 1}. Weights are positive and sum
// to 1/2, the reference area. `degree` is the total polynomial degree integrated exactly, which
// is at least the order that was requested.
//
struct TriangleRule
{
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

// Symmetric rule exact for total degree >= order, order in 1..10.
TriangleRule regular_rule(int order);

enum class Adjacency
{
  Disjoint = 0,
  Vertex = 1,
  Edge = 2,
  Self = 3
};

//
// Orders the vertices of a test/trial triangle pair so that shared vertices come first and in
// the same order on both sides. perm[k] is the local index (into the original triple) of the
// k-th reordered vertex.
//
struct PairAlignment
{
  Adjacency adjacency = Adjacency::Disjoint;
  std::array<int, 3> test_perm{0, 1, 2};
  std::array<int, 3> trial_perm{0, 1, 2};
};

// Throws QuadratureError when the triangles share three vertices but are not the same element.
PairAlignment classify_pair(const std::array<int, 3> &test, const std::array<int, 3> &trial,
                            bool same_element);

//
// Tensor Gauss rule on [0, 1]^4 pushed through the relative-coordinate (Sauter-Schwab)
// transforms for one adjacency class. Each node carries reference coordinates for the test
// point x and trial point y on the reference triangle, with the shared vertices of an aligned
// pair at (0,0) (vertex), or along the edge (0,0)-(1,0) (edge). Weights include the transform
// Jacobians and sum to 1/4, the measure of the reference pair, once order >= 2 integrates the
// cubic Jacobian exactly. The direction variable of each
// region uses two Gauss panels, so a region has 2·order⁴ nodes.
//
struct SingularPairRule
{
  Adjacency adjacency = Adjacency::Self;
  int order = 0;  // Gauss points per dimension
  std::vector<Vec2> x;
  std::vector<Vec2> y;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

SingularPairRule singular_rule(Adjacency adjacency, int order);

// Integral of x^a y^b over the reference triangle: a! b! / (a + b + 2)!.
double reference_monomial_integral(int a, int b);

}  // namespace pbbem

#endif  // PBBEM_QUADRATURE_HPP
