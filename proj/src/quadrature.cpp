// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pbbem
{

namespace
{

// Orbits of symmetric rules, weights normalized to sum 1 (scaled by 1/2 on expansion).
struct Orbit
{
  enum Kind
  {
    Centroid,
    S21,
    S111
  } kind;
  double a, b, w;
};

void expand(const std::vector<Orbit> &orbits, TriangleRule &rule)
{
  auto add = [&](double l1, double l2, double w)
  {
    rule.points.emplace_back(l1, l2);
    rule.weights.push_back(0.5 * w);
  };
  for (const auto &o : orbits)
  {
    switch (o.kind)
    {
      case Orbit::Centroid:
        add(1.0 / 3.0, 1.0 / 3.0, o.w);
        break;
      case Orbit::S21:
      {
        double c = 1.0 - 2.0 * o.a;
        add(o.a, o.a, o.w);
        add(o.a, c, o.w);
        add(c, o.a, o.w);
        break;
      }
      case Orbit::S111:
      {
        double c = 1.0 - o.a - o.b;
        add(o.a, o.b, o.w);
        add(o.b, o.a, o.w);
        add(o.a, c, o.w);
        add(c, o.a, o.w);
        add(o.b, c, o.w);
        add(c, o.b, o.w);
        break;
      }
    }
  }
}

// Collapsed-coordinate Gauss product, averaged over the six permutations of the barycentric
// coordinates. Exact for degree 2n - 2.
TriangleRule symmetrized_conical(int n)
{
  TriangleRule rule;
  auto g = gauss_legendre(n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      double u = g.points[i];
      double s = u, t = g.points[j] * (1.0 - u);
      double w = g.weights[i] * g.weights[j] * (1.0 - u) / 6.0;
      double l[3] = {1.0 - s - t, s, t};
      static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                          {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
      for (const auto &p : perms)
      {
        rule.points.emplace_back(l[p[1]], l[p[2]]);
        rule.weights.push_back(w);
      }
    }
  }
  rule.degree = 2 * n - 2;
  return rule;
}

}  // namespace

LineRule gauss_legendre(int n)
{
  if (n < 1)
  {
    throw QuadratureError("Gauss-Legendre rule needs at least one point");
  }
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1)
      {
        p0 = 1.0;
        p1 = x;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    {
      // Re-evaluate the derivative at the converged node.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1].
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1)
  {
    rule.points[n / 2] = 0.5;
  }
  return rule;
}

TriangleRule regular_rule(int order)
{
  TriangleRule rule;
  switch (order)
  {
    case 1:
      expand({{Orbit::Centroid, 0, 0, 1.0}}, rule);
      rule.degree = 1;
      break;
    case 2:
      expand({{Orbit::S21, 1.0 / 6.0, 0, 1.0 / 3.0}}, rule);
      rule.degree = 2;
      break;
    case 3:
      // Strang-Fix, positive weights.
      expand({{Orbit::S111, 0.65902762237409196, 0.23193336855303101, 1.0 / 6.0}}, rule);
      rule.degree = 3;
      break;
    case 4:
      expand({{Orbit::S21, 0.44594849091596483, 0, 0.22338158967801136},
              {Orbit::S21, 0.091576213509770771, 0, 0.10995174365532195}},
             rule);
      rule.degree = 4;
      break;
    case 5:
    {
      const double r15 = std::sqrt(15.0);
      expand({{Orbit::Centroid, 0, 0, 9.0 / 40.0},
              {Orbit::S21, (6.0 + r15) / 21.0, 0, (155.0 + r15) / 1200.0},
              {Orbit::S21, (6.0 - r15) / 21.0, 0, (155.0 - r15) / 1200.0}},
             rule);
      rule.degree = 5;
      break;
    }
    case 6:
      expand({{Orbit::S21, 0.24928674517088212, 0, 0.11678627572642737},
              {Orbit::S21, 0.063089014491508236, 0, 0.050844906370215243},
              {Orbit::S111, 0.053145049844796795, 0.31035245103380604, 0.082851075618345357}},
             rule);
      rule.degree = 6;
      break;
    case 7:
    case 8:
      expand({{Orbit::Centroid, 0, 0, 0.14431560767778717},
              {Orbit::S21, 0.45929258829272316, 0, 0.09509163426728463},
              {Orbit::S21, 0.17056930775176021, 0, 0.10321737053471825},
              {Orbit::S21, 0.050547228317030975, 0, 0.032458497623198080},
              {Orbit::S111, 0.0083947774099576053, 0.26311282963463811, 0.027230314174434994}},
             rule);
      rule.degree = 8;
      break;
    case 9:
    case 10:
      rule = symmetrized_conical(6);
      break;
    default:
      throw QuadratureError("unsupported regular quadrature order " + std::to_string(order) +
                            " (supported: 1..10)");
  }
  return rule;
}

PairAlignment classify_pair(const std::array<int, 3> &test, const std::array<int, 3> &trial,
                            bool same_element)
{
  PairAlignment out;
  if (same_element)
  {
    out.adjacency = Adjacency::Self;
    return out;
  }
  int shared = 0;
  std::array<int, 3> ti{}, si{};  // local indices of shared vertices
  for (int a = 0; a < 3; ++a)
  {
    for (int b = 0; b < 3; ++b)
    {
      if (test[a] == trial[b])
      {
        ti[shared] = a;
        si[shared] = b;
        ++shared;
      }
    }
  }
  auto complete = [](std::array<int, 3> &perm, int used)
  {
    int k = used;
    for (int v = 0; v < 3 && k < 3; ++v)
    {
      bool taken = false;
      for (int u = 0; u < used; ++u)
      {
        taken = taken || perm[u] == v;
      }
      if (!taken)
      {
        perm[k++] = v;
      }
    }
  };
  switch (shared)
  {
    case 0:
      out.adjacency = Adjacency::Disjoint;
      break;
    case 1:
      out.adjacency = Adjacency::Vertex;
      out.test_perm[0] = ti[0];
      out.trial_perm[0] = si[0];
      complete(out.test_perm, 1);
      complete(out.trial_perm, 1);
      break;
    case 2:
      out.adjacency = Adjacency::Edge;
      out.test_perm[0] = ti[0];
      out.test_perm[1] = ti[1];
      out.trial_perm[0] = si[0];
      out.trial_perm[1] = si[1];
      complete(out.test_perm, 2);
      complete(out.trial_perm, 2);
      break;
    default:
      throw QuadratureError("triangles share three vertices but are distinct elements");
  }
  return out;
}

SingularPairRule singular_rule(Adjacency adjacency, int order)
{
  if (adjacency == Adjacency::Disjoint)
  {
    throw QuadratureError("singular_rule called for a disjoint pair");
  }
  if (order < 1 || order > 40)
  {
    throw QuadratureError("unsupported singular quadrature order " + std::to_string(order));
  }
  SingularPairRule rule;
  rule.adjacency = adjacency;
  rule.order = order;
  const auto g = gauss_legendre(order);
  // The direction variable sweeps up to a right angle, where 1/r has complex poles close to
  // [0, 1]; two panels there keep order 4 at about six digits.
  LineRule split;
  for (int half = 0; half < 2; ++half)
  {
    for (int i = 0; i < order; ++i)
    {
      split.points.push_back(0.5 * (half + g.points[i]));
      split.weights.push_back(0.5 * g.weights[i]);
    }
  }
  const int angular = adjacency == Adjacency::Self ? 3 : adjacency == Adjacency::Edge ? 2 : 1;
  std::array<const LineRule *, 4> lines{&g, &g, &g, &g};
  lines[angular] = &split;
  const int regions = adjacency == Adjacency::Self ? 6 : adjacency == Adjacency::Edge ? 5 : 2;
  const std::size_t per_region = lines[0]->points.size() * lines[1]->points.size() *
                                 lines[2]->points.size() * lines[3]->points.size();
  rule.x.reserve(regions * per_region);
  rule.y.reserve(regions * per_region);
  rule.weights.reserve(regions * per_region);

  const int n0 = static_cast<int>(lines[0]->points.size());
  const int n1 = static_cast<int>(lines[1]->points.size());
  const int n2 = static_cast<int>(lines[2]->points.size());
  const int n3 = static_cast<int>(lines[3]->points.size());
  for (int region = 0; region < regions; ++region)
  {
    for (int i0 = 0; i0 < n0; ++i0)
    {
      for (int i1 = 0; i1 < n1; ++i1)
      {
        for (int i2 = 0; i2 < n2; ++i2)
        {
          for (int i3 = 0; i3 < n3; ++i3)
          {
            const double xi = lines[0]->points[i0], e1 = lines[1]->points[i1],
                         e2 = lines[2]->points[i2], e3 = lines[3]->points[i3];
            double x1 = 0, x2 = 0, y1 = 0, y2 = 0, jac = 0;
            if (adjacency == Adjacency::Self)
            {
              jac = xi * xi * xi * e1 * e1 * e2;
              switch (region)
              {
                case 0:
                  x1 = xi * e1 * (1 - e2);
                  x2 = xi * (1 - e1 * (1 - e2));
                  y1 = xi * e1 * (1 - e2 * e3);
                  y2 = xi * (1 - e1);
                  break;
                case 1:
                  x1 = xi * e1 * (1 - e2 * e3);
                  x2 = xi * (1 - e1);
                  y1 = xi * e1 * (1 - e2);
                  y2 = xi * (1 - e1 * (1 - e2));
                  break;
                case 2:
                  x1 = xi * (1 - e1 * (1 - e2 * (1 - e3)));
                  x2 = xi * e1 * (1 - e2 * (1 - e3));
                  y1 = xi * (1 - e1);
                  y2 = xi * e1 * (1 - e2);
                  break;
                case 3:
                  x1 = xi * (1 - e1);
                  x2 = xi * e1 * (1 - e2);
                  y1 = xi * (1 - e1 * (1 - e2 * (1 - e3)));
                  y2 = xi * e1 * (1 - e2 * (1 - e3));
                  break;
                case 4:
                  x1 = xi * (1 - e1);
                  x2 = xi * e1 * (1 - e2 * e3);
                  y1 = xi * (1 - e1 * (1 - e2));
                  y2 = xi * e1 * (1 - e2);
                  break;
                default:
                  x1 = xi * (1 - e1 * (1 - e2));
                  x2 = xi * e1 * (1 - e2);
                  y1 = xi * (1 - e1);
                  y2 = xi * e1 * (1 - e2 * e3);
                  break;
              }
            }
            else if (adjacency == Adjacency::Edge)
            {
              jac = xi * xi * xi * e1 * e1;
              switch (region)
              {
                case 0:
                  x1 = xi * (1 - e1 * e3);
                  x2 = xi * e1 * e3;
                  y1 = xi * (1 - e1);
                  y2 = xi * e1 * (1 - e2);
                  break;
                case 1:
                  x1 = xi * (1 - e1);
                  x2 = xi * e1;
                  y1 = xi * (1 - e1 * e2);
                  y2 = xi * e1 * e2 * (1 - e3);
                  jac *= e2;
                  break;
                case 2:
                  x1 = xi * (1 - e1);
                  x2 = xi * e1 * (1 - e2);
                  y1 = xi * (1 - e1 * e2 * e3);
                  y2 = xi * e1 * e2 * e3;
                  jac *= e2;
                  break;
                case 3:
                  x1 = xi * (1 - e1 * e2);
                  x2 = xi * e1 * e2 * (1 - e3);
                  y1 = xi * (1 - e1);
                  y2 = xi * e1;
                  jac *= e2;
                  break;
                default:
                  x1 = xi * (1 - e1);
                  x2 = xi * e1 * (1 - e2 * e3);
                  y1 = xi * (1 - e1 * e2);
                  y2 = xi * e1 * e2;
                  jac *= e2;
                  break;
              }
            }
            else
            {
              jac = xi * xi * xi * e2;
              if (region == 0)
              {
                x1 = xi * (1 - e1);
                x2 = xi * e1;
                y1 = xi * e2 * (1 - e3);
                y2 = xi * e2 * e3;
              }
              else
              {
                x1 = xi * e2 * (1 - e3);
                x2 = xi * e2 * e3;
                y1 = xi * (1 - e1);
                y2 = xi * e1;
              }
            }
            rule.x.emplace_back(x1, x2);
            rule.y.emplace_back(y1, y2);
            rule.weights.push_back(jac * lines[0]->weights[i0] * lines[1]->weights[i1] *
                                   lines[2]->weights[i2] * lines[3]->weights[i3]);
          }
        }
      }
    }
  }
  return rule;
}

double reference_monomial_integral(int a, int b)
{
  // a! b! / (a + b + 2)!
  double num = std::tgamma(a + 1.0) * std::tgamma(b + 1.0);
  return num / std::tgamma(a + b + 3.0);
}

}  // namespace pbbem
