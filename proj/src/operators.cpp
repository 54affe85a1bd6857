// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/SparseCholesky>

#include "pbbem/quadrature.hpp"

namespace pbbem
{

namespace
{

constexpr double inv_4pi = 0.25 * std::numbers::inv_pi;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Local = std::array<std::array<double, 3>, 3>;

struct PairIntegrals
{
  Local v{};   // ∬ G φ_a φ_b
  Local k{};   // ∬ ∂G/∂n_y φ_a φ_b
  double g = 0.0;  // ∬ G
};

// Per-triangle data for the regular rule: mapped points and weights scaled by 2A.
struct ElementCache
{
  std::vector<Vec3> points;
  std::vector<double> weights;
};

inline void kernel_values(double kappa, const Vec3 &x, const Vec3 &y, const Vec3 &ny,
                          double &g, double &dg)
{
  const Vec3 d = x - y;
  const double r2 = d.squaredNorm();
  const double r = std::sqrt(r2);
  const double inv_r = 1.0 / r;
  if (kappa == 0.0)
  {
    g = inv_4pi * inv_r;
    dg = g * d.dot(ny) / r2;
  }
  else
  {
    const double kr = kappa * r;
    g = inv_4pi * std::exp(-kr) * inv_r;
    dg = g * (1.0 + kr) * d.dot(ny) / r2;
  }
}

// Greedy colouring so that triangles of one colour share no vertex.
std::vector<std::vector<int>> colour_triangles(const SurfaceMesh &mesh)
{
  const int nt = mesh.num_triangles();
  std::vector<std::vector<int>> vertex_tris(mesh.num_vertices());
  for (int t = 0; t < nt; ++t)
  {
    for (int v : mesh.triangle(t))
    {
      vertex_tris[v].push_back(t);
    }
  }
  std::vector<int> colour(nt, -1);
  std::vector<int> forbidden;
  int ncolours = 0;
  for (int t = 0; t < nt; ++t)
  {
    forbidden.assign(ncolours + 1, 0);
    for (int v : mesh.triangle(t))
    {
      for (int s : vertex_tris[v])
      {
        if (colour[s] >= 0)
        {
          forbidden[colour[s]] = 1;
        }
      }
    }
    int c = 0;
    while (forbidden[c])
    {
      ++c;
    }
    colour[t] = c;
    ncolours = std::max(ncolours, c + 1);
  }
  std::vector<std::vector<int>> groups(ncolours);
  for (int t = 0; t < nt; ++t)
  {
    groups[colour[t]].push_back(t);
  }
  return groups;
}

class Assembler
{
public:
  Assembler(const Kernel &kernel, const SurfaceMesh &mesh, const QuadratureOrders &orders)
      : mesh_(mesh), kappa_(kernel.screening()), regular_(regular_rule(orders.regular))
  {
    for (auto adj : {Adjacency::Vertex, Adjacency::Edge, Adjacency::Self})
    {
      singular_[static_cast<int>(adj)] = singular_rule(adj, orders.singular);
    }
    const int nt = mesh.num_triangles();
    cache_.resize(nt);
    for (int t = 0; t < nt; ++t)
    {
      const auto &tri = mesh.triangle(t);
      const Vec3 &p0 = mesh.vertex(tri[0]);
      const Vec3 e1 = mesh.vertex(tri[1]) - p0;
      const Vec3 e2 = mesh.vertex(tri[2]) - p0;
      auto &c = cache_[t];
      for (std::size_t q = 0; q < regular_.size(); ++q)
      {
        c.points.push_back(p0 + regular_.points[q].x() * e1 + regular_.points[q].y() * e2);
        c.weights.push_back(regular_.weights[q] * 2.0 * mesh.area(t));
      }
    }
    for (const auto &p : regular_.points)
    {
      basis_.push_back({1.0 - p.x() - p.y(), p.x(), p.y()});
    }
    std::vector<std::vector<int>> vertex_tris(mesh.num_vertices());
    for (int t = 0; t < nt; ++t)
    {
      for (int v : mesh.triangle(t))
      {
        vertex_tris[v].push_back(t);
      }
    }
    touching_.resize(nt);
    for (int t = 0; t < nt; ++t)
    {
      auto &list = touching_[t];
      for (int v : mesh.triangle(t))
      {
        list.insert(list.end(), vertex_tris[v].begin(), vertex_tris[v].end());
      }
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }

  void run(RowMatrix &V, RowMatrix &K, RowMatrix &D) const
  {
    const int n = mesh_.num_vertices();
    const int nt = mesh_.num_triangles();
    V.setZero(n, n);
    K.setZero(n, n);
    D.setZero(n, n);
    const auto groups = colour_triangles(mesh_);
    for (const auto &group : groups)
    {
      const int gsize = static_cast<int>(group.size());
#pragma omp parallel
      {
        std::vector<int> stamp(nt, -1);
#pragma omp for schedule(dynamic, 4)
        for (int gi = 0; gi < gsize; ++gi)
        {
          const int tau = group[gi];
          for (int s : touching_[tau])
          {
            stamp[s] = tau;
          }
          for (int sigma = 0; sigma < nt; ++sigma)
          {
            PairIntegrals pi;
            if (stamp[sigma] == tau)
            {
              singular_pair(tau, sigma, pi);
            }
            else
            {
              regular_pair(tau, sigma, pi);
            }
            scatter(tau, sigma, pi, V, K, D);
          }
        }
      }
    }
  }

private:
  void regular_pair(int tau, int sigma, PairIntegrals &out) const
  {
    const auto &ct = cache_[tau];
    const auto &cs = cache_[sigma];
    const Vec3 &ny = mesh_.normal(sigma);
    const std::size_t nq = regular_.size();
    for (std::size_t i = 0; i < nq; ++i)
    {
      std::array<double, 3> gv{}, gk{};
      double g0 = 0.0;
      for (std::size_t j = 0; j < nq; ++j)
      {
        double g, dg;
        kernel_values(kappa_, ct.points[i], cs.points[j], ny, g, dg);
        const double w = cs.weights[j];
        g *= w;
        dg *= w;
        g0 += g;
        for (int b = 0; b < 3; ++b)
        {
          gv[b] += g * basis_[j][b];
          gk[b] += dg * basis_[j][b];
        }
      }
      const double wi = ct.weights[i];
      out.g += wi * g0;
      for (int a = 0; a < 3; ++a)
      {
        const double fa = wi * basis_[i][a];
        for (int b = 0; b < 3; ++b)
        {
          out.v[a][b] += fa * gv[b];
          out.k[a][b] += fa * gk[b];
        }
      }
    }
  }

  void singular_pair(int tau, int sigma, PairIntegrals &out) const
  {
    const auto &ta = mesh_.triangle(tau);
    const auto &sa = mesh_.triangle(sigma);
    const PairAlignment al = classify_pair(ta, sa, tau == sigma);
    const SingularPairRule &rule = singular_[static_cast<int>(al.adjacency)];
    const Vec3 &x0 = mesh_.vertex(ta[al.test_perm[0]]);
    const Vec3 ex1 = mesh_.vertex(ta[al.test_perm[1]]) - x0;
    const Vec3 ex2 = mesh_.vertex(ta[al.test_perm[2]]) - x0;
    const Vec3 &y0 = mesh_.vertex(sa[al.trial_perm[0]]);
    const Vec3 ey1 = mesh_.vertex(sa[al.trial_perm[1]]) - y0;
    const Vec3 ey2 = mesh_.vertex(sa[al.trial_perm[2]]) - y0;
    const Vec3 &ny = mesh_.normal(sigma);
    const double jac = 4.0 * mesh_.area(tau) * mesh_.area(sigma);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const Vec2 &xh = rule.x[q];
      const Vec2 &yh = rule.y[q];
      const Vec3 x = x0 + xh.x() * ex1 + xh.y() * ex2;
      const Vec3 y = y0 + yh.x() * ey1 + yh.y() * ey2;
      double g, dg;
      kernel_values(kappa_, x, y, ny, g, dg);
      const double w = rule.weights[q] * jac;
      g *= w;
      dg *= w;
      out.g += g;
      const double px[3] = {1.0 - xh.x() - xh.y(), xh.x(), xh.y()};
      const double py[3] = {1.0 - yh.x() - yh.y(), yh.x(), yh.y()};
      for (int a = 0; a < 3; ++a)
      {
        for (int b = 0; b < 3; ++b)
        {
          const int la = al.test_perm[a];
          const int lb = al.trial_perm[b];
          out.v[la][lb] += g * px[a] * py[b];
          out.k[la][lb] += dg * px[a] * py[b];
        }
      }
    }
  }

  void scatter(int tau, int sigma, const PairIntegrals &pi, RowMatrix &V, RowMatrix &K,
               RowMatrix &D) const
  {
    const auto &ta = mesh_.triangle(tau);
    const auto &sa = mesh_.triangle(sigma);
    std::array<Vec3, 3> ct, cs;
    curls(tau, ct);
    curls(sigma, cs);
    const double nn = kappa_ * kappa_ * mesh_.normal(tau).dot(mesh_.normal(sigma));
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        const int i = ta[a];
        const int j = sa[b];
        V(i, j) += pi.v[a][b];
        K(i, j) += pi.k[a][b];
        D(i, j) += pi.g * ct[a].dot(cs[b]) + nn * pi.v[a][b];
      }
    }
  }

  void curls(int t, std::array<Vec3, 3> &c) const
  {
    const auto &tri = mesh_.triangle(t);
    const double inv = 1.0 / (2.0 * mesh_.area(t));
    for (int k = 0; k < 3; ++k)
    {
      c[k] = (mesh_.vertex(tri[(k + 1) % 3]) - mesh_.vertex(tri[(k + 2) % 3])) * inv;
    }
  }

  const SurfaceMesh &mesh_;
  double kappa_;
  TriangleRule regular_;
  std::array<SingularPairRule, 4> singular_;
  std::vector<ElementCache> cache_;
  std::vector<std::array<double, 3>> basis_;
  std::vector<std::vector<int>> touching_;
};

}  // namespace

std::string Kernel::name() const
{
  return family == KernelFamily::Laplace ? "laplace" : "yukawa(" + std::to_string(kappa) + ")";
}

double greens(const Kernel &kernel, const Vec3 &x, const Vec3 &y)
{
  const double r = (x - y).norm();
  if (r == 0.0)
  {
    throw SingularityError("Green's function evaluated at coincident points");
  }
  return inv_4pi * std::exp(-kernel.screening() * r) / r;
}

double greens_normal_y(const Kernel &kernel, const Vec3 &x, const Vec3 &y, const Vec3 &n_y)
{
  const double r = (x - y).norm();
  if (r == 0.0)
  {
    throw SingularityError("Green's function evaluated at coincident points");
  }
  double g, dg;
  kernel_values(kernel.screening(), x, y, n_y, g, dg);
  return dg;
}

std::string to_string(OperatorTag tag)
{
  switch (tag)
  {
    case OperatorTag::V:
      return "V";
    case OperatorTag::K:
      return "K";
    case OperatorTag::T:
      return "T";
    case OperatorTag::D:
      return "D";
    case OperatorTag::I:
      return "I";
  }
  return "?";
}

OperatorSet assemble_operators(const Kernel &kernel, const SurfaceMesh &mesh,
                               const QuadratureOrders &orders)
{
  Assembler assembler(kernel, mesh, orders);
  RowMatrix v, k, d;
  assembler.run(v, k, d);
  OperatorSet out;
  out.kernel = kernel;
  out.orders = orders;
  out.V = 0.5 * (v + v.transpose());
  v.resize(0, 0);
  out.D = 0.5 * (d + d.transpose());
  d.resize(0, 0);
  out.K = k;
  k.resize(0, 0);
  out.T = out.K.transpose();
  return out;
}

GalerkinMatrix assemble(OperatorTag op, const Kernel &kernel, const SurfaceMesh &mesh,
                        const QuadratureOrders &orders)
{
  GalerkinMatrix out;
  out.tag = op;
  out.kernel = kernel;
  if (op == OperatorTag::I)
  {
    out.values = Matrix(assemble_mass(mesh));
    return out;
  }
  OperatorSet ops = assemble_operators(kernel, mesh, orders);
  switch (op)
  {
    case OperatorTag::V:
      out.values = std::move(ops.V);
      break;
    case OperatorTag::K:
      out.values = std::move(ops.K);
      break;
    case OperatorTag::T:
      out.values = std::move(ops.T);
      break;
    default:
      out.values = std::move(ops.D);
      break;
  }
  return out;
}

SparseMatrix assemble_mass(const SurfaceMesh &mesh)
{
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t)
  {
    const auto &tri = mesh.triangle(t);
    const double a = mesh.area(t) / 12.0;
    for (int i = 0; i < 3; ++i)
    {
      for (int j = 0; j < 3; ++j)
      {
        entries.emplace_back(tri[i], tri[j], i == j ? 2.0 * a : a);
      }
    }
  }
  SparseMatrix m(mesh.num_vertices(), mesh.num_vertices());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Matrix harmonic_probes(const SurfaceMesh &mesh)
{
  const Vec3 c = mesh.centroid();
  Matrix probes(mesh.num_vertices(), 9);
  for (int i = 0; i < mesh.num_vertices(); ++i)
  {
    const Vec3 d = (mesh.vertex(i) - c).normalized();
    probes.row(i) << 1.0, d.x(), d.y(), d.z(), d.x() * d.y(), d.y() * d.z(), d.z() * d.x(),
        d.x() * d.x() - d.y() * d.y(), 3.0 * d.z() * d.z() - 1.0;
  }
  return probes;
}

double calderon_square_residual(const OperatorSet &ops, const SurfaceMesh &mesh, double ratio)
{
  const SparseMatrix m = assemble_mass(mesh);
  Eigen::SimplicialLDLT<SparseMatrix> chol(m);
  const int n = mesh.num_vertices();
  auto apply_c = [&](const Vector &u) -> Vector
  {
    Vector out(2 * n);
    out.head(n) = chol.solve(-ops.K * u.head(n) + ratio * (ops.V * u.tail(n)));
    out.tail(n) = chol.solve(ops.D * u.head(n) / ratio + ops.T * u.tail(n));
    return out;
  };
  auto mnorm = [&](const Vector &u)
  {
    return std::sqrt(u.head(n).dot(m * u.head(n)) + u.tail(n).dot(m * u.tail(n)));
  };
  const Matrix probes = harmonic_probes(mesh);
  double worst = 0.0;
  for (int p = 0; p < probes.cols(); ++p)
  {
    for (int half = 0; half < 2; ++half)
    {
      Vector v = Vector::Zero(2 * n);
      v.segment(half * n, n) = probes.col(p);
      const Vector r = apply_c(apply_c(v)) - 0.25 * v;
      worst = std::max(worst, mnorm(r) / mnorm(0.25 * v));
    }
  }
  return worst;
}

double calderon_square_residual(const Kernel &kernel, const SurfaceMesh &mesh,
                                const QuadratureOrders &orders, double ratio)
{
  return calderon_square_residual(assemble_operators(kernel, mesh, orders), mesh, ratio);
}

}  // namespace pbbem
