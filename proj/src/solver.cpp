// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/solver.hpp"

#include <chrono>
#include <cmath>

#include "pbbem/preconditioners.hpp"

namespace pbbem
{

SolveReport gmres(const LinearMap &apply_a, const LinearMap &apply_p, const Vector &b,
                  const GmresOptions &options)
{
  const auto start = std::chrono::steady_clock::now();
  const int n = static_cast<int>(b.size());
  const int max_iter = options.max_iter > 0 ? options.max_iter : n;
  SolveReport report;
  report.solution = Vector::Zero(n);
  auto finish = [&]
  {
    report.iterations = static_cast<int>(report.residual_history.size());
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  const Vector r0 = apply_p(b);
  const double beta = r0.norm();
  if (beta == 0.0)
  {
    report.converged = true;
    return finish();
  }

  std::vector<Vector> q{r0 / beta};
  std::vector<Vector> h;  // Hessenberg columns, rotated to upper triangular
  std::vector<double> cs, sn, g{beta};

  for (int k = 0; k < max_iter; ++k)
  {
    Vector w = apply_p(apply_a(q[k]));
    const double w_norm = w.norm();
    Vector col = Vector::Zero(k + 2);
    for (int i = 0; i <= k; ++i)
    {
      col(i) = q[i].dot(w);
      w -= col(i) * q[i];
    }
    if (w.norm() < 0.7 * w_norm)
    {
      for (int i = 0; i <= k; ++i)
      {
        const double c = q[i].dot(w);
        col(i) += c;
        w -= c * q[i];
      }
    }
    const double next = w.norm();
    col(k + 1) = next;
    const bool breakdown = next <= 1e-14 * w_norm;

    for (int i = 0; i < k; ++i)
    {
      const double t = cs[i] * col(i) + sn[i] * col(i + 1);
      col(i + 1) = -sn[i] * col(i) + cs[i] * col(i + 1);
      col(i) = t;
    }
    const double d = std::hypot(col(k), col(k + 1));
    cs.push_back(d == 0.0 ? 1.0 : col(k) / d);
    sn.push_back(d == 0.0 ? 0.0 : col(k + 1) / d);
    col(k) = d;
    h.push_back(col.head(k + 1));
    g.push_back(-sn[k] * g[k]);
    g[k] = cs[k] * g[k];

    const double rel = std::abs(g[k + 1]) / beta;
    report.residual_history.push_back(rel);
    if (rel <= options.tol || breakdown)
    {
      report.converged = true;
      break;
    }
    q.push_back(w / next);
  }

  const int k = static_cast<int>(h.size());
  Vector y(k);
  for (int i = k - 1; i >= 0; --i)
  {
    double s = g[i];
    for (int j = i + 1; j < k; ++j)
    {
      s -= h[j](i) * y(j);
    }
    y(i) = s / h[i](i);
  }
  for (int i = 0; i < k; ++i)
  {
    report.solution += y(i) * q[i];
  }
  return finish();
}

SolveReport gmres(const Matrix &a, const Preconditioner &p, const Vector &b,
                  const GmresOptions &options)
{
  return gmres([&a](const Vector &x) -> Vector { return a * x; },
               [&p](const Vector &x) { return p.apply(x); }, b, options);
}

}  // namespace pbbem
