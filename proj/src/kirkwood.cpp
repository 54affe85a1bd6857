// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/kirkwood.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pbbem
{

namespace
{

// Reaction-field factors F_n: a source s·r'^n/r^{n+1} inside induces s·F_n·r^n/R^{2n+1}.
std::vector<double> mode_factors(const SphereProblem &p, int order)
{
  const double ei = p.params.eps_int, ee = p.params.eps_ext;
  const double x = p.params.kappa * p.radius;
  std::vector<double> f(order + 1);
  // t = k_n(x)/k_{n-1}(x) for the modified spherical Bessel functions of the second kind.
  double t = 0.0;
  for (int n = 0; n <= order; ++n)
  {
    double rho;  // x·k_n'(x)/k_n(x)
    if (x == 0.0)
    {
      rho = -(n + 1.0);
    }
    else if (n == 0)
    {
      rho = -(1.0 + x);
    }
    else
    {
      t = n == 1 ? 1.0 + 1.0 / x : 1.0 / t + (2.0 * n - 1.0) / x;
      rho = -x / t - (n + 1.0);
    }
    f[n] = (ee * rho + ei * (n + 1.0)) / (ei * n - ee * rho);
  }
  return f;
}

void check_inside(const SphereProblem &p)
{
  if (!(p.radius > 0.0))
  {
    throw ValidationError("sphere radius must be positive");
  }
  p.params.validate();
  for (std::size_t j = 0; j < p.charges.size(); ++j)
  {
    if (p.charges.atoms[j].position.norm() > 0.95 * p.radius)
    {
      throw ValidationError("charge " + std::to_string(j + 1) +
                            " lies beyond 0.95 of the sphere radius");
    }
  }
}

// Legendre P_0..P_order at c.
void legendre(double c, int order, std::vector<double> &out)
{
  out.assign(order + 1, 0.0);
  out[0] = 1.0;
  if (order > 0)
  {
    out[1] = c;
  }
  for (int n = 1; n < order; ++n)
  {
    out[n + 1] = ((2.0 * n + 1.0) * c * out[n] - n * out[n - 1]) / (n + 1.0);
  }
}

// Per-order contributions Σ_n to φ_reac(x) from every charge.
std::vector<double> potential_terms(const SphereProblem &p, const std::vector<double> &f,
                                    const Vec3 &x)
{
  const int order = static_cast<int>(f.size()) - 1;
  std::vector<double> terms(order + 1, 0.0), pl;
  const double rx = x.norm();
  const double scale = 1.0 / (4.0 * std::numbers::pi * p.params.eps_int * p.radius);
  for (const auto &atom : p.charges.atoms)
  {
    const double ry = atom.position.norm();
    const double c = rx > 0.0 && ry > 0.0 ? x.dot(atom.position) / (rx * ry) : 1.0;
    legendre(std::clamp(c, -1.0, 1.0), order, pl);
    const double u = rx * ry / (p.radius * p.radius);
    double un = 1.0;
    for (int n = 0; n <= order; ++n)
    {
      terms[n] += atom.charge * scale * f[n] * un * pl[n];
      un *= u;
    }
  }
  return terms;
}

}  // namespace

KirkwoodResult kirkwood_solve(const SphereProblem &problem)
{
  check_inside(problem);
  const int order = problem.max_order;
  const auto f = mode_factors(problem, order);
  std::vector<double> per_order(order + 1, 0.0);
  for (const auto &atom : problem.charges.atoms)
  {
    const auto t = potential_terms(problem, f, atom.position);
    for (int n = 0; n <= order; ++n)
    {
      per_order[n] += atom.charge * t[n];
    }
  }
  const double c = 0.5 * coulomb_kcal * 4.0 * std::numbers::pi;
  KirkwoodResult out;
  for (int n = 0; n <= order; ++n)
  {
    out.energy += c * per_order[n];
    out.order = n;
    out.last_term = c * per_order[n];
    if (n >= 2 && std::abs(out.last_term) < 1e-15 * std::abs(out.energy) &&
        std::abs(c * per_order[n - 1]) < 1e-15 * std::abs(out.energy))
    {
      return out;
    }
  }
  if (std::abs(out.last_term) >= 1e-8 * std::abs(out.energy) && out.energy != 0.0)
  {
    throw ValidationError("Kirkwood series not converged at order " + std::to_string(order) +
                          ": last term " + std::to_string(out.last_term) + " kcal/mol");
  }
  return out;
}

double kirkwood_energy(const SphereProblem &problem)
{
  return kirkwood_solve(problem).energy;
}

std::vector<double> kirkwood_reaction_potential(const SphereProblem &problem,
                                                const std::vector<Vec3> &points)
{
  check_inside(problem);
  const auto f = mode_factors(problem, problem.max_order);
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto &x : points)
  {
    if (x.norm() >= problem.radius)
    {
      throw ValidationError("reaction potential requested outside the sphere");
    }
    double s = 0.0;
    for (double t : potential_terms(problem, f, x))
    {
      s += t;
    }
    out.push_back(s);
  }
  return out;
}

double born_energy(double q, double radius, const PhysicalParams &params)
{
  return 0.5 * coulomb_kcal * q * q *
         (1.0 / (params.eps_ext * (1.0 + params.kappa * radius)) - 1.0 / params.eps_int) / radius;
}

}  // namespace pbbem
