// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_KIRKWOOD_HPP
#define PBBEM_KIRKWOOD_HPP

#include <vector>

#include "pbbem/molecule_io.hpp"

namespace pbbem
{

// Point charges in a dielectric sphere centred at the origin, screened exterior.
struct SphereProblem
{
  double radius = 1.0;
  ChargeSet charges;
  PhysicalParams params;
  int max_order = 50;
};

struct KirkwoodResult
{
  double energy = 0.0;  // kcal/mol
  int order = 0;        // last multipole order summed
  double last_term = 0.0;
};

// Multipole-series reaction field. Throws ValidationError for charges outside 0.95·radius and
// when the last retained order still changes the energy by 1e-8 relative or more.
KirkwoodResult kirkwood_solve(const SphereProblem &problem);
double kirkwood_energy(const SphereProblem &problem);

// Reaction potential at interior points, in the q/(4πεr) convention, truncated at max_order.
std::vector<double> kirkwood_reaction_potential(const SphereProblem &problem,
                                                const std::vector<Vec3> &points);

// ½·C·(1/(ε_ext(1+κR)) − 1/ε_int)/R for a centred charge q.
double born_energy(double q, double radius, const PhysicalParams &params);

}  // namespace pbbem

#endif  // PBBEM_KIRKWOOD_HPP
