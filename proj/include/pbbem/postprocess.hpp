// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_POSTPROCESS_HPP
#define PBBEM_POSTPROCESS_HPP

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include "pbbem/cases.hpp"

namespace pbbem
{

// Laplace-kernel reaction potential V[γ_N⁻] − K[γ_D⁻] at interior points. Throws
// SingularityError for points within 1e-6 Å of the surface.
Vector reaction_potential(const TraceSolution &solution, const SurfaceMesh &mesh,
                          const PhysicalParams &params, const std::vector<Vec3> &points,
                          int quad_order = 4);

// ½·C·4π·Σ q φ_reac in kcal/mol, with potentials in the q/(4πεr) convention.
double solvation_energy(const ChargeSet &charges, const Vector &phi_reac);

using Complex = std::complex<double>;

struct SpectrumOptions
{
  bool override_guard = false;
  int max_dimension = 20000;
};

struct SpectrumReport
{
  std::string case_id;
  std::vector<Complex> eigenvalues;
  double condition_number = 0.0;
  std::vector<Complex> predicted_points;
  // "raw" when the matrix handed to GMRES is A itself, "preconditioned" for P⁻¹A.
  std::string matrix;
};

// Dense spectrum and 2-norm condition number of P⁻¹A. Throws ValidationError above the guard.
SpectrumReport spectrum(const Matrix &a, const Preconditioner &p,
                        const SpectrumOptions &options = {});

std::vector<Complex> predict_accumulation(const CaseSpec &spec, const PhysicalParams &params);

// "# case=<id> matrix=<kind> predicted=<re>:<im>;..." then one "re,im" row per eigenvalue.
void write_spectrum(std::ostream &out, const SpectrumReport &report);
void write_spectrum(const std::string &path, const SpectrumReport &report);

struct Cluster
{
  Complex medoid;
  int size = 0;
};

// Greedy density clustering: the eigenvalue with the most neighbours within
// rel_radius·|λ| seeds a cluster, its neighbourhood is removed, and so on. Medoids minimise
// the summed distance inside each neighbourhood. Sorted by decreasing size.
std::vector<Cluster> find_clusters(const std::vector<Complex> &values, int count,
                                   double rel_radius = 0.1);

}  // namespace pbbem

#endif  // PBBEM_POSTPROCESS_HPP
