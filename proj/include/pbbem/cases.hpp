// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_CASES_HPP
#define PBBEM_CASES_HPP

#include <string>
#include <string_view>
#include <vector>

#include "pbbem/preconditioners.hpp"

namespace pbbem
{

// One benchmark configuration: formulation plus preconditioner.
struct CaseSpec
{
  std::string id;
  FormulationKind formulation = FormulationKind::DirectInternal;
  PreconditionerKind preconditioner = PreconditionerKind::None;
  bool scaled = false;  // scaled-mass composition on a Calderón preconditioner
  bool fast = false;    // Calderón blocks re-assembled with relaxed quadrature
  double alpha = 0.0;   // CFIE kinds only
  double beta = 0.0;
};

// Cases 1–26 followed by 20b and 23b.
const std::vector<CaseSpec> &case_table();
std::vector<std::string> case_ids();
// Throws ValidationError for unknown ids.
const CaseSpec &find_case(std::string_view id);

// "<kind>[+scaled_mass][+fast]", as produced by Preconditioner::name().
struct PreconditionerChoice
{
  PreconditionerKind kind = PreconditionerKind::None;
  bool scaled = false;
  bool fast = false;
};
PreconditionerChoice parse_preconditioner_choice(std::string_view name);

bool is_calderon(PreconditionerKind kind);
CalderonVariant calderon_variant(PreconditionerKind kind);

struct PreconditionerOptions
{
  JufferScaling juffer = JufferScaling::Identity;
  QuadratureOrders relaxed = relaxed_orders;
};

// Scaled-mass coefficients for `spec` on `system`: Juffer uses juffer_scaling, scaled half
// Calderón the half-Calderón accumulation pair, anything else the system's identity coefficients.
Scaling case_scaling(const CaseSpec &spec, const BlockSystem &system, const PhysicalParams &params,
                     const PreconditionerOptions &options = {});

Preconditioner make_preconditioner(const CaseSpec &spec, const BlockSystem &system,
                                   const OperatorContext &ctx,
                                   const PreconditionerOptions &options = {});

}  // namespace pbbem

#endif  // PBBEM_CASES_HPP
