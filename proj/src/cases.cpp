// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/cases.hpp"

namespace pbbem
{

namespace
{

using F = FormulationKind;
using P = PreconditionerKind;

std::vector<CaseSpec> make_table()
{
  return {
      {"1", F::DirectInternal, P::None},
      {"2", F::DirectInternal, P::BlockDiagonal},
      {"3", F::DirectExternal, P::None},
      {"4", F::DirectExternal, P::BlockDiagonal},
      {"5", F::DirectInternalPermuted, P::None},
      {"6", F::DirectInternalPermuted, P::BlockDiagonal},
      {"7", F::DirectExternalPermuted, P::None},
      {"8", F::DirectExternalPermuted, P::BlockDiagonal},
      {"9", F::Juffer, P::Mass},
      {"10", F::Juffer, P::ScaledMass},
      {"11", F::Lu, P::None},
      {"12", F::Lu, P::Mass},
      {"13", F::MullerInternal, P::Mass},
      {"14", F::MullerExternal, P::Mass},
      {"15", F::PmchwtInternal, P::Mass},
      {"16", F::PmchwtInternal, P::CalderonFull},
      {"17", F::PmchwtInternal, P::CalderonInterior},
      {"18", F::PmchwtInternal, P::CalderonExterior},
      {"19", F::PmchwtExternal, P::Mass},
      {"20", F::PmchwtExternal, P::CalderonFull},
      {"21", F::PmchwtExternal, P::CalderonExterior},
      {"22", F::PmchwtExternal, P::CalderonInterior},
      {"23", F::PmchwtInternal, P::CalderonInterior, true},
      {"24", F::PmchwtInternal, P::CalderonExterior, true},
      {"25", F::PmchwtExternal, P::CalderonExterior, true},
      {"26", F::PmchwtExternal, P::CalderonInterior, true},
      {"20b", F::PmchwtExternal, P::CalderonFull, false, true},
      {"23b", F::PmchwtInternal, P::CalderonInterior, true, true},
  };
}

}  // namespace

const std::vector<CaseSpec> &case_table()
{
  static const std::vector<CaseSpec> table = make_table();
  return table;
}

std::vector<std::string> case_ids()
{
  std::vector<std::string> out;
  for (const auto &c : case_table())
  {
    out.push_back(c.id);
  }
  return out;
}

const CaseSpec &find_case(std::string_view id)
{
  for (const auto &c : case_table())
  {
    if (c.id == id)
    {
      return c;
    }
  }
  throw ValidationError("unknown case id '" + std::string(id) + "'; expected 1-26, 20b or 23b");
}

PreconditionerChoice parse_preconditioner_choice(std::string_view name)
{
  PreconditionerChoice out;
  auto strip = [&name](std::string_view suffix)
  {
    if (name.size() > suffix.size() && name.substr(name.size() - suffix.size()) == suffix)
    {
      name.remove_suffix(suffix.size());
      return true;
    }
    return false;
  };
  out.fast = strip("+fast");
  out.scaled = strip("+scaled_mass");
  out.kind = parse_preconditioner(name);
  if ((out.fast || out.scaled) && !is_calderon(out.kind))
  {
    throw ValidationError("+scaled_mass and +fast apply to Calderón preconditioners only");
  }
  if (out.scaled && out.kind == PreconditionerKind::CalderonFull)
  {
    throw ValidationError("scaled-mass composition needs the interior or exterior Calderón variant");
  }
  return out;
}

bool is_calderon(PreconditionerKind kind)
{
  return kind == P::CalderonFull || kind == P::CalderonInterior || kind == P::CalderonExterior;
}

CalderonVariant calderon_variant(PreconditionerKind kind)
{
  switch (kind)
  {
    case P::CalderonFull:
      return CalderonVariant::Full;
    case P::CalderonInterior:
      return CalderonVariant::Interior;
    case P::CalderonExterior:
      return CalderonVariant::Exterior;
    default:
      break;
  }
  throw ValidationError(to_string(kind) + " is not a Calderón preconditioner");
}

Scaling case_scaling(const CaseSpec &spec, const BlockSystem &system, const PhysicalParams &params,
                     const PreconditionerOptions &options)
{
  if (is_calderon(spec.preconditioner))
  {
    return half_calderon_points(spec.formulation, calderon_variant(spec.preconditioner), params);
  }
  if (spec.formulation == F::Juffer)
  {
    return juffer_scaling(params, options.juffer);
  }
  if (!system.identity)
  {
    throw ValidationError("scaled mass preconditioner needs a second-kind formulation, got " +
                          to_string(spec.formulation));
  }
  return *system.identity;
}

Preconditioner make_preconditioner(const CaseSpec &spec, const BlockSystem &system,
                                   const OperatorContext &ctx, const PreconditionerOptions &options)
{
  switch (spec.preconditioner)
  {
    case P::None:
      return {};
    case P::BlockDiagonal:
      return block_diagonal(system);
    case P::Mass:
      return mass_preconditioner(ctx.mass());
    case P::ScaledMass:
    {
      const Scaling s = case_scaling(spec, system, ctx.params(), options);
      return scaled_mass(s[0], s[1], ctx.mass());
    }
    case P::CalderonFull:
    case P::CalderonInterior:
    case P::CalderonExterior:
      break;
  }
  const CalderonVariant variant = calderon_variant(spec.preconditioner);
  std::optional<Scaling> scaling;
  if (spec.scaled)
  {
    scaling = case_scaling(spec, system, ctx.params(), options);
  }
  if (spec.fast)
  {
    return fast_calderon(system, ctx.mesh(), ctx.params(), variant, options.relaxed, scaling);
  }
  return calderon(system, ctx, variant, scaling);
}

}  // namespace pbbem
