#pragma once

#include "hjsg/mra/coeff_field.hpp"
#include "hjsg/mra/operator1d.hpp"

#include <span>

namespace hjsg::mra
{
// Which node pairs of a 1D operator take part in an application.
enum class CouplingPart
{
  full,
  coarsening, // output node is an ancestor of (or equal to) the input node
  refining    // output node is a strict descendant of the input node
};

inline bool part_accepts(CouplingPart part, Node out, Node in)
{
  switch (part)
  {
  case CouplingPart::full:
    return true;
  case CouplingPart::coarsening:
    return is_ancestor_or_self(out, in);
  case CouplingPart::refining:
    return out != in && is_ancestor_or_self(in, out);
  }
  return false;
}

// v[e] = sum over f in the m-fiber of e of op(e_m, f_m) (x) I applied to u[f],
// restricted to the pairs selected by part. The result lives on u's space,
// with extent op.rows() along m.
HierCoeffField apply_dim(Operator1D const &op, int m, CouplingPart part,
                         HierCoeffField const &u, BasisFamily out_family);

// Same as apply_dim but accumulates into out, whose shape must match.
void apply_dim_add(Operator1D const &op, int m, CouplingPart part, HierCoeffField const &u,
                   HierCoeffField &out);

// Serial reference: direct loop over all element pairs. Quadratic in the
// number of elements; for tests and benchmarks only.
HierCoeffField apply_dim_serial(Operator1D const &op, int m, CouplingPart part,
                                HierCoeffField const &u, BasisFamily out_family);

// Restriction to the active set of the tensor operator ops[0] (x) ... (x)
// ops[d-1]. Exact on hierarchically complete spaces provided every nonzero
// block couples nodes in an ancestor-descendant relation. Uses the split
// T = T'(U_0 u) + L_0(T' u) recursively.
HierCoeffField apply_tensor(std::span<Operator1D const *const> ops, HierCoeffField const &u,
                            BasisFamily out_family, bool serial = false);

} // namespace hjsg::mra
