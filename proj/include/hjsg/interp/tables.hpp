#pragma once

#include "hjsg/alpert/basis.hpp"
#include "hjsg/interp/basis.hpp"
#include "hjsg/mra/operator1d.hpp"

namespace hjsg::interp
{
// Alpert coefficients to values at interpolation points:
// block (a, b)[i][i'] = v_{b,i'}(x_{a,i}), for nested supports of a and b.
mra::Operator1D build_point_eval_table(alpert::AlpertBasis1D const &alpert,
                                       InterpBasis1D const &interp, int max_level);

// Interpolatory coefficients to point values: block (a, b)[i][i'] =
// psi_{b,i'}(x_{a,i}) for b an ancestor of (or equal to) a. Entries for
// descendants vanish by nestedness and are not stored.
mra::Operator1D build_interp_eval_table(InterpBasis1D const &interp, int max_level);

// Volume coupling: block (a, b)[i][i'] = int v_{a,i} psi_{b,i'} dx with a
// an Alpert node and b an interpolatory node.
mra::Operator1D build_coupling_table(alpert::AlpertBasis1D const &alpert,
                                     InterpBasis1D const &interp, int max_level);

} // namespace hjsg::interp
