#pragma once

#include "hjsg/alpert/flux_table.hpp"
#include "hjsg/interp/transform.hpp"
#include "hjsg/ldg/hamiltonian.hpp"
#include "hjsg/mra/coeff_field.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

namespace hjsg::ldg
{
using mra::HierCoeffField;

struct DiscretizationConfig
{
  int dim = 2;
  int k = 1;
  int M = 1;
  int max_level = 4;
  alpert::Boundary bc = alpert::Boundary::periodic;
  std::string table_cache_dir; // empty: build tables in memory only
};

// p_m^1 and p_m^2 for each dimension, stacked as one field with 2d
// components: component 2m + (tau - 1).
struct Gradients
{
  HierCoeffField stacked;
  HierCoeffField component(int m, int tau) const { return stacked.component(2 * m + tau - 1); }
};

struct RhsOptions
{
  // Recompute alpha from this evaluation's point values (sampled mode).
  bool refresh_alpha = false;
  // Where to write per-element diagnostics if a non-finite flux appears.
  std::optional<std::filesystem::path> diagnostics_path;
  bool serial = false;
};

class LdgOperator
{
public:
  explicit LdgOperator(DiscretizationConfig const &cfg);

  DiscretizationConfig const &config() const { return cfg_; }
  interp::InterpTransforms const &transforms() const { return transforms_; }
  alpert::AlpertBasis1D const &alpert() const { return transforms_.alpert(); }
  mra::Operator1D const &flux_table(int tau) const { return tau == 1 ? flux1_ : flux2_; }

  Gradients reconstruct_gradients(HierCoeffField const &phi, bool serial = false) const;

  // L_h(phi) = -(projection onto the Alpert space of I_h^M of the
  // Lax-Friedrichs flux). alpha is read, and overwritten when
  // options.refresh_alpha is set and the spec uses sampled bounds.
  HierCoeffField rhs(HierCoeffField const &phi, HamiltonianSpec const &spec,
                     std::vector<double> &alpha, RhsOptions const &options = {}) const;

  // Same pipeline starting from given gradient fields (2d components).
  HierCoeffField rhs_from_gradients(Gradients const &grads, HamiltonianSpec const &spec,
                                    std::vector<double> &alpha,
                                    RhsOptions const &options = {}) const;

  // Dissipation constants for phi (analytic bound or sampled).
  std::vector<double> alpha_for(HierCoeffField const &phi, HamiltonianSpec const &spec) const;

private:
  DiscretizationConfig cfg_;
  interp::InterpTransforms transforms_;
  mra::Operator1D flux1_;
  mra::Operator1D flux2_;
};

} // namespace hjsg::ldg
