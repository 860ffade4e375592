#include "hjsg/adapt/adaptivity.hpp"

#include "hjsg/core/atomic_file.hpp"
#include "hjsg/core/error.hpp"
#include "hjsg/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_set>

namespace hjsg::adapt
{
using mra::AdaptiveSpace;
using mra::ElementKey;
using mra::ElementKeyHash;

double AdaptConfig::coarsen_threshold() const
{
  if (eta >= 0.0)
    return eta;
  return std::isinf(eps) ? 0.0 : eps / 10.0;
}

void AdaptConfig::validate() const
{
  if (max_level < 1)
    throw ConfigError("adaptivity: max level must be at least 1");
  if (std::isnan(eps) || eps <= 0.0)
    throw ConfigError("adaptivity: eps must be positive");
  double const e = coarsen_threshold();
  if (std::isinf(eps))
    return;
  if (!(e > 0.0 && e < eps))
    throw ConfigError("adaptivity: eta must satisfy 0 < eta < eps");
}

namespace
{
double support_scale(ElementKey const &key, int dim)
{
  int s = 0;
  for (int m = 0; m < dim; ++m)
    s += std::max(key.level(m) - 1, 0);
  return std::pow(2.0, 0.5 * s);
}

void require_alpert(HierCoeffField const &phi)
{
  if (!phi.space())
    throw ConfigError("adaptivity: field has no space");
  if (phi.family() != mra::BasisFamily::alpert || phi.shape().ncomp != 1)
    throw ConfigError("adaptivity: expected a scalar Alpert field");
}

std::shared_ptr<AdaptiveSpace const> make_space(HierCoeffField const &phi, int max_level,
                                                std::vector<ElementKey> keys)
{
  int const dim = phi.space()->dim();
  int const level = std::max(max_level, phi.space()->max_level());
  return std::make_shared<AdaptiveSpace const>(dim, level, std::move(keys));
}
} // namespace

double element_indicator(HierCoeffField const &phi, std::size_t e, bool level_scaled)
{
  double s = 0.0;
  for (double v : phi.block(e))
    s += v * v;
  double const norm = std::sqrt(s);
  return level_scaled ? norm * support_scale(phi.space()->key(e), phi.space()->dim()) : norm;
}

double element_indicator(HierCoeffField const &phi, ElementKey const &key, bool level_scaled)
{
  std::ptrdiff_t const e = phi.space()->find(key);
  if (e < 0)
    throw ConfigError("element_indicator: inactive element");
  return element_indicator(phi, static_cast<std::size_t>(e), level_scaled);
}

std::vector<double> indicators(HierCoeffField const &phi, bool level_scaled)
{
  std::ptrdiff_t const n = static_cast<std::ptrdiff_t>(phi.elements());
  std::vector<double> out(n);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t e = 0; e < n; ++e)
    out[e] = element_indicator(phi, static_cast<std::size_t>(e), level_scaled);
  return out;
}

AdaptResult refine(HierCoeffField const &phi, AdaptConfig const &cfg)
{
  require_alpert(phi);
  int const dim = phi.space()->dim();
  auto const ind = indicators(phi, cfg.level_scaled);
  auto const &space = *phi.space();

  std::unordered_set<ElementKey, ElementKeyHash> active(space.keys().begin(), space.keys().end());
  std::vector<ElementKey> added;
  for (std::size_t e = 0; e < space.size(); ++e)
  {
    ElementKey const key = space.key(e);
    if (!(ind[e] > cfg.eps) || key.level_max(dim) >= cfg.max_level)
      continue;
    for (int m = 0; m < dim; ++m)
      for (auto const &child : mra::children(key, m, cfg.max_level))
        if (active.insert(child).second)
          added.push_back(child);
  }
  if (added.empty())
    return {phi, false};

  // New elements carry zero blocks, so no further pass can exceed eps; the
  // completion only adds ancestors, which are zero as well.
  std::vector<ElementKey> keys(active.begin(), active.end());
  keys = mra::complete_hierarchy(dim, std::move(keys));
  return {phi.transferred_to(make_space(phi, cfg.max_level, std::move(keys))), true};
}

std::vector<ElementKey> coarsen_removed(HierCoeffField const &phi, AdaptConfig const &cfg)
{
  require_alpert(phi);
  auto const &space = *phi.space();
  int const dim = space.dim();
  int const max_level = space.max_level();
  double const eta = cfg.coarsen_threshold();
  auto const ind = indicators(phi, cfg.level_scaled);

  std::unordered_set<ElementKey, ElementKeyHash> active(space.keys().begin(), space.keys().end());
  auto is_leaf = [&](ElementKey const &key) {
    for (int m = 0; m < dim; ++m)
      for (auto const &child : mra::children(key, m, max_level))
        if (active.contains(child))
          return false;
    return true;
  };

  std::vector<ElementKey> removed;
  bool changed = true;
  while (changed)
  {
    changed = false;
    std::vector<ElementKey> round;
    for (std::size_t e = 0; e < space.size(); ++e)
    {
      ElementKey const key = space.key(e);
      if (key == ElementKey::root() || !active.contains(key) || !(ind[e] < eta))
        continue;
      if (is_leaf(key))
        round.push_back(key);
    }
    for (auto const &key : round)
      active.erase(key);
    changed = !round.empty();
    removed.insert(removed.end(), round.begin(), round.end());
  }
  std::sort(removed.begin(), removed.end());
  return removed;
}

AdaptResult coarsen(HierCoeffField const &phi, AdaptConfig const &cfg)
{
  auto const removed = coarsen_removed(phi, cfg);
  if (removed.empty())
    return {phi, false};
  std::vector<ElementKey> keys;
  keys.reserve(phi.elements() - removed.size());
  for (auto const &key : phi.space()->keys())
    if (!std::binary_search(removed.begin(), removed.end(), key))
      keys.push_back(key);
  auto space = std::make_shared<AdaptiveSpace const>(phi.space()->dim(), phi.space()->max_level(),
                                                     std::move(keys));
  return {phi.transferred_to(space), true};
}

HierCoeffField adaptive_initial_projection(alpert::ScalarFunction const &f, int dim,
                                           alpert::AlpertBasis1D const &basis,
                                           AdaptConfig const &cfg,
                                           alpert::ProjectionOptions const &opts)
{
  auto space = AdaptiveSpace::root_only(dim, cfg.max_level);
  HierCoeffField phi = alpert::project_L2(f, space, basis, opts);
  while (true)
  {
    auto grown = refine(phi, cfg);
    if (!grown.changed)
      break;
    phi = alpert::project_L2(f, grown.phi.space(), basis, opts, &phi);
  }
  return coarsen(phi, cfg).phi;
}

std::size_t dof(HierCoeffField const &phi)
{
  return phi.elements() * static_cast<std::size_t>(phi.shape().component_size());
}

void write_active_set_csv(std::string const &path, HierCoeffField const &phi, bool level_scaled)
{
  auto const &space = *phi.space();
  int const dim = space.dim();
  auto const ind = indicators(phi, level_scaled);
  write_file_atomic(path, [&](std::ostream &os) {
    for (int m = 0; m < dim; ++m)
      os << 'l' << m + 1 << ',';
    for (int m = 0; m < dim; ++m)
      os << 'j' << m + 1 << ',';
    os << "indicator\n";
    os.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t e = 0; e < space.size(); ++e)
    {
      ElementKey const key = space.key(e);
      for (int m = 0; m < dim; ++m)
        os << key.level(m) << ',';
      for (int m = 0; m < dim; ++m)
        os << key.translation(m) << ',';
      os << ind[e] << '\n';
    }
  });
}

} // namespace hjsg::adapt
