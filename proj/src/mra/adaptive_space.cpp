#include "hjsg/mra/adaptive_space.hpp"

#include "hjsg/core/error.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace hjsg::mra
{
std::vector<ElementKey> children(ElementKey const &e, int m, int max_level)
{
  Node const n = e.node(m);
  int const level = node_level(n);
  if (level + 1 > max_level)
    return {};
  if (n == 0)
    return {e.with_node(m, 1)};
  return {e.with_node(m, 2 * n), e.with_node(m, 2 * n + 1)};
}

AdaptiveSpace::AdaptiveSpace(int dim, int max_level, std::vector<ElementKey> keys)
    : dim_(dim), max_level_(max_level), keys_(std::move(keys))
{
  if (dim < 1 || dim > max_dim)
    throw ConfigError("AdaptiveSpace: dimension must be in [1, " + std::to_string(max_dim) + "]");
  if (max_level < 0 || max_level > level_cap)
    throw ConfigError("AdaptiveSpace: max level must be in [0, " + std::to_string(level_cap) + "]");

  std::sort(keys_.begin(), keys_.end());
  keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
  for (auto const &key : keys_)
  {
    for (int m = dim; m < max_dim; ++m)
      if (key.node(m) != 0)
        throw ConfigError("AdaptiveSpace: key uses a dimension beyond dim");
    if (key.level_max(dim) > max_level)
      throw ConfigError("AdaptiveSpace: key exceeds the max level");
  }

  index_.reserve(keys_.size() * 2);
  for (std::size_t e = 0; e < keys_.size(); ++e)
    index_.emplace(keys_[e], static_cast<std::uint32_t>(e));

  fibers_.resize(dim);
  std::size_t const n = keys_.size();
  for (int m = 0; m < dim; ++m)
  {
    // Sort element indices by (key with node m cleared, node m).
    std::vector<std::uint32_t> order(n);
    for (std::size_t e = 0; e < n; ++e)
      order[e] = static_cast<std::uint32_t>(e);
    auto reduced = [&](std::uint32_t e) { return keys_[e].with_node(m, 0).bits(); };
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      auto const ra = reduced(a);
      auto const rb = reduced(b);
      if (ra != rb)
        return ra < rb;
      return keys_[a].node(m) < keys_[b].node(m);
    });

    Fibers &f = fibers_[m];
    f.fiber_of.assign(n, 0);
    f.members = order;
    f.offsets.clear();
    f.offsets.push_back(0);
    for (std::size_t pos = 0; pos < n; ++pos)
    {
      if (pos > 0 && reduced(order[pos]) != reduced(order[pos - 1]))
        f.offsets.push_back(static_cast<std::uint32_t>(pos));
      f.fiber_of[order[pos]] = static_cast<std::uint32_t>(f.offsets.size() - 1);
    }
    f.offsets.push_back(static_cast<std::uint32_t>(n));
  }
}

SpacePtr AdaptiveSpace::root_only(int dim, int max_level)
{
  return std::make_shared<AdaptiveSpace const>(dim, max_level,
                                               std::vector<ElementKey>{ElementKey::root()});
}

namespace
{
// All keys with per-dimension level vector satisfying accept(levels).
template <typename Accept>
std::vector<ElementKey> enumerate_levels(int dim, int level, Accept accept)
{
  std::vector<ElementKey> keys;
  std::vector<int> levels(dim, 0);
  while (true)
  {
    if (accept(levels))
    {
      // Enumerate all translations for this level vector.
      std::vector<std::uint32_t> j(dim, 0);
      while (true)
      {
        keys.push_back(ElementKey::from_levels(levels, j));
        int m = dim - 1;
        for (; m >= 0; --m)
        {
          std::uint32_t const count = levels[m] <= 1 ? 1u : (1u << (levels[m] - 1));
          if (++j[m] < count)
            break;
          j[m] = 0;
        }
        if (m < 0)
          break;
      }
    }
    int m = dim - 1;
    for (; m >= 0; --m)
    {
      if (++levels[m] <= level)
        break;
      levels[m] = 0;
    }
    if (m < 0)
      break;
  }
  return keys;
}
} // namespace

SpacePtr AdaptiveSpace::full_grid(int dim, int level)
{
  return std::make_shared<AdaptiveSpace const>(
      dim, level, enumerate_levels(dim, level, [](std::vector<int> const &) { return true; }));
}

SpacePtr AdaptiveSpace::sparse_grid(int dim, int level)
{
  return std::make_shared<AdaptiveSpace const>(
      dim, level, enumerate_levels(dim, level, [level](std::vector<int> const &l) {
        int s = 0;
        for (int v : l)
          s += v;
        return s <= level;
      }));
}

int AdaptiveSpace::finest_level() const
{
  int level = 0;
  for (auto const &key : keys_)
    level = std::max(level, key.level_max(dim_));
  return level;
}

bool AdaptiveSpace::is_hierarchically_complete() const
{
  if (!contains(ElementKey::root()))
    return false;
  for (auto const &key : keys_)
    for (int m = 0; m < dim_; ++m)
      if (key.node(m) != 0 && !contains(parent(key, m)))
        return false;
  return true;
}

bool AdaptiveSpace::is_leaf(std::size_t e) const
{
  for (int m = 0; m < dim_; ++m)
    for (auto const &child : children(keys_[e], m, max_level_))
      if (contains(child))
        return false;
  return true;
}

std::vector<ElementKey> complete_hierarchy(int dim, std::vector<ElementKey> keys)
{
  std::unordered_set<ElementKey, ElementKeyHash> present(keys.begin(), keys.end());
  present.insert(ElementKey::root());
  std::vector<ElementKey> stack(present.begin(), present.end());
  while (!stack.empty())
  {
    ElementKey const key = stack.back();
    stack.pop_back();
    for (int m = 0; m < dim; ++m)
    {
      if (key.node(m) == 0)
        continue;
      ElementKey const p = parent(key, m);
      if (present.insert(p).second)
        stack.push_back(p);
    }
  }
  std::vector<ElementKey> result(present.begin(), present.end());
  std::sort(result.begin(), result.end());
  return result;
}

} // namespace hjsg::mra
