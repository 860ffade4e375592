#pragma once

#include "hjsg/mra/element_key.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

namespace hjsg::mra
{
// Hierarchically complete set of active tensor elements. Elements are kept in
// sorted key order; that order is the canonical element index used by every
// coefficient field on this space.
//
// For each dimension m the elements are also grouped into fibers: sets of
// elements that agree in every node except the m-th. Fibers are stored in
// CSR form with members sorted by their m-th node, so 1D operators along m
// act independently per fiber.
class AdaptiveSpace
{
public:
  AdaptiveSpace(int dim, int max_level, std::vector<ElementKey> keys);

  static std::shared_ptr<AdaptiveSpace const> root_only(int dim, int max_level);
  static std::shared_ptr<AdaptiveSpace const> full_grid(int dim, int level);
  // Standard sparse grid: all elements with |l|_1 <= level.
  static std::shared_ptr<AdaptiveSpace const> sparse_grid(int dim, int level);

  int dim() const { return dim_; }
  int max_level() const { return max_level_; }
  std::size_t size() const { return keys_.size(); }
  std::span<ElementKey const> keys() const { return keys_; }
  ElementKey key(std::size_t e) const { return keys_[e]; }

  bool contains(ElementKey const &key) const { return index_.contains(key); }
  // Element index of key or -1 if inactive.
  std::ptrdiff_t find(ElementKey const &key) const
  {
    auto it = index_.find(key);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }

  // Fiber of element e along dimension m as element indices sorted by node.
  std::span<std::uint32_t const> fiber(int m, std::size_t e) const
  {
    auto const &f = fibers_[m];
    std::uint32_t const id = f.fiber_of[e];
    return {f.members.data() + f.offsets[id], f.offsets[id + 1] - f.offsets[id]};
  }
  std::size_t fiber_count(int m) const { return fibers_[m].offsets.size() - 1; }
  std::span<std::uint32_t const> fiber_by_id(int m, std::size_t id) const
  {
    auto const &f = fibers_[m];
    return {f.members.data() + f.offsets[id], f.offsets[id + 1] - f.offsets[id]};
  }

  // Largest per-dimension level over active elements.
  int finest_level() const;

  // True when every parent of every active element is active and the root
  // is present.
  bool is_hierarchically_complete() const;

  // An element is a leaf when it has no active child in any dimension.
  bool is_leaf(std::size_t e) const;

private:
  struct Fibers
  {
    std::vector<std::uint32_t> fiber_of;
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> members;
  };

  int dim_;
  int max_level_;
  std::vector<ElementKey> keys_;
  std::unordered_map<ElementKey, std::uint32_t, ElementKeyHash> index_;
  std::vector<Fibers> fibers_;
};

using SpacePtr = std::shared_ptr<AdaptiveSpace const>;

// Adds every missing ancestor of the given keys.
std::vector<ElementKey> complete_hierarchy(int dim, std::vector<ElementKey> keys);

} // namespace hjsg::mra
