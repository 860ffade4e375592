#pragma once

#include "hjsg/mra/node.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace hjsg::mra
{
inline constexpr int max_dim = 6;
inline constexpr int node_bits = 10;

// Tensor element (l, j) packed as d node indices of 10 bits each. Dimension 0
// occupies the most significant slot, so integer order on keys is the
// lexicographic order on node tuples.
class ElementKey
{
public:
  ElementKey() = default;

  static ElementKey root() { return ElementKey{}; }

  static ElementKey from_nodes(std::vector<Node> const &nodes)
  {
    ElementKey key;
    for (std::size_t m = 0; m < nodes.size(); ++m)
      key = key.with_node(static_cast<int>(m), nodes[m]);
    return key;
  }

  static ElementKey from_levels(std::vector<int> const &levels,
                                std::vector<std::uint32_t> const &translations)
  {
    ElementKey key;
    for (std::size_t m = 0; m < levels.size(); ++m)
      key = key.with_node(static_cast<int>(m), make_node(levels[m], translations[m]));
    return key;
  }

  static ElementKey from_bits(std::uint64_t bits)
  {
    ElementKey key;
    key.bits_ = bits;
    return key;
  }

  Node node(int m) const
  {
    return static_cast<Node>((bits_ >> shift(m)) & mask);
  }

  ElementKey with_node(int m, Node n) const
  {
    ElementKey key = *this;
    key.bits_ = (bits_ & ~(mask << shift(m))) | (static_cast<std::uint64_t>(n) << shift(m));
    return key;
  }

  int level(int m) const { return node_level(node(m)); }
  std::uint32_t translation(int m) const { return node_translation(node(m)); }

  int level_sum(int dim) const
  {
    int s = 0;
    for (int m = 0; m < dim; ++m)
      s += level(m);
    return s;
  }

  int level_max(int dim) const
  {
    int s = 0;
    for (int m = 0; m < dim; ++m)
      s = std::max(s, level(m));
    return s;
  }

  std::uint64_t bits() const { return bits_; }

  auto operator<=>(ElementKey const &) const = default;

private:
  static constexpr std::uint64_t mask = (std::uint64_t{1} << node_bits) - 1;
  static int shift(int m) { return node_bits * (max_dim - 1 - m); }

  std::uint64_t bits_ = 0;
};

struct ElementKeyHash
{
  std::size_t operator()(ElementKey const &key) const
  {
    // splitmix64 finalizer
    std::uint64_t z = key.bits() + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

// Children of e along dimension m: one child for a level-0 node, two
// otherwise, none if the level cap is reached.
std::vector<ElementKey> children(ElementKey const &e, int m, int max_level);

// Parent of e along dimension m; requires level(m) > 0.
inline ElementKey parent(ElementKey const &e, int m)
{
  return e.with_node(m, parent(e.node(m)));
}

} // namespace hjsg::mra
