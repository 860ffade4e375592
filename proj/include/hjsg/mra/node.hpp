#pragma once

#include <bit>
#include <cstdint>

namespace hjsg::mra
{
// A 1D hierarchical node (level n, translation j) stored as a heap index:
// node 0 is the level-0 element, level n >= 1 occupies [2^(n-1), 2^n).
// The parent of any node > 0 is node >> 1 and the children of node > 0 are
// 2*node and 2*node + 1, which is exactly the dyadic support nesting.
using Node = std::uint32_t;

// Hard cap on the per-dimension level; ElementKey packs nodes in 10 bits.
inline constexpr int level_cap = 10;

enum class Side
{
  left, // limit from below, x^-
  right // limit from above, x^+
};

inline int node_level(Node n) { return n == 0 ? 0 : std::bit_width(n); }

inline std::uint32_t node_translation(Node n)
{
  return n == 0 ? 0u : n - (Node{1} << (node_level(n) - 1));
}

inline Node make_node(int level, std::uint32_t j)
{
  return level == 0 ? Node{0} : (Node{1} << (level - 1)) + j;
}

// Number of nodes with level <= max_level.
inline int node_count(int max_level) { return 1 << max_level; }

inline Node parent(Node n) { return n >> 1; }

struct Interval
{
  double lo;
  double hi;
  double width() const { return hi - lo; }
};

// Support of the level-n detail functions: the level-(n-1) cell (level 0 and
// level 1 are both supported on the whole unit interval).
inline Interval node_support(Node n)
{
  int const level = node_level(n);
  if (level <= 1)
    return {0.0, 1.0};
  double const h = 1.0 / static_cast<double>(1u << (level - 1));
  double const j = static_cast<double>(node_translation(n));
  return {j * h, (j + 1.0) * h};
}

// True when a's support contains b's support and a is on b's parent chain.
inline bool is_ancestor_or_self(Node a, Node b)
{
  if (a == 0)
    return true;
  if (b == 0)
    return false;
  int const la = node_level(a);
  int const lb = node_level(b);
  return la <= lb && (b >> (lb - la)) == a;
}

// Finest-level cell of width 2^-level containing the one-sided point (x, s).
inline std::uint32_t cell_index(double x, Side s, int level)
{
  double const scaled = x * static_cast<double>(1u << level);
  double floor_value = static_cast<double>(static_cast<std::int64_t>(scaled));
  std::int64_t index = static_cast<std::int64_t>(floor_value);
  if (s == Side::left && scaled == floor_value)
    --index;
  std::int64_t const last = (std::int64_t{1} << level) - 1;
  if (index < 0)
    index = 0;
  if (index > last)
    index = last;
  return static_cast<std::uint32_t>(index);
}

// Node at the given level whose support contains (x, s); both ends of [0, 1]
// are treated as inside.
inline Node node_containing(double x, Side s, int level)
{
  if (level == 0)
    return 0;
  return make_node(level, cell_index(x, s, level - 1));
}

} // namespace hjsg::mra
